// Copyright 2026 The newsrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Crowd judgments, gold-label aggregation and dataset preparation.
//
// Judgment file: CSV with header `query_id,candidate_id,annotator_id,grade`,
// grade in {0 = not relevant, 1 = relevant, 2 = very relevant}.

#pragma once

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "newsrank/common.hpp"
#include "newsrank/corpus.hpp"
#include "newsrank/dataset.hpp"
#include "newsrank/pairing.hpp"

namespace newsrank {

struct Judgment {
  std::string query_id;
  std::string candidate_id;
  std::string annotator_id;
  Grade grade = Grade::NotRelevant;
};

namespace detail {

// One CSV record; supports double-quoted fields with "" escapes.
inline std::vector<std::string> split_csv(std::string_view line,
                                          std::size_t lineno) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", lineno);
  out.push_back(std::move(field));
  return out;
}

inline std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + '"';
}

}  // namespace detail

inline std::vector<Judgment> read_judgments(std::istream& in) {
  std::vector<Judgment> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != "query_id,candidate_id,annotator_id,grade") {
        throw ParseError("expected judgment header", lineno);
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    auto cols = detail::split_csv(line, lineno);
    if (cols.size() != 4) {
      throw ParseError("expected 4 columns", lineno);
    }
    auto g = detail::parse_uint(detail::trim(cols[3]));
    if (!g || *g > 2) throw ParseError("grade must be 0, 1 or 2", lineno);
    out.push_back({cols[0], cols[1], cols[2], static_cast<Grade>(*g)});
  }
  return out;
}

inline void write_judgments(std::ostream& out,
                            const std::vector<Judgment>& judgments) {
  out << "query_id,candidate_id,annotator_id,grade\n";
  for (const auto& j : judgments) {
    out << detail::quote_csv(j.query_id) << ','
        << detail::quote_csv(j.candidate_id) << ','
        << detail::quote_csv(j.annotator_id) << ',' << static_cast<int>(j.grade)
        << '\n';
  }
}

/// Most frequent grade; ties go to the lowest tied grade. nullopt when there
/// are fewer than `min_judgments` grades.
inline std::optional<Grade> aggregate(const std::vector<Grade>& grades,
                                      std::size_t min_judgments = 3) {
  if (grades.empty() || grades.size() < min_judgments) return std::nullopt;
  std::array<std::size_t, 3> count{};
  for (Grade g : grades) ++count[static_cast<std::size_t>(g)];
  std::size_t best = 0;
  for (std::size_t g = 1; g < 3; ++g) {
    if (count[g] > count[best]) best = g;
  }
  return static_cast<Grade>(best);
}

inline std::map<PairKey, std::vector<Grade>> group_judgments(
    const std::vector<Judgment>& judgments) {
  std::map<PairKey, std::vector<Grade>> out;
  for (const auto& j : judgments) {
    out[{j.query_id, j.candidate_id}].push_back(j.grade);
  }
  return out;
}

struct GoldLabels {
  std::map<PairKey, Grade> labels;
  /// Pairs with too few judgments to aggregate.
  std::vector<PairKey> unlabeled;
};

inline GoldLabels aggregate_all(const std::vector<Judgment>& judgments,
                                std::size_t min_judgments = 3) {
  GoldLabels out;
  for (const auto& [key, grades] : group_judgments(judgments)) {
    if (auto g = aggregate(grades, min_judgments)) {
      out.labels.emplace(key, *g);
    } else {
      out.unlabeled.push_back(key);
    }
  }
  return out;
}

/// Mean over pairs of the fraction of judgments that equal the pair's
/// modal grade, as a percentage. Pairs with fewer than two judgments are
/// not counted.
inline double agreement(const std::vector<Judgment>& judgments) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (const auto& [_, grades] : group_judgments(judgments)) {
    if (grades.size() < 2) continue;
    Grade mode = *aggregate(grades, 1);
    auto agree = std::count(grades.begin(), grades.end(), mode);
    sum += static_cast<double>(agree) / static_cast<double>(grades.size());
    ++pairs;
  }
  if (pairs == 0) throw ConfigError("no pairs with two or more judgments");
  return 100.0 * sum / static_cast<double>(pairs);
}

/// Attaches gold labels to featurized pairs. Pairs without a label are
/// dropped.
inline std::vector<FeaturizedPair> attach_labels(
    const std::vector<FeaturizedPair>& pairs, const GoldLabels& gold) {
  std::vector<FeaturizedPair> out;
  for (const auto& p : pairs) {
    auto it = gold.labels.find({p.query_id, p.candidate_id});
    if (it == gold.labels.end()) continue;
    auto labelled = p;
    labelled.label = static_cast<int>(it->second);
    out.push_back(std::move(labelled));
  }
  return out;
}

/// Keeps only queries with at least one item graded above zero.
inline RankingDataset filter_queries(const RankingDataset& ds) {
  RankingDataset out{ds.feature_names, {}, ds.binary};
  for (const auto& g : ds.groups) {
    bool any = std::any_of(g.items.begin(), g.items.end(),
                           [](const RankedItem& i) { return i.grade > 0; });
    if (any) out.groups.push_back(g);
  }
  return out;
}

/// Removes relevant (grade 1) items and maps very relevant to 1. A dataset
/// already in binary mode is returned unchanged.
inline RankingDataset binary_mode(const RankingDataset& ds) {
  if (ds.binary) return ds;
  RankingDataset out{ds.feature_names, {}, true};
  for (const auto& g : ds.groups) {
    QueryGroup kept{g.query_id, g.date, {}};
    for (const auto& item : g.items) {
      if (item.grade == 1) continue;
      auto copy = item;
      copy.grade = item.grade == 2 ? 1 : 0;
      kept.items.push_back(std::move(copy));
    }
    out.groups.push_back(std::move(kept));
  }
  return out;
}

struct DateSplit {
  RankingDataset train;
  RankingDataset valid;
  RankingDataset test;
};

/// Partitions queries by date: the first `train_days` distinct dates go to
/// train, the next `valid_days` to validation and the rest to test.
inline DateSplit split_by_date(const RankingDataset& ds,
                               std::size_t train_days = 10,
                               std::size_t valid_days = 2,
                               std::size_t test_days = 2) {
  std::set<Date> dates;
  for (const auto& g : ds.groups) dates.insert(g.date);
  if (dates.size() < train_days + valid_days + test_days) {
    throw ConfigError("dataset spans " + std::to_string(dates.size()) +
                      " distinct days, need " +
                      std::to_string(train_days + valid_days + test_days));
  }
  std::map<Date, std::size_t> index;
  for (const auto& d : dates) index.emplace(d, index.size());

  DateSplit out;
  for (auto* part : {&out.train, &out.valid, &out.test}) {
    part->feature_names = ds.feature_names;
    part->binary = ds.binary;
  }
  for (const auto& g : ds.groups) {
    std::size_t day = index.at(g.date);
    if (day < train_days) {
      out.train.groups.push_back(g);
    } else if (day < train_days + valid_days) {
      out.valid.groups.push_back(g);
    } else {
      out.test.groups.push_back(g);
    }
  }
  return out;
}

}  // namespace newsrank
