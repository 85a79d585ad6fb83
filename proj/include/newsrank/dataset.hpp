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

// Featurized pairs and query-grouped ranking datasets.
//
// Featurized-pair file: one JSON object per line,
//   {"query_id", "candidate_id", "date", "label"?, "features": {name: value}}
// with features in canonical order.

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "newsrank/common.hpp"
#include "newsrank/features.hpp"

namespace newsrank {

struct FeaturizedPair {
  std::string query_id;
  std::string candidate_id;
  Date date;
  std::optional<int> label;
  FeatureVector features;
};

inline void write_featurized(std::ostream& out,
                             const std::vector<FeaturizedPair>& pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["query_id"] = p.query_id;
    j["candidate_id"] = p.candidate_id;
    j["date"] = p.date.iso();
    if (p.label) j["label"] = *p.label;
    nlohmann::ordered_json f = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < p.features.size(); ++i) {
      f[p.features.names()[i]] = p.features.values()[i];
    }
    j["features"] = std::move(f);
    out << j.dump() << '\n';
  }
}

inline std::vector<FeaturizedPair> read_featurized(std::istream& in) {
  std::vector<FeaturizedPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::ordered_json::parse(line);
      FeaturizedPair p;
      p.query_id = j.at("query_id").get<std::string>();
      p.candidate_id = j.at("candidate_id").get<std::string>();
      p.date = Date::parse(j.at("date").get<std::string>());
      if (j.contains("label") && !j["label"].is_null()) {
        p.label = static_cast<int>(grade_from_int(j["label"].get<int>()));
      }
      for (const auto& [name, value] : j.at("features").items()) {
        double v = value.get<double>();
        if (!std::isfinite(v)) throw ParseError("non-finite feature " + name);
        p.features.add(name, v);
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad featurized record: ") + e.what(),
                       lineno);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct RankedItem {
  std::string candidate_id;
  std::vector<double> features;
  int grade = 0;
};

struct QueryGroup {
  std::string query_id;
  Date date;
  std::vector<RankedItem> items;
};

/// Labelled pairs grouped by query. Every item carries exactly
/// `feature_names.size()` values. Grades are {0,1,2}, or {0,1} once
/// `binary` is set.
struct RankingDataset {
  std::vector<std::string> feature_names;
  std::vector<QueryGroup> groups;
  bool binary = false;

  std::size_t num_items() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.items.size();
    return n;
  }

  int max_grade() const { return binary ? 1 : 2; }
};

/// Groups labelled pairs by query (ordered by query id, items by candidate
/// id) keeping only the members of `set`. Unlabelled pairs are an error.
inline RankingDataset to_dataset(const std::vector<FeaturizedPair>& pairs,
                                 FeatureSet set) {
  RankingDataset ds;
  ds.feature_names = feature_set_members(set);
  std::map<std::string, QueryGroup> groups;
  for (const auto& p : pairs) {
    if (!p.label) {
      throw ConfigError("pair (" + p.query_id + ", " + p.candidate_id +
                        ") has no label");
    }
    auto fv = assemble(p.features, set);
    auto& g = groups[p.query_id];
    g.query_id = p.query_id;
    g.date = p.date;
    g.items.push_back({p.candidate_id, fv.values(), *p.label});
  }
  for (auto& [_, g] : groups) {
    std::sort(g.items.begin(), g.items.end(),
              [](const RankedItem& a, const RankedItem& b) {
                return a.candidate_id < b.candidate_id;
              });
    ds.groups.push_back(std::move(g));
  }
  return ds;
}

/// Inverse of to_dataset, for writing splits back out as featurized pairs.
inline std::vector<FeaturizedPair> to_featurized(const RankingDataset& ds) {
  std::vector<FeaturizedPair> out;
  for (const auto& g : ds.groups) {
    for (const auto& item : g.items) {
      FeaturizedPair p{g.query_id, item.candidate_id, g.date, item.grade, {}};
      for (std::size_t f = 0; f < ds.feature_names.size(); ++f) {
        p.features.add(ds.feature_names[f], item.features[f]);
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace newsrank
