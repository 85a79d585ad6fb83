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

// Shared fixtures and random generators for the test suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "newsrank/corpus.hpp"
#include "newsrank/dataset.hpp"
#include "newsrank/labels.hpp"
#include "newsrank/ltr.hpp"
#include "newsrank/textproc.hpp"

namespace fixtures {

using namespace newsrank;

inline QueryEvent q0() {
  return {"q0",
          "A suicide bomber detonates a vehicle full of explosives at a "
          "military camp in Gao, Mali, killing at least 76 people and "
          "wounding scores more in Mali's deadliest terrorist attack in "
          "history.",
          Date{2017, 1, 17}};
}

inline CandidateTriple c0() {
  return {"c0", "Armed Gang", "Carry out suicide bombing", "183", "",
          "Armed rebel", "Gao", "Mali", Date{2017, 1, 17}};
}

inline CandidateTriple c1() {
  return {"c1", "Armed Gang", "Carry out suicide bombing", "183", "",
          "Military", "Bamako", "Mali", Date{2017, 1, 17}};
}

inline CandidateTriple make_statement() {
  return {"cm", "Government", "Make statement", "010", "Make public statement",
          "Citizens", "Bamako", "Mali", Date{2017, 1, 17}};
}

/// Reads "word<TAB or spaces>stem" style reference files line by line.
inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

inline std::string random_word(std::mt19937_64& rng, std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
  return "t" + std::to_string(pick(rng));
}

inline TokenList random_doc(std::mt19937_64& rng, std::size_t max_len,
                            std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  TokenList d(len(rng));
  for (auto& t : d) t = random_word(rng, vocab);
  return d;
}

/// Dataset of `groups` queries with `per_group` items and `features`
/// uniform features; grades drawn from {0,1,2} with the given weights.
inline RankingDataset random_dataset(std::mt19937_64& rng, std::size_t groups,
                                     std::size_t per_group,
                                     std::size_t features,
                                     std::vector<double> grade_weights = {6, 2, 1}) {
  RankingDataset ds;
  for (std::size_t f = 0; f < features; ++f) {
    ds.feature_names.push_back("f" + std::to_string(f));
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::discrete_distribution<int> grade(grade_weights.begin(),
                                        grade_weights.end());
  for (std::size_t g = 0; g < groups; ++g) {
    QueryGroup qg;
    qg.query_id = "q" + std::to_string(1000 + g);
    qg.date = Date{2017, 1, 1};
    for (std::size_t i = 0; i < per_group; ++i) {
      RankedItem item;
      item.candidate_id = "c" + std::to_string(1000 + i);
      for (std::size_t f = 0; f < features; ++f) {
        // Coarse values so that ties occur.
        item.features.push_back(std::round(u(rng) * 20.0) / 20.0);
      }
      item.grade = grade(rng);
      qg.items.push_back(std::move(item));
    }
    ds.groups.push_back(std::move(qg));
  }
  return ds;
}

/// Separable ranking data: grade = 1 when a hidden linear score of the
/// features exceeds the group median, else 0.
inline RankingDataset linear_dataset(std::uint64_t seed, std::size_t groups,
                                     std::size_t per_group,
                                     std::size_t features,
                                     const std::string& prefix) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  // The weight vector depends only on the feature count so train, valid and
  // test sets generated with different seeds share it.
  std::mt19937_64 wrng(12345);
  std::vector<double> w(features);
  for (auto& v : w) v = n(wrng);

  RankingDataset ds;
  for (std::size_t f = 0; f < features; ++f) {
    ds.feature_names.push_back("f" + std::to_string(f));
  }
  for (std::size_t g = 0; g < groups; ++g) {
    QueryGroup qg;
    qg.query_id = prefix + std::to_string(1000 + g);
    qg.date = Date{2017, 1, 1};
    std::vector<double> scores;
    for (std::size_t i = 0; i < per_group; ++i) {
      RankedItem item;
      item.candidate_id = "c" + std::to_string(1000 + i);
      double s = 0.0;
      for (std::size_t f = 0; f < features; ++f) {
        double x = n(rng);
        item.features.push_back(x);
        s += w[f] * x;
      }
      scores.push_back(s);
      qg.items.push_back(std::move(item));
    }
    auto sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    double median = (sorted[(per_group - 1) / 2] + sorted[per_group / 2]) / 2.0;
    for (std::size_t i = 0; i < per_group; ++i) {
      qg.items[i].grade = scores[i] > median ? 1 : 0;
    }
    ds.groups.push_back(std::move(qg));
  }
  return ds;
}

/// Judgments whose majority-vote aggregation yields exactly the given
/// number of pairs per grade (3 votes per pair, some with one dissent).
/// Pairs are spread over `queries` queries so that every query holds at
/// least one very relevant pair.
inline std::vector<Judgment> judgments_with_counts(std::size_t vr,
                                                   std::size_t r,
                                                   std::size_t nr,
                                                   std::size_t queries,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> grades;
  grades.insert(grades.end(), vr, 2);
  grades.insert(grades.end(), r, 1);
  grades.insert(grades.end(), nr, 0);
  std::shuffle(grades.begin() + static_cast<long>(queries), grades.end(), rng);
  std::vector<Judgment> out;
  std::uniform_int_distribution<int> dissent(0, 9);
  for (std::size_t i = 0; i < grades.size(); ++i) {
    std::string qid = "q" + std::to_string(100 + i % queries);
    std::string cid = "c" + std::to_string(100000 + i);
    auto g = static_cast<Grade>(grades[i]);
    int d = dissent(rng);
    for (int a = 0; a < 3; ++a) {
      Grade vote = g;
      // One dissenting vote in ~10% of pairs never changes the majority.
      if (a == 2 && d == 0) vote = static_cast<Grade>((grades[i] + 1) % 3);
      out.push_back({qid, cid, "a" + std::to_string(a), vote});
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

/// Direct-formula scorers that recompute every statistic from the raw
/// documents. Independent of CorpusStats and of the library scorers.
namespace oracle {

inline std::vector<std::string> distinct(const TokenList& q) {
  std::vector<std::string> out;
  for (const auto& t : q) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  }
  return out;
}

inline double freq(const TokenList& doc, const std::string& t) {
  return static_cast<double>(std::count(doc.begin(), doc.end(), t));
}

inline double df(const std::vector<TokenList>& docs, const std::string& t) {
  double n = 0;
  for (const auto& d : docs) n += freq(d, t) > 0 ? 1 : 0;
  return n;
}

inline double tf(const TokenList& q, const TokenList& doc) {
  double s = 0;
  for (const auto& t : distinct(q)) s += freq(doc, t);
  return s;
}

inline double tfidf(const TokenList& q, const TokenList& doc,
                    const std::vector<TokenList>& docs) {
  double n = static_cast<double>(docs.size());
  double s = 0;
  for (const auto& t : distinct(q)) {
    s += freq(doc, t) * (std::log((n + 1.0) / (df(docs, t) + 1.0)) + 1.0);
  }
  return s;
}

inline double bm25(const TokenList& q, const TokenList& doc,
                   const std::vector<TokenList>& docs, double k1 = 1.2,
                   double b = 0.75) {
  double n = static_cast<double>(docs.size());
  double total = 0;
  for (const auto& d : docs) total += static_cast<double>(d.size());
  double avgdl = total / n;
  double s = 0;
  for (const auto& t : distinct(q)) {
    double f = freq(doc, t);
    if (f == 0) continue;
    double dft = df(docs, t);
    double idf = std::log(1.0 + (n - dft + 0.5) / (dft + 0.5));
    double len = avgdl > 0 ? static_cast<double>(doc.size()) / avgdl : 1.0;
    s += idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * len));
  }
  return s;
}

// Metric definitions written out longhand.

inline double precision_at(const std::vector<int>& g, std::size_t k) {
  double hits = 0;
  for (std::size_t i = 0; i < g.size() && i < k; ++i) hits += g[i] > 0;
  return hits / static_cast<double>(k);
}

inline double average_precision(const std::vector<int>& g) {
  double sum = 0;
  int relevant = 0;
  for (std::size_t r = 0; r < g.size(); ++r) {
    if (g[r] == 0) continue;
    ++relevant;
    double above = 0;
    for (std::size_t i = 0; i <= r; ++i) above += g[i] > 0;
    sum += above / static_cast<double>(r + 1);
  }
  return relevant ? sum / relevant : 0.0;
}

inline double reciprocal_rank(const std::vector<int>& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] > 0) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

inline double dcg(const std::vector<int>& g, std::size_t k) {
  double s = 0;
  for (std::size_t i = 0; i < g.size() && i < k; ++i) {
    s += (std::pow(2.0, g[i]) - 1.0) / (std::log(static_cast<double>(i) + 2.0) / std::log(2.0));
  }
  return s;
}

/// Highest DCG@k over every ordering of the grades.
inline double max_dcg(std::vector<int> g, std::size_t k) {
  std::sort(g.begin(), g.end());
  double best = 0;
  do {
    best = std::max(best, dcg(g, k));
  } while (std::next_permutation(g.begin(), g.end()));
  return best;
}

inline double ndcg(const std::vector<int>& g, std::size_t k, double ideal) {
  return ideal == 0.0 ? 1.0 : dcg(g, k) / ideal;
}

/// Replays a trained RankBoost model round by round over every
/// higher-graded/lower-graded pair in each group. Returns the weighted
/// error of each chosen stump under the pair distribution in force at that
/// round (ties count half), and the mean exponential pairwise loss after
/// each round, preceded by the initial loss 1.
struct BoostReplay {
  std::vector<double> error;
  std::vector<double> loss;
};

inline BoostReplay replay_rankboost(const RankingDataset& ds,
                                    const RankBoostModel& model) {
  std::vector<std::pair<const RankedItem*, const RankedItem*>> pairs;
  for (const auto& g : ds.groups)
    for (const auto& a : g.items)
      for (const auto& b : g.items)
        if (a.grade > b.grade) pairs.emplace_back(&a, &b);
  std::vector<double> margin(pairs.size(), 0.0);  // H(hi) - H(lo)
  BoostReplay out;
  out.loss.push_back(1.0);
  for (const auto& round : model.rounds) {
    double z = 0;
    for (double m : margin) z += std::exp(-m);
    double err = 0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      double d = std::exp(-margin[p]) / z;
      double dh = round.stump(pairs[p].first->features) -
                  round.stump(pairs[p].second->features);
      err += d * (dh < 0 ? 1.0 : dh == 0 ? 0.5 : 0.0);
      margin[p] += round.alpha * dh;
    }
    out.error.push_back(err);
    double loss = 0;
    for (double m : margin) loss += std::exp(-m);
    out.loss.push_back(loss / static_cast<double>(pairs.size()));
  }
  return out;
}

}  // namespace oracle

}  // namespace fixtures
