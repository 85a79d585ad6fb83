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

// Ranking metrics over graded relevance lists and a paired t-test.
//
// Every metric takes the grades of one query's items in ranked order. An item
// is relevant when its grade is at least 1. NDCG uses gain 2^g - 1 and
// discount 1/log2(rank + 1); a list without any relevant item has NDCG 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "json.hpp"
#include "newsrank/common.hpp"

namespace newsrank {

inline double precision_at_k(std::span<const int> grades, std::size_t k) {
  if (k == 0) throw ConfigError("precision cutoff must be >= 1");
  std::size_t n = std::min(k, grades.size());
  auto hits = std::count_if(grades.begin(), grades.begin() + n,
                            [](int g) { return g >= 1; });
  return static_cast<double>(hits) / static_cast<double>(k);
}

inline double dcg_at_k(std::span<const int> grades, std::size_t k) {
  std::size_t n = std::min(k, grades.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dcg += (std::exp2(grades[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

inline double ndcg_at_k(std::span<const int> grades, std::size_t k) {
  if (k == 0) throw ConfigError("NDCG cutoff must be >= 1");
  std::vector<int> ideal(grades.begin(), grades.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = dcg_at_k(ideal, k);
  if (idcg == 0.0) return 1.0;
  return dcg_at_k(grades, k) / idcg;
}

/// Mean of precision at each relevant rank; 0 when nothing is relevant.
inline double average_precision(std::span<const int> grades) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < grades.size(); ++i) {
    if (grades[i] >= 1) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

inline double mean_average_precision(
    const std::vector<std::vector<int>>& ranked_lists) {
  if (ranked_lists.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& l : ranked_lists) sum += average_precision(l);
  return sum / static_cast<double>(ranked_lists.size());
}

/// 1-based rank of the first relevant item.
inline std::optional<std::size_t> first_relevant_rank(
    std::span<const int> grades) {
  for (std::size_t i = 0; i < grades.size(); ++i)
    if (grades[i] >= 1) return i + 1;
  return std::nullopt;
}

inline double reciprocal_rank(std::span<const int> grades) {
  auto r = first_relevant_rank(grades);
  return r ? 1.0 / static_cast<double>(*r) : 0.0;
}

/// Mean reciprocal rank; a query without a relevant item contributes 0.
inline double mrr(std::span<const std::optional<std::size_t>> first_ranks) {
  if (first_ranks.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : first_ranks) {
    if (r) sum += 1.0 / static_cast<double>(*r);
  }
  return sum / static_cast<double>(first_ranks.size());
}

// ---------------------------------------------------------------------------
// Paired t-test

struct TTestResult {
  double mean_difference = 0.0;
  double t = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  /// Differences have zero variance; t is undefined.
  bool degenerate = false;
};

/// Two-tailed P(|T| >= |t|) for Student's t with `df` degrees of freedom.
inline double student_t_two_tailed(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  double x = df / (df + t * t);
  return boost::math::ibeta(df / 2.0, 0.5, x);
}

/// Paired two-tailed t-test of a against b. With zero-variance differences
/// the result is flagged degenerate: p = 1 when the mean difference is 0,
/// else p = 0.
inline TTestResult paired_ttest(std::span<const double> a,
                                std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ConfigError("paired samples differ in length");
  }
  if (a.size() < 2) throw ConfigError("paired t-test needs n >= 2");
  std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  double var = ss / static_cast<double>(n - 1);

  TTestResult r;
  r.mean_difference = mean;
  r.df = n - 1;
  // Relative tolerance: differences that are equal up to rounding count as
  // constant.
  double scale = std::max(1.0, std::abs(mean));
  if (var <= 1e-24 * scale * scale) {
    r.degenerate = true;
    r.t = mean == 0.0 ? 0.0
                      : std::copysign(std::numeric_limits<double>::infinity(),
                                      mean);
    r.p_value = mean == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.t = mean / std::sqrt(var / static_cast<double>(n));
  r.p_value = student_t_two_tailed(r.t, static_cast<double>(r.df));
  return r;
}

// ---------------------------------------------------------------------------
// Reports

struct QueryMetrics {
  std::string query_id;
  double average_precision = 0.0;
  double reciprocal_rank = 0.0;
  std::vector<double> precision;  // one per cutoff
  std::vector<double> ndcg;       // one per cutoff
};

struct EvaluationReport {
  std::vector<std::size_t> cutoffs;
  std::vector<QueryMetrics> queries;
  double map = 0.0;
  double mrr = 0.0;
  std::vector<double> precision;
  std::vector<double> ndcg;

  /// Per-query NDCG at the given cutoff, in query order.
  std::vector<double> per_query_ndcg(std::size_t k) const {
    auto it = std::find(cutoffs.begin(), cutoffs.end(), k);
    if (it == cutoffs.end()) {
      throw ConfigError("cutoff " + std::to_string(k) + " not evaluated");
    }
    auto idx = static_cast<std::size_t>(it - cutoffs.begin());
    std::vector<double> out;
    for (const auto& q : queries) out.push_back(q.ndcg[idx]);
    return out;
  }

  double mean_ndcg(std::size_t k) const {
    auto it = std::find(cutoffs.begin(), cutoffs.end(), k);
    if (it == cutoffs.end()) {
      throw ConfigError("cutoff " + std::to_string(k) + " not evaluated");
    }
    return ndcg[static_cast<std::size_t>(it - cutoffs.begin())];
  }
};

/// Scores ranked lists (query id, grades in ranked order).
inline EvaluationReport evaluate_rankings(
    const std::vector<std::pair<std::string, std::vector<int>>>& ranked,
    std::vector<std::size_t> cutoffs = {5, 10}) {
  EvaluationReport rep;
  rep.cutoffs = std::move(cutoffs);
  rep.precision.assign(rep.cutoffs.size(), 0.0);
  rep.ndcg.assign(rep.cutoffs.size(), 0.0);
  for (const auto& [qid, grades] : ranked) {
    QueryMetrics m;
    m.query_id = qid;
    m.average_precision = average_precision(grades);
    m.reciprocal_rank = reciprocal_rank(grades);
    for (std::size_t k : rep.cutoffs) {
      m.precision.push_back(precision_at_k(grades, k));
      m.ndcg.push_back(ndcg_at_k(grades, k));
    }
    rep.queries.push_back(std::move(m));
  }
  if (rep.queries.empty()) return rep;
  double n = static_cast<double>(rep.queries.size());
  for (const auto& q : rep.queries) {
    rep.map += q.average_precision / n;
    rep.mrr += q.reciprocal_rank / n;
    for (std::size_t i = 0; i < rep.cutoffs.size(); ++i) {
      rep.precision[i] += q.precision[i] / n;
      rep.ndcg[i] += q.ndcg[i] / n;
    }
  }
  return rep;
}

inline nlohmann::ordered_json report_to_json(const EvaluationReport& rep) {
  nlohmann::ordered_json agg;
  agg["MAP"] = rep.map;
  for (std::size_t i = 0; i < rep.cutoffs.size(); ++i) {
    agg["P@" + std::to_string(rep.cutoffs[i])] = rep.precision[i];
  }
  for (std::size_t i = 0; i < rep.cutoffs.size(); ++i) {
    agg["NDCG@" + std::to_string(rep.cutoffs[i])] = rep.ndcg[i];
  }
  agg["MRR"] = rep.mrr;

  auto per_query = nlohmann::ordered_json::array();
  for (const auto& q : rep.queries) {
    nlohmann::ordered_json j;
    j["query_id"] = q.query_id;
    j["AP"] = q.average_precision;
    for (std::size_t i = 0; i < rep.cutoffs.size(); ++i) {
      j["P@" + std::to_string(rep.cutoffs[i])] = q.precision[i];
    }
    for (std::size_t i = 0; i < rep.cutoffs.size(); ++i) {
      j["NDCG@" + std::to_string(rep.cutoffs[i])] = q.ndcg[i];
    }
    j["RR"] = q.reciprocal_rank;
    per_query.push_back(std::move(j));
  }
  nlohmann::ordered_json out;
  out["queries"] = rep.queries.size();
  out["aggregate"] = std::move(agg);
  out["per_query"] = std::move(per_query);
  return out;
}

}  // namespace newsrank
