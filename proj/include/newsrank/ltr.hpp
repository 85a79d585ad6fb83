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

// Learning-to-rank models: RankBoost, LambdaMART and a random forest.
//
// All three are trained on a RankingDataset (feature vectors grouped by
// query) and score a single feature vector to a real number; ranking sorts a
// query's candidates by descending score with ties broken by ascending
// candidate id.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "newsrank/common.hpp"
#include "newsrank/dataset.hpp"
#include "newsrank/eval.hpp"
#include "newsrank/features.hpp"
#include "newsrank/tree.hpp"

namespace newsrank {

enum class ModelKind { RankBoost, LambdaMART, RandomForest };

inline std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::RankBoost: return "rb";
    case ModelKind::LambdaMART: return "lm";
    case ModelKind::RandomForest: return "rf";
  }
  return "?";
}

inline ModelKind model_kind_from_string(std::string_view s) {
  if (s == "rb" || s == "rankboost") return ModelKind::RankBoost;
  if (s == "lm" || s == "lambdamart") return ModelKind::LambdaMART;
  if (s == "rf" || s == "random-forest") return ModelKind::RandomForest;
  throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Flattened training view

/// Rows of a dataset in group order, with group boundaries.
struct FlatDataset {
  FeatureMatrix x;
  std::vector<int> grade;
  std::vector<std::size_t> group_begin;  // size = groups + 1

  explicit FlatDataset(const RankingDataset& ds) : x(ds.feature_names.size()) {
    group_begin.push_back(0);
    for (const auto& g : ds.groups) {
      for (const auto& item : g.items) {
        if (item.features.size() != ds.feature_names.size()) {
          throw ConfigError("item " + item.candidate_id +
                            " has the wrong number of features");
        }
        x.add_row(item.features);
        grade.push_back(item.grade);
      }
      group_begin.push_back(x.rows());
    }
  }

  std::size_t rows() const { return x.rows(); }
  std::size_t groups() const { return group_begin.size() - 1; }
};

/// (higher, lower) row pairs within a group with strictly different grades.
inline std::vector<std::pair<int, int>> crucial_pairs(const FlatDataset& d) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t g = 0; g < d.groups(); ++g) {
    for (auto i = d.group_begin[g]; i < d.group_begin[g + 1]; ++i) {
      for (auto j = d.group_begin[g]; j < d.group_begin[g + 1]; ++j) {
        if (d.grade[i] > d.grade[j]) {
          out.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// RankBoost

/// Threshold weak ranker with output in {0, 1}: 1 when x[feature] > threshold
/// (direction +1) or when x[feature] <= threshold (direction -1).
struct Stump {
  int feature = 0;
  double threshold = 0.0;
  int direction = 1;

  double operator()(std::span<const double> x) const {
    bool above = x[static_cast<std::size_t>(feature)] > threshold;
    return (direction > 0 ? above : !above) ? 1.0 : 0.0;
  }
};

struct RankBoostRound {
  Stump stump;
  double alpha = 0.0;
};

struct RankBoostParams {
  int rounds = 100;
};

/// Per-round diagnostics from RankBoost training.
struct RankBoostTrace {
  /// Weighted pairwise error of the selected stump (ties count half).
  std::vector<double> error;
  /// Normaliser Z_t of the pair distribution update.
  std::vector<double> normalizer;
};

struct RankBoostModel {
  std::vector<RankBoostRound> rounds;

  double score(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& r : rounds) s += r.alpha * r.stump(x);
    return s;
  }
};

/// Pairwise RankBoost with threshold stumps. Each round picks the stump that
/// maximises r = Σ D(i,j) (h(x_i) - h(x_j)) over crucial pairs, i.e. the
/// smallest weighted misranking error ε = (1 - r) / 2, and weights it by
/// α = ½ ln((1 - ε) / ε). Training halts early when no stump has ε < 0.5 or
/// the crucial pairs are perfectly separated.
inline RankBoostModel train_rankboost(const RankingDataset& train,
                                      const RankBoostParams& params,
                                      RankBoostTrace* trace = nullptr) {
  if (params.rounds < 1) throw ConfigError("rounds must be >= 1");
  FlatDataset d(train);
  auto pairs = crucial_pairs(d);
  if (pairs.empty()) throw TrainingError("no crucial pairs in training data");

  const std::size_t n = d.rows();
  const std::size_t nf = d.x.cols();
  std::vector<double> weight(pairs.size(), 1.0 / static_cast<double>(pairs.size()));

  // Rows sorted by each feature, descending; thresholds are midpoints
  // between adjacent distinct values.
  std::vector<std::vector<int>> order(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    order[f].resize(n);
    std::iota(order[f].begin(), order[f].end(), 0);
    std::stable_sort(order[f].begin(), order[f].end(), [&](int a, int b) {
      return d.x.at(static_cast<std::size_t>(a), f) >
             d.x.at(static_cast<std::size_t>(b), f);
    });
  }

  RankBoostModel model;
  std::vector<double> potential(n);
  for (int round = 0; round < params.rounds; ++round) {
    std::fill(potential.begin(), potential.end(), 0.0);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      potential[static_cast<std::size_t>(pairs[p].first)] += weight[p];
      potential[static_cast<std::size_t>(pairs[p].second)] -= weight[p];
    }

    // r(θ) for h = 1[x > θ] is the potential mass above θ; the reversed
    // stump has -r(θ) because the potentials sum to zero.
    double best_r = 0.0;
    Stump best;
    bool found = false;
    for (std::size_t f = 0; f < nf; ++f) {
      const auto& ord = order[f];
      double above = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        above += potential[static_cast<std::size_t>(ord[i])];
        double v = d.x.at(static_cast<std::size_t>(ord[i]), f);
        double next = d.x.at(static_cast<std::size_t>(ord[i + 1]), f);
        if (!(next < v)) continue;
        if (std::abs(above) > std::abs(best_r) + 1e-15) {
          double mid = next + (v - next) / 2.0;
          if (!(mid < v)) mid = next;
          best_r = above;
          best = Stump{static_cast<int>(f), mid, above > 0 ? 1 : -1};
          found = true;
        }
      }
    }
    if (!found) break;

    double r = std::min(1.0, std::abs(best_r));
    double eps = (1.0 - r) / 2.0;
    if (!(eps < 0.5)) break;
    double alpha = 0.5 * std::log((1.0 - std::max(eps, 1e-10)) /
                                  std::max(eps, 1e-10));

    double z = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      double dh = best(d.x.row(static_cast<std::size_t>(pairs[p].first))) -
                  best(d.x.row(static_cast<std::size_t>(pairs[p].second)));
      weight[p] *= std::exp(-alpha * dh);
      z += weight[p];
    }
    for (auto& w : weight) w /= z;

    model.rounds.push_back({best, alpha});
    if (trace) {
      trace->error.push_back(eps);
      trace->normalizer.push_back(z);
    }
    if (eps <= 0.0) break;  // perfectly separated
  }
  return model;
}

// ---------------------------------------------------------------------------
// LambdaMART

struct LambdaMARTParams {
  int num_trees = 100;
  double learning_rate = 0.1;
  int max_leaves = 10;
  int min_samples_leaf = 1;
  /// Stop after this many trees without validation NDCG@10 improvement.
  int patience = 50;
  std::size_t cutoff = 10;
};

struct LambdaMARTTrace {
  std::vector<double> train_ndcg;  // after each tree
  std::vector<double> valid_ndcg;  // after each tree (empty without valid)
  std::size_t best_iteration = 0;  // number of trees kept
};

struct LambdaMARTModel {
  std::vector<RegressionTree> trees;
  double learning_rate = 0.1;

  double score(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& t : trees) s += learning_rate * t.predict(x);
    return s;
  }
};

namespace detail {

// Rows of one group ordered by descending score, ties by row index.
inline std::vector<std::size_t> ranked_rows(std::span<const double> scores,
                                            std::size_t begin,
                                            std::size_t end) {
  std::vector<std::size_t> idx(end - begin);
  std::iota(idx.begin(), idx.end(), begin);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return idx;
}

inline double mean_ndcg(const FlatDataset& d, std::span<const double> scores,
                        std::size_t cutoff) {
  if (d.groups() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t g = 0; g < d.groups(); ++g) {
    auto idx = ranked_rows(scores, d.group_begin[g], d.group_begin[g + 1]);
    std::vector<int> grades;
    for (auto i : idx) grades.push_back(d.grade[i]);
    sum += ndcg_at_k(grades, cutoff);
  }
  return sum / static_cast<double>(d.groups());
}

}  // namespace detail

/// Lambda gradients and second-order weights for one boosting step.
/// |ΔNDCG@cutoff| of swapping each crucial pair under the current ranking
/// scales a RankNet gradient with σ = 1.
inline void lambda_gradients(const FlatDataset& d,
                             std::span<const double> scores,
                             std::size_t cutoff, std::vector<double>& lambda,
                             std::vector<double>& hessian) {
  lambda.assign(d.rows(), 0.0);
  hessian.assign(d.rows(), 0.0);
  for (std::size_t g = 0; g < d.groups(); ++g) {
    auto idx = detail::ranked_rows(scores, d.group_begin[g], d.group_begin[g + 1]);
    std::vector<int> grades;
    for (auto i : idx) grades.push_back(d.grade[i]);
    std::vector<int> ideal = grades;
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double max_dcg = dcg_at_k(ideal, cutoff);
    if (max_dcg == 0.0) continue;

    auto discount = [&](std::size_t rank) {
      return rank < cutoff ? 1.0 / std::log2(static_cast<double>(rank) + 2.0)
                           : 0.0;
    };
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        if (grades[a] <= grades[b]) continue;
        if (a >= cutoff && b >= cutoff) continue;
        std::size_t hi = idx[a];
        std::size_t lo = idx[b];
        double delta = std::abs((std::exp2(grades[a]) - std::exp2(grades[b])) *
                                (discount(a) - discount(b))) /
                       max_dcg;
        double rho = 1.0 / (1.0 + std::exp(scores[hi] - scores[lo]));
        lambda[hi] += rho * delta;
        lambda[lo] -= rho * delta;
        double h = rho * (1.0 - rho) * delta;
        hessian[hi] += h;
        hessian[lo] += h;
      }
    }
  }
}

/// Gradient-boosted regression trees on lambda gradients with Newton leaf
/// values. With a non-empty validation set the model is truncated to the
/// tree count with the best validation NDCG@cutoff.
inline LambdaMARTModel train_lambdamart(const RankingDataset& train,
                                        const RankingDataset& valid,
                                        const LambdaMARTParams& params,
                                        LambdaMARTTrace* trace = nullptr) {
  if (params.num_trees < 0) throw ConfigError("num_trees must be >= 0");
  if (params.learning_rate < 0.0) {
    throw ConfigError("learning_rate must be >= 0");
  }
  if (params.max_leaves < 2) throw ConfigError("max_leaves must be >= 2");
  FlatDataset d(train);
  if (crucial_pairs(d).empty()) {
    throw TrainingError("no crucial pairs in training data");
  }
  FlatDataset v(valid);
  const bool early_stop = v.groups() > 0;

  LambdaMARTModel model;
  model.learning_rate = params.learning_rate;
  std::vector<double> scores(d.rows(), 0.0);
  std::vector<double> vscores(v.rows(), 0.0);
  std::vector<double> lambda, hessian;
  std::vector<int> rows(d.rows());
  std::iota(rows.begin(), rows.end(), 0);

  const SortedColumns sorted = sort_columns(d.x, rows);
  TreeParams tp;
  tp.max_leaves = params.max_leaves;
  tp.min_samples_leaf = params.min_samples_leaf;

  double best = early_stop ? detail::mean_ndcg(v, vscores, params.cutoff) : 0.0;
  std::size_t best_count = 0;
  for (int t = 0; t < params.num_trees; ++t) {
    lambda_gradients(d, scores, params.cutoff, lambda, hessian);
    auto leaf = [&](std::span<const int> leaf_rows) {
      double num = 0.0, den = 0.0;
      for (int r : leaf_rows) {
        num += lambda[static_cast<std::size_t>(r)];
        den += hessian[static_cast<std::size_t>(r)];
      }
      return den > 0.0 ? num / den : 0.0;
    };
    auto tree = fit_tree(d.x, rows, lambda, tp, leaf, nullptr, &sorted);
    for (std::size_t i = 0; i < d.rows(); ++i) {
      scores[i] += params.learning_rate * tree.predict(d.x.row(i));
    }
    for (std::size_t i = 0; i < v.rows(); ++i) {
      vscores[i] += params.learning_rate * tree.predict(v.x.row(i));
    }
    model.trees.push_back(std::move(tree));

    if (trace) trace->train_ndcg.push_back(detail::mean_ndcg(d, scores, params.cutoff));
    if (early_stop) {
      double score = detail::mean_ndcg(v, vscores, params.cutoff);
      if (trace) trace->valid_ndcg.push_back(score);
      if (score > best + 1e-12) {
        best = score;
        best_count = model.trees.size();
      } else if (model.trees.size() - best_count >=
                 static_cast<std::size_t>(std::max(1, params.patience))) {
        break;
      }
    }
  }
  if (early_stop) model.trees.resize(best_count);
  if (trace) trace->best_iteration = model.trees.size();
  return model;
}

// ---------------------------------------------------------------------------
// Random forest

struct RandomForestParams {
  int num_trees = 100;
  int max_depth = 10;
  /// Fraction of features tried at each split.
  double feature_subsample = 0.3;
  bool bootstrap = true;
  int min_samples_leaf = 1;
  /// 0: one per hardware thread. Results do not depend on it.
  unsigned threads = 0;
};

struct RandomForestModel {
  std::vector<RegressionTree> trees;

  double score(std::span<const double> x) const {
    if (trees.empty()) return 0.0;
    double s = 0.0;
    for (const auto& t : trees) s += t.predict(x);
    return s / static_cast<double>(trees.size());
  }
};

struct RandomForestTrace {
  /// Out-of-bag mean squared error over rows that were out of bag at least
  /// once; NaN without bootstrap.
  double oob_mse = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::uint64_t tree_seed(std::uint64_t seed, std::size_t tree) {
  // splitmix64 of (seed, tree)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tree + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Bagged least-squares regression trees on grades. Tree t draws all of its
/// randomness from an RNG seeded by (seed, t), so training is independent of
/// the thread count.
inline RandomForestModel train_random_forest(const RankingDataset& train,
                                             const RandomForestParams& params,
                                             std::uint64_t seed,
                                             RandomForestTrace* trace = nullptr) {
  if (params.num_trees < 1) throw ConfigError("num_trees must be >= 1");
  if (!(params.feature_subsample > 0.0 && params.feature_subsample <= 1.0)) {
    throw ConfigError("feature_subsample must be in (0, 1]");
  }
  FlatDataset d(train);
  if (d.rows() == 0) throw TrainingError("empty training set");

  const std::size_t n = d.rows();
  std::vector<double> target(d.grade.begin(), d.grade.end());
  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_samples_leaf = params.min_samples_leaf;
  tp.feature_fraction = params.feature_subsample;

  const auto num_trees = static_cast<std::size_t>(params.num_trees);
  std::vector<RegressionTree> trees(num_trees);
  std::vector<std::vector<char>> in_bag(num_trees);

  std::vector<int> all_rows(n);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  const SortedColumns sorted = sort_columns(d.x, all_rows);

  auto grow = [&](std::size_t t) {
    std::mt19937_64 rng(detail::tree_seed(seed, t));
    std::vector<int> count(n, 1);
    if (params.bootstrap) {
      std::fill(count.begin(), count.end(), 0);
      std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
      for (std::size_t i = 0; i < n; ++i) ++count[static_cast<std::size_t>(pick(rng))];
    }
    in_bag[t].assign(n, 0);
    std::vector<int> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (count[i] == 0) continue;
      in_bag[t][i] = 1;
      rows.insert(rows.end(), static_cast<std::size_t>(count[i]), static_cast<int>(i));
    }
    auto columns = expand_columns(sorted, count);
    trees[t] = fit_tree(d.x, rows, target, tp, mean_leaf(target), &rng, &columns);
  };

  unsigned workers = params.threads ? params.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(num_trees));
  if (workers <= 1) {
    for (std::size_t t = 0; t < num_trees; ++t) grow(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < num_trees; t += workers) grow(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  if (trace && params.bootstrap) {
    double se = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      std::size_t k = 0;
      for (std::size_t t = 0; t < num_trees; ++t) {
        if (in_bag[t][i]) continue;
        sum += trees[t].predict(d.x.row(i));
        ++k;
      }
      if (k == 0) continue;
      double err = sum / static_cast<double>(k) - target[i];
      se += err * err;
      ++counted;
    }
    trace->oob_mse = counted ? se / static_cast<double>(counted)
                             : std::numeric_limits<double>::quiet_NaN();
  }
  return RandomForestModel{std::move(trees)};
}

// ---------------------------------------------------------------------------
// Model wrapper, scoring, ranking and persistence

inline constexpr std::string_view kModelSchema = "newsrank.model";
inline constexpr int kModelSchemaVersion = 1;

/// A trained model together with the feature layout it expects and the
/// settings it was trained with.
class RankingModel {
 public:
  using Payload = std::variant<RankBoostModel, LambdaMARTModel, RandomForestModel>;

  RankingModel(Payload payload, std::vector<std::string> feature_names,
               nlohmann::ordered_json hyperparameters, std::uint64_t seed)
      : payload_(std::move(payload)),
        feature_names_(std::move(feature_names)),
        hyperparameters_(nlohmann::json(hyperparameters)),  // sorted keys
        seed_(seed) {
    validate();
  }

  ModelKind kind() const {
    return static_cast<ModelKind>(payload_.index());
  }
  const Payload& payload() const { return payload_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const nlohmann::ordered_json& hyperparameters() const { return hyperparameters_; }
  std::uint64_t seed() const { return seed_; }

  /// Score of a raw feature row laid out as feature_names().
  double score_row(std::span<const double> x) const {
    if (x.size() != feature_names_.size()) {
      throw ConfigError("feature row has " + std::to_string(x.size()) +
                        " values, model expects " +
                        std::to_string(feature_names_.size()));
    }
    return std::visit([&](const auto& m) { return m.score(x); }, payload_);
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = kModelSchema;
    j["version"] = kModelSchemaVersion;
    j["kind"] = to_string(kind());
    j["feature_names"] = feature_names_;
    j["hyperparameters"] = hyperparameters_;
    j["seed"] = seed_;
    nlohmann::ordered_json payload;
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, RankBoostModel>) {
            auto rounds = nlohmann::json::array();
            for (const auto& r : m.rounds) {
              rounds.push_back({r.stump.feature, r.stump.threshold,
                                r.stump.direction, r.alpha});
            }
            payload["rounds"] = rounds;
          } else {
            if constexpr (std::is_same_v<M, LambdaMARTModel>) {
              payload["learning_rate"] = m.learning_rate;
            }
            auto trees = nlohmann::json::array();
            for (const auto& t : m.trees) trees.push_back(t.to_json());
            payload["trees"] = trees;
          }
        },
        payload_);
    j["payload"] = std::move(payload);
    return j;
  }

  static RankingModel from_json(const nlohmann::json& j) {
    try {
      if (!j.is_object() || j.value("schema", "") != kModelSchema) {
        throw CorruptArtifactError("not a model file");
      }
      int version = j.at("version").get<int>();
      if (version != kModelSchemaVersion) {
        throw VersionError("model schema version " + std::to_string(version) +
                           " is not supported (expected " +
                           std::to_string(kModelSchemaVersion) + ")");
      }
      auto kind = model_kind_from_string(j.at("kind").get<std::string>());
      const auto& p = j.at("payload");
      Payload payload;
      switch (kind) {
        case ModelKind::RankBoost: {
          RankBoostModel m;
          for (const auto& r : p.at("rounds")) {
            if (!r.is_array() || r.size() != 4) {
              throw CorruptArtifactError("malformed RankBoost round");
            }
            m.rounds.push_back({Stump{r[0].get<int>(), r[1].get<double>(),
                                      r[2].get<int>()},
                                r[3].get<double>()});
          }
          payload = std::move(m);
          break;
        }
        case ModelKind::LambdaMART: {
          LambdaMARTModel m;
          m.learning_rate = p.at("learning_rate").get<double>();
          for (const auto& t : p.at("trees")) {
            m.trees.push_back(RegressionTree::from_json(t));
          }
          payload = std::move(m);
          break;
        }
        case ModelKind::RandomForest: {
          RandomForestModel m;
          for (const auto& t : p.at("trees")) {
            m.trees.push_back(RegressionTree::from_json(t));
          }
          payload = std::move(m);
          break;
        }
      }
      return RankingModel(std::move(payload),
                          j.at("feature_names").get<std::vector<std::string>>(),
                          j.at("hyperparameters"),
                          j.at("seed").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
      throw CorruptArtifactError(std::string("malformed model: ") + e.what());
    } catch (const ConfigError& e) {
      throw CorruptArtifactError(std::string("malformed model: ") + e.what());
    }
  }

 private:
  Payload payload_;
  std::vector<std::string> feature_names_;
  nlohmann::ordered_json hyperparameters_;
  std::uint64_t seed_ = 0;

  void validate() const {
    const int nf = static_cast<int>(feature_names_.size());
    auto check_trees = [&](const std::vector<RegressionTree>& trees) {
      for (const auto& t : trees) {
        if (t.max_feature_index() >= nf) {
          throw ConfigError("tree split on feature outside the model layout");
        }
      }
    };
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, RankBoostModel>) {
            for (const auto& r : m.rounds) {
              if (r.stump.feature < 0 || r.stump.feature >= nf ||
                  !std::isfinite(r.alpha) ||
                  (r.stump.direction != 1 && r.stump.direction != -1)) {
                throw ConfigError("invalid RankBoost round");
              }
            }
          } else {
            check_trees(m.trees);
          }
        },
        payload_);
  }
};

inline void save_model(std::ostream& out, const RankingModel& model) {
  out << model.to_json().dump(1) << '\n';
}

inline RankingModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw CorruptArtifactError(std::string("model file is not valid JSON: ") +
                               e.what());
  }
  return RankingModel::from_json(j);
}

/// Score of a named feature vector; names must match the model's layout.
inline double score(const RankingModel& model, const FeatureVector& fv) {
  if (fv.names() != model.feature_names()) {
    throw ConfigError("feature vector layout does not match the model");
  }
  return model.score_row(fv.values());
}

/// Candidate ids by descending score, ties by ascending id.
inline std::vector<std::string> rank(
    const RankingModel& model,
    const std::vector<std::pair<std::string, FeatureVector>>& group) {
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(group.size());
  for (const auto& [id, fv] : group) scored.emplace_back(score(model, fv), id);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  out.reserve(scored.size());
  for (auto& [_, id] : scored) out.push_back(std::move(id));
  return out;
}

/// Ranks every group of a labelled dataset and returns the grades in ranked
/// order, ready for evaluate_rankings.
inline std::vector<std::pair<std::string, std::vector<int>>> ranked_grades(
    const RankingModel& model, const RankingDataset& ds) {
  if (ds.feature_names != model.feature_names()) {
    throw ConfigError("dataset feature layout does not match the model");
  }
  std::vector<std::pair<std::string, std::vector<int>>> out;
  for (const auto& g : ds.groups) {
    std::vector<std::tuple<double, const std::string*, int>> scored;
    for (const auto& item : g.items) {
      scored.emplace_back(model.score_row(item.features), &item.candidate_id,
                          item.grade);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      return *std::get<1>(a) < *std::get<1>(b);
    });
    std::vector<int> grades;
    for (const auto& s : scored) grades.push_back(std::get<2>(s));
    out.emplace_back(g.query_id, std::move(grades));
  }
  return out;
}

inline EvaluationReport evaluate_model(const RankingModel& model,
                                       const RankingDataset& ds,
                                       std::vector<std::size_t> cutoffs = {5, 10}) {
  return evaluate_rankings(ranked_grades(model, ds), std::move(cutoffs));
}

}  // namespace newsrank
