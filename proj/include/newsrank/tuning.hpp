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

// Hyperparameter handling: JSON settings to typed parameters, training by
// model kind, and grid search selected on validation NDCG@10.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "newsrank/ltr.hpp"

namespace newsrank {

namespace detail {

inline void reject_unknown(const nlohmann::json& hp,
                           std::initializer_list<std::string_view> known,
                           ModelKind kind) {
  if (!hp.is_object()) throw ConfigError("hyperparameters must be an object");
  for (const auto& [key, _] : hp.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown hyperparameter '" + key + "' for model " +
                        to_string(kind));
    }
  }
}

template <typename T>
T hp_value(const nlohmann::json& hp, const char* key, T fallback) {
  if (!hp.contains(key)) return fallback;
  try {
    return hp.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("hyperparameter '") + key +
                      "' has the wrong type");
  }
}

}  // namespace detail

inline RankBoostParams rankboost_params(const nlohmann::json& hp) {
  detail::reject_unknown(hp, {"rounds"}, ModelKind::RankBoost);
  RankBoostParams p;
  p.rounds = detail::hp_value(hp, "rounds", p.rounds);
  return p;
}

inline LambdaMARTParams lambdamart_params(const nlohmann::json& hp) {
  detail::reject_unknown(hp,
                         {"num_trees", "learning_rate", "max_leaves",
                          "min_samples_leaf", "patience"},
                         ModelKind::LambdaMART);
  LambdaMARTParams p;
  p.num_trees = detail::hp_value(hp, "num_trees", p.num_trees);
  p.learning_rate = detail::hp_value(hp, "learning_rate", p.learning_rate);
  p.max_leaves = detail::hp_value(hp, "max_leaves", p.max_leaves);
  p.min_samples_leaf = detail::hp_value(hp, "min_samples_leaf", p.min_samples_leaf);
  p.patience = detail::hp_value(hp, "patience", p.patience);
  return p;
}

inline RandomForestParams random_forest_params(const nlohmann::json& hp) {
  detail::reject_unknown(hp,
                         {"num_trees", "max_depth", "feature_subsample",
                          "bootstrap", "min_samples_leaf"},
                         ModelKind::RandomForest);
  RandomForestParams p;
  p.num_trees = detail::hp_value(hp, "num_trees", p.num_trees);
  p.max_depth = detail::hp_value(hp, "max_depth", p.max_depth);
  p.feature_subsample = detail::hp_value(hp, "feature_subsample", p.feature_subsample);
  p.bootstrap = detail::hp_value(hp, "bootstrap", p.bootstrap);
  p.min_samples_leaf = detail::hp_value(hp, "min_samples_leaf", p.min_samples_leaf);
  return p;
}

/// The full, resolved settings (defaults filled in) recorded in model files.
inline nlohmann::ordered_json resolved_hyperparameters(ModelKind kind,
                                                       const nlohmann::json& hp) {
  nlohmann::ordered_json out;
  switch (kind) {
    case ModelKind::RankBoost: {
      auto p = rankboost_params(hp);
      out["rounds"] = p.rounds;
      break;
    }
    case ModelKind::LambdaMART: {
      auto p = lambdamart_params(hp);
      out["num_trees"] = p.num_trees;
      out["learning_rate"] = p.learning_rate;
      out["max_leaves"] = p.max_leaves;
      out["min_samples_leaf"] = p.min_samples_leaf;
      out["patience"] = p.patience;
      break;
    }
    case ModelKind::RandomForest: {
      auto p = random_forest_params(hp);
      out["num_trees"] = p.num_trees;
      out["max_depth"] = p.max_depth;
      out["feature_subsample"] = p.feature_subsample;
      out["bootstrap"] = p.bootstrap;
      out["min_samples_leaf"] = p.min_samples_leaf;
      break;
    }
  }
  return out;
}

/// Trains one model. `valid` drives LambdaMART early stopping and is ignored
/// by the other kinds.
inline RankingModel train_model(ModelKind kind, const nlohmann::json& hp,
                                const RankingDataset& train,
                                const RankingDataset& valid,
                                std::uint64_t seed) {
  auto resolved = resolved_hyperparameters(kind, hp);
  switch (kind) {
    case ModelKind::RankBoost:
      return RankingModel(train_rankboost(train, rankboost_params(hp)),
                          train.feature_names, resolved, seed);
    case ModelKind::LambdaMART:
      return RankingModel(train_lambdamart(train, valid, lambdamart_params(hp)),
                          train.feature_names, resolved, seed);
    case ModelKind::RandomForest:
      return RankingModel(
          train_random_forest(train, random_forest_params(hp), seed),
          train.feature_names, resolved, seed);
  }
  throw ConfigError("unreachable model kind");
}

/// Cartesian product of {name: [values...]} as a list of settings, in
/// lexicographic order of the keys as given.
inline std::vector<nlohmann::json> expand_grid(const nlohmann::ordered_json& grid) {
  std::vector<nlohmann::json> out{nlohmann::json::object()};
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array() || values.empty()) {
      throw ConfigError("grid entry '" + key + "' must be a non-empty list");
    }
    std::vector<nlohmann::json> next;
    for (const auto& partial : out) {
      for (const auto& v : values) {
        auto s = partial;
        s[key] = v;
        next.push_back(std::move(s));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Default search spaces.
inline nlohmann::ordered_json default_grid(ModelKind kind) {
  switch (kind) {
    case ModelKind::RankBoost:
      return {{"rounds", {25, 50, 100, 200}}};
    case ModelKind::LambdaMART:
      return {{"num_trees", {300}},
              {"learning_rate", {0.05, 0.1}},
              {"max_leaves", {4, 10}},
              {"min_samples_leaf", {1, 10}},
              {"patience", {50}}};
    case ModelKind::RandomForest:
      return {{"num_trees", {100}},
              {"max_depth", {4, 8, 12}},
              {"feature_subsample", {0.3, 0.6}},
              {"min_samples_leaf", {1, 5}}};
  }
  return {};
}

struct TuningTrial {
  nlohmann::ordered_json hyperparameters;
  double valid_ndcg10 = 0.0;
};

struct TuningResult {
  std::vector<TuningTrial> trials;
  std::size_t best = 0;
  std::optional<RankingModel> best_model;
};

/// Trains every grid setting and keeps the one with the highest validation
/// NDCG@10 (first one on ties).
inline TuningResult tune(ModelKind kind, const nlohmann::ordered_json& grid,
                         const RankingDataset& train,
                         const RankingDataset& valid, std::uint64_t seed) {
  if (valid.groups.empty()) throw ConfigError("tuning needs a validation set");
  TuningResult result;
  for (const auto& hp : expand_grid(grid)) {
    auto model = train_model(kind, hp, train, valid, seed);
    double ndcg = evaluate_model(model, valid, {10}).mean_ndcg(10);
    result.trials.push_back({model.hyperparameters(), ndcg});
    if (!result.best_model || ndcg > result.trials[result.best].valid_ndcg10) {
      result.best = result.trials.size() - 1;
      result.best_model.emplace(std::move(model));
    }
  }
  return result;
}

}  // namespace newsrank
