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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "newsrank/config.hpp"
#include "newsrank/tuning.hpp"

namespace newsrank {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

TEST(Hyperparameters, DefaultsAndValidation) {
  auto rf = resolved_hyperparameters(ModelKind::RandomForest, json::object());
  EXPECT_EQ(rf["num_trees"], 100);
  EXPECT_EQ(rf["feature_subsample"], 0.3);
  EXPECT_EQ(lambdamart_params({{"max_leaves", 4}}).max_leaves, 4);
  EXPECT_THROW(rankboost_params({{"depth", 3}}), ConfigError);
  EXPECT_THROW(rankboost_params({{"rounds", "many"}}), ConfigError);
  EXPECT_THROW(rankboost_params(json::array()), ConfigError);
}

TEST(Grid, CartesianProductInKeyOrder) {
  ordered_json grid = {{"a", {1, 2}}, {"b", {"x", "y", "z"}}};
  auto settings = expand_grid(grid);
  ASSERT_EQ(settings.size(), 6u);
  EXPECT_EQ(settings[0], (json{{"a", 1}, {"b", "x"}}));
  EXPECT_EQ(settings[1], (json{{"a", 1}, {"b", "y"}}));
  EXPECT_EQ(settings[5], (json{{"a", 2}, {"b", "z"}}));
  EXPECT_EQ(expand_grid(ordered_json::object()).size(), 1u);
  EXPECT_THROW(expand_grid({{"a", ordered_json::array()}}), ConfigError);
  EXPECT_THROW(expand_grid({{"a", 3}}), ConfigError);
}

TEST(Tune, PicksBestValidationSetting) {
  auto train = fixtures::linear_dataset(11, 12, 12, 3, "t");
  auto valid = fixtures::linear_dataset(12, 6, 12, 3, "v");
  ordered_json grid = {{"rounds", {1, 30}}};
  auto r = tune(ModelKind::RankBoost, grid, train, valid, 1);
  ASSERT_EQ(r.trials.size(), 2u);
  ASSERT_TRUE(r.best_model.has_value());
  for (const auto& t : r.trials) {
    EXPECT_LE(t.valid_ndcg10, r.trials[r.best].valid_ndcg10);
  }
  EXPECT_EQ(r.best_model->hyperparameters(), r.trials[r.best].hyperparameters);
  EXPECT_THROW(tune(ModelKind::RankBoost, grid, train, {}, 1), ConfigError);
}

TEST(TrainModel, SeedIsRecordedAndReproducible) {
  std::mt19937_64 rng(61);
  auto ds = fixtures::random_dataset(rng, 6, 10, 4);
  json hp = {{"num_trees", 8}};
  auto a = train_model(ModelKind::RandomForest, hp, ds, {}, 21);
  auto b = train_model(ModelKind::RandomForest, hp, ds, {}, 21);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.seed(), 21u);
  EXPECT_EQ(a.hyperparameters()["num_trees"], 8);
  EXPECT_EQ(a.hyperparameters()["max_depth"], 10);
}

TEST(Config, DefaultsFromEmptyObject) {
  auto c = parse_config(json::object());
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.feature_set, FeatureSet::All);
  EXPECT_EQ(c.model, ModelKind::RandomForest);
  EXPECT_EQ(c.metric_k, (std::vector<std::size_t>{5, 10}));
  EXPECT_EQ(c.banned, std::set<std::string>{"Make statement"});
  EXPECT_EQ(c.entities.mode, EntityMode::Offline);
  EXPECT_EQ(c.entities.remote.threshold, 0.1);
  EXPECT_EQ(c.grid_for(ModelKind::LambdaMART), default_grid(ModelKind::LambdaMART));
}

TEST(Config, ParsesNestedSections) {
  auto c = parse_config(json::parse(R"({
    "seed": 7, "feature_set": "b", "model": "lm", "binary_labels": true,
    "metric_k": [1, 3], "bm25": {"k1": 2.0, "b": 0.5},
    "predicate_source": "code", "split": {"train_days": 5},
    "entities": {"mode": "off", "threshold": 0.3},
    "hyperparameters": {"lm": {"num_trees": 20}},
    "grids": {"rb": {"rounds": [5, 10]}}
  })"));
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.feature_set, FeatureSet::B);
  EXPECT_EQ(c.model, ModelKind::LambdaMART);
  EXPECT_TRUE(c.binary_labels);
  EXPECT_EQ(c.bm25.k1, 2.0);
  EXPECT_EQ(c.featurizer_options().bm25.b, 0.5);
  EXPECT_EQ(c.pairing_options().predicate_source, PredicateSource::Code);
  EXPECT_EQ(c.split.train_days, 5u);
  EXPECT_EQ(c.split.valid_days, 2u);
  EXPECT_EQ(c.entities.mode, EntityMode::Off);
  EXPECT_EQ(c.hyperparameters_for(ModelKind::LambdaMART)["num_trees"], 20);
  EXPECT_EQ(expand_grid(c.grid_for(ModelKind::RankBoost)).size(), 2u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  for (const char* text : {
           R"({"sed": 1})",
           R"({"bm25": {"k2": 1}})",
           R"({"entities": {"mode": "cloud"}})",
           R"({"entities": {"threshold": 2}})",
           R"({"split": {"days": 3}})",
           R"({"hyperparameters": {"rf": {"depth": 3}}})",
           R"({"hyperparameters": {"svm": {}}})",
           R"({"grids": {"lm": {"num_trees": []}}})",
           R"({"grids": {"lm": {"leaves": [1]}}})",
           R"({"metric_k": []})",
           R"({"metric_k": [0]})",
           R"({"seed": "x"})",
           R"({"model": "svm"})",
           R"({"feature_set": "c"})",
           R"({"predicate_source": "both"})",
           R"({"min_judgments": 0})",
           R"([1, 2])"}) {
    EXPECT_THROW(parse_config(json::parse(text)), ConfigError) << text;
  }
}

TEST(Config, CanonicalFormRoundTripsAndHashIsStable) {
  auto c = parse_config(json::parse(R"({"seed": 3, "model": "rb",
      "hyperparameters": {"rb": {"rounds": 9}}})"));
  auto again = parse_config(json::parse(config_to_json(c).dump()));
  EXPECT_EQ(config_hash(again), config_hash(c));
  auto other = c;
  other.seed = 4;
  EXPECT_NE(config_hash(other), config_hash(c));
  // Spelling out a default does not change the hash.
  auto explicit_default = parse_config(json::parse(R"({"seed": 3, "model": "rb",
      "hyperparameters": {"rb": {"rounds": 9}}, "metric_k": [5, 10]})"));
  EXPECT_EQ(config_hash(explicit_default), config_hash(c));
}

TEST(Config, LoadFromFile) {
  auto dir = std::filesystem::temp_directory_path() / "newsrank-config-test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "good.json") << R"({"seed": 5})";
    std::ofstream(dir / "bad.json") << R"({"seed": 5,)";
  }
  EXPECT_EQ(load_config(dir / "good.json").seed, 5u);
  EXPECT_THROW(load_config(dir / "bad.json"), ConfigError);
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Manifest, HashesFilesAndHasNoTimestamps) {
  auto dir = std::filesystem::temp_directory_path() / "newsrank-manifest-test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "in.txt") << "abc";
  Manifest m;
  m.command = "train";
  m.seed = 9;
  m.add_input(dir / "in.txt");
  auto j = m.to_json();
  EXPECT_EQ(j["schema"], "newsrank.manifest");
  EXPECT_EQ(j["inputs"][0]["sha256"],
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(m.to_json().dump(), j.dump());
  EXPECT_FALSE(j.contains("timestamp"));
  std::filesystem::remove_all(dir);
}

TEST(EntityModeNames, RoundTrip) {
  for (auto m : {EntityMode::Remote, EntityMode::Offline, EntityMode::Off}) {
    EXPECT_EQ(entity_mode_from_string(to_string(m)), m);
  }
  EXPECT_THROW(entity_mode_from_string("maybe"), ConfigError);
}

}  // namespace
}  // namespace newsrank
