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

// Run configuration (JSON) and reproducibility manifests.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "newsrank/entities.hpp"
#include "newsrank/features.hpp"
#include "newsrank/hash.hpp"
#include "newsrank/ltr.hpp"
#include "newsrank/tuning.hpp"

namespace newsrank {

enum class EntityMode { Remote, Offline, Off };

inline std::string to_string(EntityMode m) {
  switch (m) {
    case EntityMode::Remote: return "remote";
    case EntityMode::Offline: return "offline";
    case EntityMode::Off: return "off";
  }
  return "?";
}

inline EntityMode entity_mode_from_string(std::string_view s) {
  if (s == "remote") return EntityMode::Remote;
  if (s == "offline") return EntityMode::Offline;
  if (s == "off") return EntityMode::Off;
  throw ConfigError("unknown entity mode '" + std::string(s) + "'");
}

struct SplitConfig {
  std::size_t train_days = 10;
  std::size_t valid_days = 2;
  std::size_t test_days = 2;
};

struct EntityConfig {
  EntityMode mode = EntityMode::Offline;
  std::string gazetteer;  // TSV path for offline mode
  RemoteLinkerConfig remote;
  /// Environment variable holding the service token.
  std::string token_env = "TAGME_TOKEN";
  std::string cache = "entity-cache.tsv";
};

struct RunConfig {
  std::uint64_t seed = 42;
  FeatureSet feature_set = FeatureSet::All;
  ModelKind model = ModelKind::RandomForest;
  bool binary_labels = false;
  std::vector<std::size_t> metric_k{5, 10};
  Bm25Params bm25;
  PredicateSource predicate_source = PredicateSource::Text;
  bool stemmed_overlap = false;
  bool remove_stopwords = false;
  std::set<std::string> banned{"Make statement"};
  CodeTable codes;
  std::size_t min_judgments = 3;
  SplitConfig split;
  EntityConfig entities;
  /// Per-model hyperparameters, keyed by "rb", "lm", "rf".
  std::map<std::string, nlohmann::json> hyperparameters;
  /// Per-model tuning grids, keyed as above; defaults when absent.
  std::map<std::string, nlohmann::ordered_json> grids;

  nlohmann::json hyperparameters_for(ModelKind kind) const {
    auto it = hyperparameters.find(to_string(kind));
    return it == hyperparameters.end() ? nlohmann::json::object() : it->second;
  }

  nlohmann::ordered_json grid_for(ModelKind kind) const {
    auto it = grids.find(to_string(kind));
    return it == grids.end() ? default_grid(kind) : it->second;
  }

  FeaturizerOptions featurizer_options() const {
    FeaturizerOptions o;
    o.bm25 = bm25;
    o.predicate_source = predicate_source;
    o.tokenizer.remove_stopwords = remove_stopwords;
    return o;
  }

  PairingOptions pairing_options() const {
    return {stemmed_overlap, predicate_source};
  }
};

namespace detail {

inline void check_keys(const nlohmann::json& j,
                       std::initializer_list<std::string_view> known,
                       const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + where + key + "'");
    }
  }
}

template <typename T>
T config_get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Parses a configuration object; unknown keys and invalid values are
/// ConfigErrors. Hyperparameters are validated against their model kind.
inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::config_get;
  detail::check_keys(j,
                     {"seed", "feature_set", "model", "binary_labels",
                      "metric_k", "bm25", "predicate_source", "stemmed_overlap",
                      "remove_stopwords", "banned", "codes", "min_judgments",
                      "split", "entities", "hyperparameters", "grids"},
                     "");
  RunConfig c;
  c.seed = config_get<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("feature_set")) {
    c.feature_set = feature_set_from_string(config_get<std::string>(j, "feature_set", ""));
  }
  if (j.contains("model")) {
    c.model = model_kind_from_string(config_get<std::string>(j, "model", ""));
  }
  c.binary_labels = config_get(j, "binary_labels", c.binary_labels);
  c.metric_k = config_get(j, "metric_k", c.metric_k);
  if (c.metric_k.empty()) throw ConfigError("metric_k must not be empty");
  for (auto k : c.metric_k) {
    if (k == 0) throw ConfigError("metric_k values must be >= 1");
  }
  if (j.contains("bm25")) {
    const auto& b = j.at("bm25");
    detail::check_keys(b, {"k1", "b"}, "bm25.");
    c.bm25.k1 = config_get(b, "k1", c.bm25.k1);
    c.bm25.b = config_get(b, "b", c.bm25.b);
    if (c.bm25.k1 < 0.0 || c.bm25.b < 0.0 || c.bm25.b > 1.0) {
      throw ConfigError("bm25 needs k1 >= 0 and b in [0, 1]");
    }
  }
  if (j.contains("predicate_source")) {
    auto s = config_get<std::string>(j, "predicate_source", "");
    if (s == "text") {
      c.predicate_source = PredicateSource::Text;
    } else if (s == "code") {
      c.predicate_source = PredicateSource::Code;
    } else {
      throw ConfigError("predicate_source must be 'text' or 'code'");
    }
  }
  c.stemmed_overlap = config_get(j, "stemmed_overlap", c.stemmed_overlap);
  c.remove_stopwords = config_get(j, "remove_stopwords", c.remove_stopwords);
  c.banned = config_get(j, "banned", c.banned);
  c.codes = config_get(j, "codes", c.codes);
  c.min_judgments = config_get(j, "min_judgments", c.min_judgments);
  if (c.min_judgments == 0) throw ConfigError("min_judgments must be >= 1");
  if (j.contains("split")) {
    const auto& s = j.at("split");
    detail::check_keys(s, {"train_days", "valid_days", "test_days"}, "split.");
    c.split.train_days = config_get(s, "train_days", c.split.train_days);
    c.split.valid_days = config_get(s, "valid_days", c.split.valid_days);
    c.split.test_days = config_get(s, "test_days", c.split.test_days);
  }
  if (j.contains("entities")) {
    const auto& e = j.at("entities");
    detail::check_keys(e,
                       {"mode", "gazetteer", "endpoint", "lang", "threshold",
                        "max_concurrency", "max_retries", "token_env", "cache"},
                       "entities.");
    if (e.contains("mode")) {
      c.entities.mode = entity_mode_from_string(config_get<std::string>(e, "mode", ""));
    }
    c.entities.gazetteer = config_get(e, "gazetteer", c.entities.gazetteer);
    auto& r = c.entities.remote;
    r.endpoint = config_get(e, "endpoint", r.endpoint);
    r.lang = config_get(e, "lang", r.lang);
    r.threshold = config_get(e, "threshold", r.threshold);
    r.max_concurrency = config_get(e, "max_concurrency", r.max_concurrency);
    r.max_retries = config_get(e, "max_retries", r.max_retries);
    if (r.threshold < 0.0 || r.threshold > 1.0) {
      throw ConfigError("entities.threshold must be in [0, 1]");
    }
    if (r.max_concurrency < 1) {
      throw ConfigError("entities.max_concurrency must be >= 1");
    }
    c.entities.token_env = config_get(e, "token_env", c.entities.token_env);
    c.entities.cache = config_get(e, "cache", c.entities.cache);
  }
  if (j.contains("hyperparameters")) {
    const auto& h = j.at("hyperparameters");
    detail::check_keys(h, {"rb", "lm", "rf"}, "hyperparameters.");
    for (const auto& [key, value] : h.items()) {
      resolved_hyperparameters(model_kind_from_string(key), value);
      c.hyperparameters[key] = value;
    }
  }
  if (j.contains("grids")) {
    const auto& g = j.at("grids");
    detail::check_keys(g, {"rb", "lm", "rf"}, "grids.");
    for (const auto& [key, value] : g.items()) {
      auto kind = model_kind_from_string(key);
      nlohmann::ordered_json grid = value;
      for (const auto& setting : expand_grid(grid)) {
        resolved_hyperparameters(kind, setting);
      }
      c.grids[key] = std::move(grid);
    }
  }
  return c;
}

/// Canonical form of a configuration, used for the config hash.
inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["feature_set"] = to_string(c.feature_set);
  j["model"] = to_string(c.model);
  j["binary_labels"] = c.binary_labels;
  j["metric_k"] = c.metric_k;
  j["bm25"] = {{"k1", c.bm25.k1}, {"b", c.bm25.b}};
  j["predicate_source"] =
      c.predicate_source == PredicateSource::Text ? "text" : "code";
  j["stemmed_overlap"] = c.stemmed_overlap;
  j["remove_stopwords"] = c.remove_stopwords;
  j["banned"] = c.banned;
  j["codes"] = c.codes;
  j["min_judgments"] = c.min_judgments;
  j["split"] = {{"train_days", c.split.train_days},
                {"valid_days", c.split.valid_days},
                {"test_days", c.split.test_days}};
  nlohmann::ordered_json e;
  e["mode"] = to_string(c.entities.mode);
  e["gazetteer"] = c.entities.gazetteer;
  e["endpoint"] = c.entities.remote.endpoint;
  e["lang"] = c.entities.remote.lang;
  e["threshold"] = c.entities.remote.threshold;
  e["max_concurrency"] = c.entities.remote.max_concurrency;
  e["max_retries"] = c.entities.remote.max_retries;
  e["token_env"] = c.entities.token_env;
  e["cache"] = c.entities.cache;
  j["entities"] = std::move(e);
  nlohmann::ordered_json hp = nlohmann::ordered_json::object();
  for (auto kind : {ModelKind::RankBoost, ModelKind::LambdaMART,
                    ModelKind::RandomForest}) {
    hp[to_string(kind)] =
        resolved_hyperparameters(kind, c.hyperparameters_for(kind));
  }
  j["hyperparameters"] = std::move(hp);
  nlohmann::ordered_json grids = nlohmann::ordered_json::object();
  for (auto kind : {ModelKind::RankBoost, ModelKind::LambdaMART,
                    ModelKind::RandomForest}) {
    // Sorted keys so a reloaded config serializes identically.
    grids[to_string(kind)] = nlohmann::json(c.grid_for(kind));
  }
  j["grids"] = std::move(grids);
  return j;
}

inline std::string config_hash(const RunConfig& c) {
  return sha256_hex(config_to_json(c).dump());
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Manifest

inline constexpr std::string_view kManifestSchema = "newsrank.manifest";
inline constexpr int kManifestVersion = 1;

/// Record of one pipeline step: what went in, under which settings, and
/// what came out. Contains no timestamps so identical runs produce identical
/// manifests.
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;   // path, sha256
  std::vector<std::pair<std::string, std::string>> outputs;  // path, sha256
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();

  void add_input(const std::filesystem::path& p) {
    inputs.emplace_back(p.generic_string(), sha256_file(p.string()));
  }
  void add_output(const std::filesystem::path& p) {
    outputs.emplace_back(p.generic_string(), sha256_file(p.string()));
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = kManifestSchema;
    j["version"] = kManifestVersion;
    j["command"] = command;
    auto list = [](const auto& items) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& [path, hash] : items) {
        arr.push_back({{"path", path}, {"sha256", hash}});
      }
      return arr;
    };
    j["inputs"] = list(inputs);
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["parameters"] = parameters;
    j["outputs"] = list(outputs);
    return j;
  }
};

}  // namespace newsrank
