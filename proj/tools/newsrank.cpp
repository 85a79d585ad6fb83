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

// newsrank: file-artifact pipeline from raw queries and triples to ranking
// reports. Every step writes its outputs plus a manifest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "newsrank/config.hpp"
#include "newsrank/pipeline.hpp"
#include "newsrank/synth.hpp"
#include "newsrank/tuning.hpp"

namespace fs = std::filesystem;
using namespace newsrank;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kConfig = 3,
  kMissingArtifact = 4,
  kVersionMismatch = 5,
  kCorruptArtifact = 6,
  kTraining = 7,
  kEntityService = 8,
};

class MissingArtifact : public Error {
 public:
  using Error::Error;
};

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> feature_set;
  std::optional<std::string> model;
  bool binary_labels = false;
  std::optional<std::string> entity_mode;
  std::optional<std::string> metric_k;
};

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig c = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
  if (g.seed) c.seed = *g.seed;
  if (g.feature_set) c.feature_set = feature_set_from_string(*g.feature_set);
  if (g.model) c.model = model_kind_from_string(*g.model);
  if (g.binary_labels) c.binary_labels = true;
  if (g.entity_mode) c.entities.mode = entity_mode_from_string(*g.entity_mode);
  if (g.metric_k) {
    c.metric_k.clear();
    for (auto part : detail::split(*g.metric_k, ',')) {
      auto k = detail::parse_uint(detail::trim(part));
      if (!k || *k == 0) throw ConfigError("--metric-k expects e.g. 5,10");
      c.metric_k.push_back(static_cast<std::size_t>(*k));
    }
  }
  return c;
}

std::ifstream open_input(const fs::path& p) {
  if (!fs::is_regular_file(p)) {
    throw MissingArtifact("missing input artifact: " + p.string());
  }
  std::ifstream in(p, std::ios::binary);
  if (!in) throw MissingArtifact("cannot read " + p.string());
  return in;
}

std::string render(const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

/// Writes `content` atomically after `validate` accepts it.
void write_artifact(const fs::path& path, const std::string& content,
                    const std::function<void(std::istream&)>& validate) {
  {
    std::istringstream check(content);
    validate(check);
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw Error("cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

void json_check(std::istream& in) {
  auto parsed = nlohmann::json::parse(in);
  (void)parsed;
}

void jsonl_check(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    auto parsed = nlohmann::json::parse(line);
    (void)parsed;
  }
}

class Step {
 public:
  Step(std::string command, const RunConfig& config) {
    manifest_.command = std::move(command);
    manifest_.config_hash = config_hash(config);
    manifest_.seed = config.seed;
  }

  std::ifstream input(const fs::path& p) {
    auto in = open_input(p);
    manifest_.add_input(p);
    return in;
  }

  void output(const fs::path& p, const std::string& content,
              const std::function<void(std::istream&)>& validate) {
    write_artifact(p, content, validate);
    manifest_.add_output(p);
  }

  nlohmann::ordered_json& parameters() { return manifest_.parameters; }

  /// Writes the manifest next to a file output or inside a directory output.
  void finish(const fs::path& target, bool is_directory) {
    fs::path path = is_directory ? target / "manifest.json"
                                 : fs::path(target.string() + ".manifest.json");
    write_artifact(path, manifest_.to_json().dump(2) + "\n", json_check);
  }

 private:
  Manifest manifest_;
};

std::vector<QueryEvent> read_queries_file(Step& step, const fs::path& p) {
  auto in = step.input(p);
  return parse_queries(in);
}

std::vector<CandidateTriple> read_candidates_file(Step& step, const fs::path& p,
                                                  const RunConfig& c) {
  auto in = step.input(p);
  return parse_candidates(in, c.codes);
}

std::vector<FeaturizedPair> read_featurized_file(Step& step, const fs::path& p) {
  auto in = step.input(p);
  return read_featurized(in);
}

RankingModel read_model_file(Step& step, const fs::path& p) {
  auto in = step.input(p);
  return load_model(in);
}

std::string feature_set_name(const std::vector<std::string>& names) {
  for (auto set : {FeatureSet::All, FeatureSet::AllMinus, FeatureSet::Sel,
                   FeatureSet::B}) {
    if (feature_set_members(set) == names) return to_string(set);
  }
  return "custom";
}

/// Labelled split restricted to the configured feature set. Labels are used
/// as stored; binary mode is applied when splitting.
RankingDataset load_split(Step& step, const fs::path& p, const RunConfig& c) {
  return to_dataset(read_featurized_file(step, p), c.feature_set);
}

// ---------------------------------------------------------------------------
// Subcommands

void cmd_synth(const RunConfig& c, const fs::path& out, int days,
               int queries_per_day) {
  Step step("synth", c);
  SynthConfig sc;
  sc.seed = c.seed;
  sc.days = days;
  sc.queries_per_day = queries_per_day;
  auto corpus = generate_synthetic_corpus(sc);
  step.parameters()["days"] = days;
  step.parameters()["queries_per_day"] = queries_per_day;
  step.output(out / "queries.jsonl",
              render([&](auto& os) { write_queries(os, corpus.queries); }),
              [](std::istream& in) { (void)parse_queries(in); });
  step.output(out / "candidates.tsv",
              render([&](auto& os) { write_candidates(os, corpus.candidates); }),
              [](std::istream& in) { (void)parse_candidates(in); });
  step.output(out / "gazetteer.tsv", render([&](auto& os) {
                for (const auto& [surface, id] : corpus.gazetteer_entries) {
                  os << surface << '\t' << id << '\n';
                }
              }),
              [](std::istream& in) { (void)load_gazetteer(in); });
  step.output(out / "judgments.csv",
              render([&](auto& os) { write_judgments(os, corpus.judgments); }),
              [](std::istream& in) { (void)read_judgments(in); });
  step.finish(out, true);
  std::cout << "synthetic corpus: " << corpus.queries.size() << " queries, "
            << corpus.candidates.size() << " candidates, "
            << corpus.judgments.size() << " judgments\n";
}

void cmd_ingest(const RunConfig& c, const fs::path& queries,
                const fs::path& candidates, const fs::path& out) {
  Step step("ingest", c);
  auto qs = read_queries_file(step, queries);
  auto cs = read_candidates_file(step, candidates, c);
  auto kept = filter_generic(cs, c.banned);
  step.parameters()["queries"] = qs.size();
  step.parameters()["candidates_in"] = cs.size();
  step.parameters()["candidates_kept"] = kept.size();
  step.output(out / "queries.jsonl",
              render([&](auto& os) { write_queries(os, qs); }),
              [](std::istream& in) { (void)parse_queries(in); });
  step.output(out / "candidates.tsv",
              render([&](auto& os) { write_candidates(os, kept); }),
              [&](std::istream& in) { (void)parse_candidates(in, c.codes); });
  step.finish(out, true);
  std::cout << "ingested " << qs.size() << " queries, kept " << kept.size()
            << " of " << cs.size() << " candidates\n";
}

void cmd_pairs(const RunConfig& c, const fs::path& queries,
               const fs::path& candidates, const fs::path& out) {
  Step step("pairs", c);
  auto qs = read_queries_file(step, queries);
  auto cs = read_candidates_file(step, candidates, c);
  auto pairs = make_pairs(qs, cs, c.pairing_options());
  step.parameters()["pairs"] = pairs.size();
  step.output(out, render([&](auto& os) { write_pair_keys(os, pairs); }),
              [](std::istream& in) { (void)read_pair_keys(in); });
  step.finish(out, false);
  std::cout << pairs.size() << " pairs\n";
}

std::vector<std::vector<EntityAnnotation>> link_texts(
    const RunConfig& c, Step& step, const std::vector<std::string>& texts) {
  std::vector<std::vector<EntityAnnotation>> out;
  if (c.entities.mode == EntityMode::Offline) {
    if (c.entities.gazetteer.empty()) {
      throw ConfigError("offline entity linking needs entities.gazetteer");
    }
    auto in = step.input(c.entities.gazetteer);
    auto gazetteer = load_gazetteer(in);
    for (const auto& t : texts) out.push_back(link_offline(t, gazetteer));
  } else if (c.entities.mode == EntityMode::Remote) {
    RemoteLinkerConfig rc = c.entities.remote;
    const char* token = std::getenv(c.entities.token_env.c_str());
    if (!token || !*token) {
      throw ConfigError("remote entity linking needs a token in $" +
                        c.entities.token_env);
    }
    rc.token = token;
    EntityCache cache(c.entities.cache);
    RemoteLinker linker(rc, cache);
    out = linker.link_all(texts);
    step.parameters()["requests"] = linker.requests_made();
  } else {
    throw ConfigError("entity mode is 'off'; nothing to link");
  }
  return out;
}

void cmd_link(const RunConfig& c, const fs::path& queries,
              const fs::path& candidates, const fs::path& out) {
  Step step("link", c);
  auto qs = read_queries_file(step, queries);
  auto cs = read_candidates_file(step, candidates, c);
  std::vector<std::string> texts;
  for (const auto& q : qs) texts.push_back(q.text);
  for (const auto& cand : cs) {
    texts.push_back(candidate_text(cand, c.predicate_source));
  }
  auto annotations = link_texts(c, step, texts);
  step.parameters()["mode"] = to_string(c.entities.mode);
  std::string content = render([&](auto& os) {
    for (std::size_t i = 0; i < texts.size(); ++i) {
      bool is_query = i < qs.size();
      nlohmann::ordered_json j;
      j["kind"] = is_query ? "query" : "candidate";
      j["id"] = is_query ? qs[i].id : cs[i - qs.size()].id;
      j["annotations"] = annotations_to_json(annotations[i]);
      os << j.dump() << '\n';
    }
  });
  step.output(out, content, jsonl_check);
  step.finish(out, false);
  std::cout << "linked " << texts.size() << " texts\n";
}

EntityMaps read_entities(Step& step, const fs::path& p) {
  auto in = step.input(p);
  EntityMaps maps;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::ordered_json::parse(line);
      auto set = entity_set(annotations_from_json(j.at("annotations")));
      auto kind = j.at("kind").get<std::string>();
      auto id = j.at("id").get<std::string>();
      if (kind == "query") {
        maps.queries[id] = std::move(set);
      } else if (kind == "candidate") {
        maps.candidates[id] = std::move(set);
      } else {
        throw ParseError("unknown record kind '" + kind + "'", lineno);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad entity record: ") + e.what(), lineno);
    }
  }
  return maps;
}

void cmd_featurize(const RunConfig& c, const fs::path& queries,
                   const fs::path& candidates, const fs::path& pairs_path,
                   const std::string& entities_path, const fs::path& out) {
  Step step("featurize", c);
  auto qs = read_queries_file(step, queries);
  auto cs = read_candidates_file(step, candidates, c);
  auto keys = [&] {
    auto in = step.input(pairs_path);
    return read_pair_keys(in);
  }();
  auto pairs = resolve_pairs(keys, qs, cs);
  std::optional<EntityMaps> entities;
  if (c.entities.mode != EntityMode::Off) {
    if (entities_path.empty()) {
      throw ConfigError("entity mode '" + to_string(c.entities.mode) +
                        "' needs --entities (or use --entity-mode off)");
    }
    entities = read_entities(step, entities_path);
  }
  auto featurized = featurize_pairs(pairs, cs, c.featurizer_options(),
                                    entities ? &*entities : nullptr);
  step.parameters()["pairs"] = featurized.size();
  step.parameters()["feature_schema_version"] = kFeatureSchemaVersion;
  step.parameters()["entity_features"] = entities.has_value();
  step.output(out, render([&](auto& os) { write_featurized(os, featurized); }),
              [](std::istream& in) { (void)read_featurized(in); });
  step.finish(out, false);
  std::cout << "featurized " << featurized.size() << " pairs\n";
}

void cmd_labels(const RunConfig& c, const fs::path& judgments,
                const fs::path& featurized, const fs::path& out) {
  Step step("labels", c);
  auto js = [&] {
    auto in = step.input(judgments);
    return read_judgments(in);
  }();
  auto pairs = read_featurized_file(step, featurized);
  auto gold = aggregate_all(js, c.min_judgments);
  auto labelled = attach_labels(pairs, gold);
  std::array<std::size_t, 3> counts{};
  for (const auto& p : labelled) ++counts[static_cast<std::size_t>(*p.label)];
  auto& s = step.parameters();
  s["judgments"] = js.size();
  s["agreement_percent"] = agreement(js);
  s["labelled_pairs"] = labelled.size();
  s["unlabeled_pairs"] = gold.unlabeled.size();
  s["very_relevant"] = counts[2];
  s["relevant"] = counts[1];
  s["not_relevant"] = counts[0];
  step.output(out, render([&](auto& os) { write_featurized(os, labelled); }),
              [](std::istream& in) { (void)read_featurized(in); });
  step.finish(out, false);
  std::cout << s.dump(2) << '\n';
}

void cmd_split(const RunConfig& c, const fs::path& labelled,
               const fs::path& out) {
  Step step("split", c);
  auto pairs = read_featurized_file(step, labelled);
  // Keep every feature the file has; selection happens at training time.
  RankingDataset ds;
  if (!pairs.empty()) ds.feature_names = pairs.front().features.names();
  std::map<std::string, QueryGroup> groups;
  for (const auto& p : pairs) {
    if (!p.label) throw ConfigError("split needs labelled pairs");
    if (p.features.names() != ds.feature_names) {
      throw CorruptArtifactError("pairs disagree on feature layout");
    }
    auto& g = groups[p.query_id];
    g.query_id = p.query_id;
    g.date = p.date;
    g.items.push_back({p.candidate_id, p.features.values(), *p.label});
  }
  for (auto& [_, g] : groups) ds.groups.push_back(std::move(g));
  ds = filter_queries(ds);
  if (c.binary_labels) ds = filter_queries(binary_mode(ds));
  auto split = split_by_date(ds, c.split.train_days, c.split.valid_days,
                             c.split.test_days);
  step.parameters()["binary_labels"] = c.binary_labels;
  for (auto [name, part] : {std::pair{"train", &split.train},
                            std::pair{"valid", &split.valid},
                            std::pair{"test", &split.test}}) {
    step.parameters()[std::string(name) + "_queries"] = part->groups.size();
    step.parameters()[std::string(name) + "_pairs"] = part->num_items();
    step.output(out / (std::string(name) + ".jsonl"),
                render([&](auto& os) { write_featurized(os, to_featurized(*part)); }),
                [](std::istream& in) { (void)read_featurized(in); });
  }
  step.finish(out, true);
  std::cout << "train/valid/test queries: " << split.train.groups.size() << "/"
            << split.valid.groups.size() << "/" << split.test.groups.size()
            << '\n';
}

std::string model_content(const RankingModel& m) {
  return render([&](auto& os) { save_model(os, m); });
}

void model_check(std::istream& in) { (void)load_model(in); }

void cmd_train(const RunConfig& c, const fs::path& train,
               const std::string& valid, const fs::path& out) {
  Step step("train", c);
  auto tr = load_split(step, train, c);
  RankingDataset va{tr.feature_names, {}, tr.binary};
  if (!valid.empty()) va = load_split(step, valid, c);
  auto model = train_model(c.model, c.hyperparameters_for(c.model), tr, va,
                           c.seed);
  step.parameters()["model"] = to_string(c.model);
  step.parameters()["feature_set"] = to_string(c.feature_set);
  step.parameters()["hyperparameters"] = model.hyperparameters();
  step.output(out, model_content(model), model_check);
  step.finish(out, false);
  std::cerr << "trained " << to_string(c.model) << " on "
            << tr.groups.size() << " queries (" << tr.num_items()
            << " pairs)";
  if (!va.groups.empty()) {
    std::cerr << ", validation NDCG@10 "
              << evaluate_model(model, va, {10}).mean_ndcg(10);
  }
  std::cerr << '\n';
}

void cmd_tune(const RunConfig& c, const fs::path& train, const fs::path& valid,
              const fs::path& out) {
  Step step("tune", c);
  auto tr = load_split(step, train, c);
  auto va = load_split(step, valid, c);
  auto grid = c.grid_for(c.model);
  auto result = tune(c.model, grid, tr, va, c.seed);
  nlohmann::ordered_json table;
  table["model"] = to_string(c.model);
  table["feature_set"] = to_string(c.feature_set);
  table["grid"] = grid;
  auto trials = nlohmann::ordered_json::array();
  for (const auto& t : result.trials) {
    trials.push_back({{"hyperparameters", t.hyperparameters},
                      {"valid_ndcg10", t.valid_ndcg10}});
  }
  table["trials"] = std::move(trials);
  table["best"] = result.best;
  step.output(out / "tuning.json", table.dump(2) + "\n", json_check);
  step.output(out / "model.json", model_content(*result.best_model),
              model_check);
  step.finish(out, true);
  std::cout << std::setw(8) << "trial" << "  valid NDCG@10  hyperparameters\n";
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    std::cout << std::setw(8) << i << "  " << std::fixed << std::setprecision(4)
              << std::setw(13) << result.trials[i].valid_ndcg10 << "  "
              << result.trials[i].hyperparameters.dump()
              << (i == result.best ? "  *" : "") << '\n';
  }
}

void cmd_rank(const RunConfig& c, const fs::path& model_path,
              const fs::path& featurized, const fs::path& out) {
  Step step("rank", c);
  auto model = read_model_file(step, model_path);
  auto pairs = read_featurized_file(step, featurized);
  std::set<std::string> wanted(model.feature_names().begin(),
                               model.feature_names().end());
  std::map<std::string, std::vector<std::pair<std::string, FeatureVector>>> groups;
  for (const auto& p : pairs) {
    FeatureVector fv;
    for (const auto& name : model.feature_names()) {
      auto v = p.features.get(name);
      if (!v) throw ConfigError("pair lacks model feature '" + name + "'");
      fv.add(name, *v);
    }
    groups[p.query_id].emplace_back(p.candidate_id, std::move(fv));
  }
  std::string content = render([&](auto& os) {
    for (const auto& [qid, group] : groups) {
      nlohmann::ordered_json j;
      j["query_id"] = qid;
      auto list = nlohmann::ordered_json::array();
      std::map<std::string, double> scores;
      for (const auto& [cid, fv] : group) scores[cid] = score(model, fv);
      for (const auto& cid : rank(model, group)) {
        list.push_back({{"candidate_id", cid}, {"score", scores[cid]}});
      }
      j["ranking"] = std::move(list);
      os << j.dump() << '\n';
    }
  });
  step.output(out, content, jsonl_check);
  step.finish(out, false);
  std::cout << "ranked " << groups.size() << " queries\n";
}

void cmd_evaluate(const RunConfig& c, const fs::path& model_path,
                  const fs::path& test, const fs::path& out) {
  Step step("evaluate", c);
  auto model = read_model_file(step, model_path);
  auto pairs = read_featurized_file(step, test);
  RunConfig layout = c;
  auto set_name = feature_set_name(model.feature_names());
  if (set_name == "custom") {
    throw ConfigError("model feature layout matches no known feature set");
  }
  layout.feature_set = feature_set_from_string(set_name);
  auto ds = to_dataset(pairs, layout.feature_set);
  auto rep = evaluate_model(model, ds, c.metric_k);

  nlohmann::ordered_json j;
  j["model"] = {{"kind", to_string(model.kind())},
                {"feature_set", set_name},
                {"sha256", sha256_file(model_path.string())}};
  j["split"] = {{"sha256", sha256_file(test.string())},
                {"queries", ds.groups.size()},
                {"pairs", ds.num_items()}};
  j["metrics"] = report_to_json(rep);
  step.output(out, j.dump(2) + "\n", json_check);
  step.finish(out, false);
  std::cout << j["metrics"]["aggregate"].dump(2) << '\n';
}

void cmd_report(const RunConfig& c, const std::vector<std::string>& reports,
                const fs::path& out) {
  Step step("report", c);
  if (reports.size() < 1) throw ConfigError("report needs at least one report");
  std::vector<nlohmann::ordered_json> loaded;
  for (const auto& r : reports) {
    auto in = step.input(r);
    try {
      loaded.push_back(nlohmann::ordered_json::parse(in));
      (void)loaded.back().at("metrics").at("aggregate");
    } catch (const nlohmann::json::exception& e) {
      throw CorruptArtifactError("bad report " + r + ": " + e.what());
    }
  }
  std::size_t k = c.metric_k.back();
  std::string key = "NDCG@" + std::to_string(k);
  auto per_query = [&](const nlohmann::ordered_json& rep) {
    std::map<std::string, double> m;
    for (const auto& q : rep.at("metrics").at("per_query")) {
      if (!q.contains(key)) throw ConfigError("report lacks " + key);
      m[q.at("query_id").get<std::string>()] = q.at(key).get<double>();
    }
    return m;
  };

  nlohmann::ordered_json summary;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    const auto& rep = loaded[i];
    nlohmann::ordered_json row;
    row["report"] = fs::path(reports[i]).filename().string();
    row["model"] = rep.at("model").at("kind");
    row["feature_set"] = rep.at("model").at("feature_set");
    row["metrics"] = rep.at("metrics").at("aggregate");
    rows.push_back(std::move(row));
  }
  summary["rows"] = rows;
  auto comparisons = nlohmann::ordered_json::array();
  auto base = per_query(loaded[0]);
  for (std::size_t i = 1; i < loaded.size(); ++i) {
    auto other = per_query(loaded[i]);
    std::vector<double> a, b;
    for (const auto& [qid, v] : base) {
      auto it = other.find(qid);
      if (it == other.end()) continue;
      a.push_back(v);
      b.push_back(it->second);
    }
    nlohmann::ordered_json cmp;
    cmp["baseline"] = rows[0]["report"];
    cmp["other"] = rows[i]["report"];
    cmp["metric"] = key;
    cmp["paired_queries"] = a.size();
    if (a.size() >= 2) {
      auto t = paired_ttest(b, a);
      cmp["mean_difference"] = t.mean_difference;
      cmp["t"] = std::isfinite(t.t) ? nlohmann::ordered_json(t.t)
                                    : nlohmann::ordered_json(nullptr);
      cmp["df"] = t.df;
      cmp["p_value"] = t.p_value;
      cmp["degenerate"] = t.degenerate;
    }
    comparisons.push_back(std::move(cmp));
  }
  summary["comparisons"] = comparisons;
  step.output(out, summary.dump(2) + "\n", json_check);
  step.finish(out, false);

  std::vector<std::string> cols{"MAP"};
  for (auto kk : c.metric_k) cols.push_back("P@" + std::to_string(kk));
  for (auto kk : c.metric_k) cols.push_back("NDCG@" + std::to_string(kk));
  cols.push_back("MRR");
  std::cout << std::left << std::setw(24) << "run";
  for (const auto& col : cols) std::cout << std::right << std::setw(9) << col;
  std::cout << '\n';
  for (const auto& row : rows) {
    std::string name = row["model"].get<std::string>() + "_" +
                       row["feature_set"].get<std::string>();
    std::cout << std::left << std::setw(24) << name;
    for (const auto& col : cols) {
      std::cout << std::right << std::setw(9) << std::fixed
                << std::setprecision(4)
                << (row["metrics"].contains(col) ? row["metrics"][col].get<double>()
                                                 : NAN);
    }
    std::cout << '\n';
  }
  for (const auto& cmp : comparisons) {
    if (!cmp.contains("p_value")) continue;
    std::cout << cmp["other"].get<std::string>() << " vs "
              << cmp["baseline"].get<std::string>() << ": mean " << key
              << " difference " << cmp["mean_difference"].get<double>()
              << ", p = " << std::setprecision(6) << cmp["p_value"].get<double>()
              << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newsrank: rank news-event triples against event descriptions"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--feature-set", g.feature_set, "all, all-minus, sel or b")
      ->check(CLI::IsMember({"all", "all-minus", "sel", "b"}));
  app.add_option("--model", g.model, "rb, lm or rf")
      ->check(CLI::IsMember({"rb", "lm", "rf"}));
  app.add_flag("--binary-labels", g.binary_labels,
               "Drop relevant (grade 1) pairs when splitting");
  app.add_option("--entity-mode", g.entity_mode, "remote, offline or off")
      ->check(CLI::IsMember({"remote", "offline", "off"}));
  app.add_option("--metric-k", g.metric_k, "Metric cutoffs, e.g. 5,10");

  std::function<void(const RunConfig&)> action;
  auto sub = [&](const char* name, const char* help) {
    return app.add_subcommand(name, help);
  };

  std::string out, queries, candidates, pairs, entities, featurized, judgments,
      labelled, train, valid, test, model, gazetteer;
  std::vector<std::string> reports;
  int days = 14, per_day = 7;

  auto* synth = sub("synth", "Generate a synthetic corpus");
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--days", days, "Number of days")->check(CLI::PositiveNumber);
  synth->add_option("--queries-per-day", per_day, "Queries per day")
      ->check(CLI::PositiveNumber);
  synth->callback([&] {
    action = [&](const RunConfig& c) { cmd_synth(c, out, days, per_day); };
  });

  auto* ingest = sub("ingest", "Validate, normalise and filter raw inputs");
  ingest->add_option("--queries", queries, "Query JSONL")->required();
  ingest->add_option("--candidates", candidates, "Candidate TSV")->required();
  ingest->add_option("--out", out, "Output directory")->required();
  ingest->callback([&] {
    action = [&](const RunConfig& c) { cmd_ingest(c, queries, candidates, out); };
  });

  auto* pairs_cmd = sub("pairs", "Create (query, candidate) pairs");
  pairs_cmd->add_option("--queries", queries, "Query JSONL")->required();
  pairs_cmd->add_option("--candidates", candidates, "Candidate TSV")->required();
  pairs_cmd->add_option("--out", out, "Pair JSONL")->required();
  pairs_cmd->callback([&] {
    action = [&](const RunConfig& c) { cmd_pairs(c, queries, candidates, out); };
  });

  auto* link = sub("link", "Annotate queries and candidates with entities");
  link->add_option("--queries", queries, "Query JSONL")->required();
  link->add_option("--candidates", candidates, "Candidate TSV")->required();
  link->add_option("--gazetteer", gazetteer, "Gazetteer TSV (offline mode)");
  link->add_option("--out", out, "Entity JSONL")->required();
  link->callback([&] {
    action = [&](const RunConfig& c) {
      RunConfig cc = c;
      if (!gazetteer.empty()) cc.entities.gazetteer = gazetteer;
      cmd_link(cc, queries, candidates, out);
    };
  });

  auto* featurize = sub("featurize", "Compute feature vectors for pairs");
  featurize->add_option("--queries", queries, "Query JSONL")->required();
  featurize->add_option("--candidates", candidates, "Candidate TSV")->required();
  featurize->add_option("--pairs", pairs, "Pair JSONL")->required();
  featurize->add_option("--entities", entities, "Entity JSONL");
  featurize->add_option("--out", out, "Featurized JSONL")->required();
  featurize->callback([&] {
    action = [&](const RunConfig& c) {
      cmd_featurize(c, queries, candidates, pairs, entities, out);
    };
  });

  auto* labels = sub("labels", "Aggregate judgments into gold labels");
  labels->add_option("--judgments", judgments, "Judgment CSV")->required();
  labels->add_option("--featurized", featurized, "Featurized JSONL")->required();
  labels->add_option("--out", out, "Labelled JSONL")->required();
  labels->callback([&] {
    action = [&](const RunConfig& c) { cmd_labels(c, judgments, featurized, out); };
  });

  auto* split = sub("split", "Split labelled pairs by date");
  split->add_option("--labelled", labelled, "Labelled JSONL")->required();
  split->add_option("--out", out, "Output directory")->required();
  split->callback([&] {
    action = [&](const RunConfig& c) { cmd_split(c, labelled, out); };
  });

  auto* train_cmd = sub("train", "Train one model");
  train_cmd->add_option("--train", train, "Training split")->required();
  train_cmd->add_option("--valid", valid, "Validation split (early stopping)");
  train_cmd->add_option("--out", out, "Model file")->required();
  train_cmd->callback([&] {
    action = [&](const RunConfig& c) { cmd_train(c, train, valid, out); };
  });

  auto* tune_cmd = sub("tune", "Grid search on validation NDCG@10");
  tune_cmd->add_option("--train", train, "Training split")->required();
  tune_cmd->add_option("--valid", valid, "Validation split")->required();
  tune_cmd->add_option("--out", out, "Output directory")->required();
  tune_cmd->callback([&] {
    action = [&](const RunConfig& c) { cmd_tune(c, train, valid, out); };
  });

  auto* rank_cmd = sub("rank", "Rank candidates per query");
  rank_cmd->add_option("--model", model, "Model file")->required();
  rank_cmd->add_option("--featurized", featurized, "Featurized JSONL")->required();
  rank_cmd->add_option("--out", out, "Ranking JSONL")->required();
  rank_cmd->callback([&] {
    action = [&](const RunConfig& c) { cmd_rank(c, model, featurized, out); };
  });

  auto* evaluate = sub("evaluate", "Evaluate a model on a labelled split");
  evaluate->add_option("--model", model, "Model file")->required();
  evaluate->add_option("--test", test, "Labelled split")->required();
  evaluate->add_option("--out", out, "Report JSON")->required();
  evaluate->callback([&] {
    action = [&](const RunConfig& c) { cmd_evaluate(c, model, test, out); };
  });

  auto* report = sub("report", "Compare evaluation reports");
  report->add_option("--reports", reports, "Report files; the first is the baseline")
      ->required();
  report->add_option("--out", out, "Summary JSON")->required();
  report->callback([&] {
    action = [&](const RunConfig& c) { cmd_report(c, reports, out); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig config = resolve_config(g);
    action(config);
    return kOk;
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const VersionError& e) {
    std::cerr << "version mismatch: " << e.what() << '\n';
    return kVersionMismatch;
  } catch (const CorruptArtifactError& e) {
    std::cerr << "corrupt artifact: " << e.what() << '\n';
    return kCorruptArtifact;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kCorruptArtifact;
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kTraining;
  } catch (const TransportError& e) {
    std::cerr << "entity service error: " << e.what() << '\n';
    return kEntityService;
  } catch (const ProtocolError& e) {
    std::cerr << "entity service error: " << e.what() << '\n';
    return kEntityService;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
