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

#include "fixtures.hpp"
#include "newsrank/pipeline.hpp"
#include "newsrank/synth.hpp"

namespace newsrank {
namespace {

SynthConfig small_config(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.days = 4;
  c.queries_per_day = 3;
  c.candidates_per_day = 80;
  c.generic_per_day = 4;
  return c;
}

TEST(Synth, DeterministicPerSeed) {
  auto a = generate_synthetic_corpus(small_config(1));
  auto b = generate_synthetic_corpus(small_config(1));
  auto c = generate_synthetic_corpus(small_config(2));
  EXPECT_EQ(a.queries, b.queries);
  EXPECT_EQ(a.candidates, b.candidates);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_NE(a.queries, c.queries);
}

TEST(Synth, ShapeAndJudgmentCoverage) {
  auto cfg = small_config(3);
  auto corpus = generate_synthetic_corpus(cfg);
  EXPECT_EQ(corpus.queries.size(), 12u);
  EXPECT_EQ(corpus.candidates.size(), 4u * (80 + 4));
  auto filtered = filter_generic(corpus.candidates, {"Make statement"});
  EXPECT_EQ(filtered.size(), 4u * 80);
  auto pairs = make_pairs(corpus.queries, filtered);
  EXPECT_EQ(corpus.truth.size(), pairs.size());
  EXPECT_EQ(corpus.judgments.size(), 3 * pairs.size());
  std::size_t vr = 0;
  for (const auto& [_, g] : corpus.truth) vr += g == Grade::VeryRelevant;
  EXPECT_GE(vr, 2u * 12);
  // Light noise: aggregated labels mostly equal the truth.
  auto gold = aggregate_all(corpus.judgments);
  std::size_t same = 0;
  for (const auto& [key, g] : gold.labels) same += corpus.truth.at(key) == g;
  EXPECT_GT(static_cast<double>(same) / static_cast<double>(gold.labels.size()), 0.98);
  EXPECT_GT(agreement(corpus.judgments), 90.0);
}

TEST(Synth, DefaultCorpusHasSkewedGrades) {
  auto corpus = generate_synthetic_corpus({});
  auto gold = aggregate_all(corpus.judgments);
  std::array<double, 3> share{};
  for (const auto& [_, g] : gold.labels) share[static_cast<std::size_t>(g)] += 1;
  for (auto& s : share) s /= static_cast<double>(gold.labels.size());
  EXPECT_GT(share[0], 0.9);
  EXPECT_LT(share[2], 0.06);
  EXPECT_LT(share[1], share[2]);
}

TEST(Pipeline, FeaturizeWithAndWithoutEntities) {
  auto corpus = generate_synthetic_corpus(small_config(4));
  auto filtered = filter_generic(corpus.candidates, {"Make statement"});
  auto pairs = make_pairs(corpus.queries, filtered);
  auto maps = link_all_offline(corpus.queries, filtered, corpus.gazetteer);
  EXPECT_EQ(maps.queries.size(), corpus.queries.size());
  auto with = featurize_pairs(pairs, filtered, {}, &maps);
  auto without = featurize_pairs(pairs, filtered, {});
  ASSERT_EQ(with.size(), pairs.size());
  EXPECT_EQ(with[0].features.names(), all_feature_names());
  EXPECT_FALSE(without[0].features.has("entity_common"));

  EntityMaps partial = maps;
  partial.candidates.erase(pairs[0].candidate->id);
  EXPECT_THROW(featurize_pairs(pairs, filtered, {}, &partial), ConfigError);

  auto gold = aggregate_all(corpus.judgments);
  auto ds = prepare_dataset(with, gold, FeatureSet::Sel, false);
  EXPECT_EQ(ds.feature_names, feature_set_members(FeatureSet::Sel));
  for (const auto& g : ds.groups) {
    EXPECT_TRUE(std::any_of(g.items.begin(), g.items.end(),
                            [](const RankedItem& i) { return i.grade > 0; }));
  }
  auto bin = prepare_dataset(with, gold, FeatureSet::B, true);
  EXPECT_TRUE(bin.binary);
  for (const auto& g : bin.groups)
    for (const auto& i : g.items) EXPECT_LE(i.grade, 1);
  EXPECT_THROW(prepare_dataset(without, gold, FeatureSet::All, false), ConfigError);
}

TEST(Pipeline, FeaturizedRecordsRoundTrip) {
  auto corpus = generate_synthetic_corpus(small_config(5));
  auto filtered = filter_generic(corpus.candidates, {"Make statement"});
  auto pairs = make_pairs(corpus.queries, filtered);
  auto fp = attach_labels(featurize_pairs(pairs, filtered, {}),
                          aggregate_all(corpus.judgments));
  std::stringstream buf;
  write_featurized(buf, fp);
  auto back = read_featurized(buf);
  ASSERT_EQ(back.size(), fp.size());
  for (std::size_t i = 0; i < fp.size(); ++i) {
    EXPECT_EQ(back[i].query_id, fp[i].query_id);
    EXPECT_EQ(back[i].label, fp[i].label);
    EXPECT_EQ(back[i].features, fp[i].features);
  }
  std::istringstream bad(R"({"query_id":"q","candidate_id":"c","date":"2017-01-01","label":5,"features":{}})");
  EXPECT_THROW(read_featurized(bad), ParseError);
  std::istringstream no_label(R"({"query_id":"q","candidate_id":"c","date":"2017-01-01","features":{"a":1}})");
  auto unlabeled = read_featurized(no_label);
  EXPECT_THROW(to_dataset(unlabeled, FeatureSet::B), ConfigError);
}

}  // namespace
}  // namespace newsrank
