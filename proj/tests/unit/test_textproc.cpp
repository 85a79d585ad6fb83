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

#include <map>
#include <random>
#include <string>

#include "fixtures.hpp"
#include "newsrank/porter.hpp"
#include "newsrank/textproc.hpp"

namespace newsrank {
namespace {

TEST(Tokenize, SplitsOnPunctuationAndLowercases) {
  EXPECT_EQ(tokenize("Gao, Mali's deadliest-attack (2017)!"),
            (TokenList{"gao", "mali", "s", "deadliest", "attack", "2017"}));
  EXPECT_EQ(tokenize(""), TokenList{});
  EXPECT_EQ(tokenize("  \t\n,.;"), TokenList{});
  EXPECT_EQ(tokenize("ÉCOLE Zürich"), (TokenList{"école", "zürich"}));
}

TEST(Tokenize, StopwordRemovalIsOptional) {
  TokenizerOptions drop{true};
  EXPECT_EQ(tokenize("The bomb in the camp", drop),
            (TokenList{"bomb", "camp"}));
  EXPECT_EQ(tokenize("The bomb in the camp").size(), 5u);
}

TEST(Tokenize, InvalidUtf8DoesNotThrow) {
  std::string bad = "ab\xff\xfe" "cd\xc3";
  auto t = tokenize(bad);
  for (const auto& term : t) EXPECT_FALSE(term.empty());
}

TEST(Tokenize, OutputIsAFixpointOnRandomText) {
  std::mt19937_64 rng(3);
  const std::string alphabet = "aBc Z9,.-'\t\n\xc3\xa9!?";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 60);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s.push_back(alphabet[pick(rng)]);
    auto once = tokenize(s);
    std::string joined;
    for (const auto& t : once) {
      EXPECT_FALSE(t.empty());
      EXPECT_EQ(t.find_first_of(" \t\n"), std::string::npos);
      joined += t + " ";
    }
    EXPECT_EQ(tokenize(joined), once) << s;
  }
}

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(stem("caresses"), "caress");
  EXPECT_EQ(stem("ponies"), "poni");
  EXPECT_EQ(stem("relational"), "relat");
  EXPECT_EQ(stem("bombing"), "bomb");
  EXPECT_EQ(stem("bomber"), "bomber");
  EXPECT_EQ(stem("generalizations"), "gener");
  EXPECT_EQ(stem("a"), "a");
}

TEST(Porter, NonAlphabeticTokensPassThrough) {
  EXPECT_EQ(stem("2017"), "2017");
  EXPECT_EQ(stem("école"), "école");
  EXPECT_EQ(stem(""), "");
}

TEST(Porter, MatchesReferenceVocabulary) {
  auto words = fixtures::read_lines(NEWSRANK_TEST_DATA_DIR "/porter/voc.txt");
  auto stems = fixtures::read_lines(NEWSRANK_TEST_DATA_DIR "/porter/output.txt");
  ASSERT_EQ(words.size(), stems.size());
  ASSERT_GT(words.size(), 20000u);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto s = stem(words[i]);
    if (s != stems[i]) ++mismatches;
    EXPECT_LE(s.size(), words[i].size());
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(CorpusStatsTest, CountsDocumentFrequency) {
  std::vector<TokenList> docs = {{"a", "b", "a"}, {"b", "c"}, {"d"}};
  auto s = build_stats(docs);
  EXPECT_EQ(s.doc_count, 3u);
  EXPECT_EQ(s.df("a"), 1u);
  EXPECT_EQ(s.df("b"), 2u);
  EXPECT_EQ(s.df("zzz"), 0u);
  EXPECT_DOUBLE_EQ(s.avg_doc_len, 2.0);
  EXPECT_EQ(build_stats(std::vector<TokenList>{}).doc_count, 0u);
}

TEST(CorpusStatsTest, MatchesRecountOnRandomCorpora) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TokenList> docs(1 + trial % 9);
    for (auto& d : docs) d = fixtures::random_doc(rng, 8, 6);
    auto s = build_stats(docs);
    std::map<std::string, std::size_t> df;
    double len = 0;
    for (const auto& d : docs) {
      len += static_cast<double>(d.size());
      for (const auto& t : term_set(d)) ++df[t];
    }
    for (int w = 0; w < 6; ++w) {
      std::string t = "t" + std::to_string(w);
      EXPECT_EQ(s.df(t), df.count(t) ? df[t] : 0u);
    }
    EXPECT_NEAR(s.avg_doc_len, len / static_cast<double>(docs.size()), 1e-12);
  }
}

}  // namespace
}  // namespace newsrank
