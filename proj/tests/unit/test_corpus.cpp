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

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "newsrank/corpus.hpp"

namespace newsrank {
namespace {

std::string candidate_file(const std::string& rows) {
  return std::string(kCandidateHeader) + "\n" + rows;
}

TEST(ParseQueries, ReadsJsonLines) {
  std::istringstream in(
      R"({"id":"q0","text":"A bomb in Gao.","date":"17 January 2017"})"
      "\n\n"
      R"({"id":7,"text":"x","date":"2017-01-18"})"
      "\n");
  auto qs = parse_queries(in);
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[0].id, "q0");
  EXPECT_EQ(qs[0].date, (Date{2017, 1, 17}));
  EXPECT_EQ(qs[1].id, "7");
}

TEST(ParseQueries, ReportsLineOfBadRecord) {
  std::istringstream in(
      R"({"id":"q0","text":"ok","date":"2017-01-17"})"
      "\n"
      R"({"id":"q1","text":"ok"})"
      "\n");
  try {
    parse_queries(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_json("{nope\n");
  EXPECT_THROW(parse_queries(bad_json), ParseError);
  std::istringstream empty_text(R"({"id":"q","text":"  ","date":"2017-01-17"})");
  EXPECT_THROW(parse_queries(empty_text), ParseError);
  std::istringstream bad_date(R"({"id":"q","text":"a","date":"2017-02-31"})");
  EXPECT_THROW(parse_queries(bad_date), ParseError);
}

TEST(ParseCandidates, ReadsTable) {
  std::istringstream in(candidate_file(
      "c0\tArmed Gang\tCarry out suicide bombing\t183\t\tArmed rebel\tGao\tMali\t17 Jan. 2017\r\n"));
  auto cs = parse_candidates(in);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs[0], fixtures::c0());
}

TEST(ParseCandidates, RejectsMalformedRows) {
  auto expect_line = [](const std::string& text, std::size_t line,
                        const CodeTable& codes = {}) {
    std::istringstream in(text);
    try {
      parse_candidates(in, codes);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };
  expect_line("id\tsubject\n", 1);
  expect_line(candidate_file("c0\ta\tb\n"), 2);
  expect_line(candidate_file("c0\t\tb\t1\t\to\tx\ty\t2017-01-01\n"), 2);
  expect_line(candidate_file("c0\ts\tb\t1\t\to\tx\ty\t2017-01-01\n"
                             "c1\ts\tb\t1\t\to\tx\ty\tsoon\n"),
              3);
  expect_line(candidate_file("c0\ts\tb\t999\t\to\tx\ty\t2017-01-01\n"), 2,
              CodeTable{"183"});
}

TEST(ParseCandidates, WriteThenParseRoundTrips) {
  std::vector<CandidateTriple> cs = {fixtures::c0(), fixtures::c1(),
                                     fixtures::make_statement()};
  std::ostringstream out;
  write_candidates(out, cs);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_candidates(in), cs);

  std::vector<QueryEvent> qs = {fixtures::q0()};
  std::ostringstream qout;
  write_queries(qout, qs);
  std::istringstream qin(qout.str());
  EXPECT_EQ(parse_queries(qin), qs);
}

TEST(FilterGeneric, DropsBannedByTextOrCode) {
  std::vector<CandidateTriple> cs = {fixtures::c0(), fixtures::make_statement(),
                                     fixtures::c1()};
  auto kept = filter_generic(cs, {"make STATEMENT"});
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].id, "c0");
  EXPECT_EQ(kept[1].id, "c1");
  EXPECT_EQ(filter_generic(cs, {"010"}).size(), 2u);
  EXPECT_EQ(filter_generic(cs, {}).size(), 3u);
}

TEST(FilterGeneric, IsIdempotentOrderPreservingSubset) {
  std::mt19937_64 rng(5);
  std::vector<CandidateTriple> cs;
  for (int i = 0; i < 200; ++i) {
    auto c = i % 3 == 0 ? fixtures::make_statement() : fixtures::c0();
    c.id = "c" + std::to_string(rng() % 100000);
    cs.push_back(c);
  }
  std::set<std::string> banned{"Make statement"};
  auto once = filter_generic(cs, banned);
  EXPECT_EQ(filter_generic(once, banned), once);
  std::size_t j = 0;
  for (const auto& c : cs) {
    if (j < once.size() && c == once[j]) ++j;
  }
  EXPECT_EQ(j, once.size());
  for (const auto& c : once) EXPECT_NE(c.predicate, "Make statement");
}

TEST(CandidateText, JoinsElementsAndSkipsEmpty) {
  EXPECT_EQ(candidate_text(fixtures::c0()),
            "Armed Gang Carry out suicide bombing Armed rebel Gao Mali");
  EXPECT_EQ(candidate_text(fixtures::c0(), PredicateSource::Code),
            "Armed Gang 183 Armed rebel Gao Mali");
  auto c = fixtures::c0();
  c.subject = "  Armed   Gang ";
  c.city = "";
  EXPECT_EQ(candidate_text(c), "Armed Gang Carry out suicide bombing Armed rebel Mali");
}

TEST(GradeTest, RangeChecked) {
  EXPECT_EQ(grade_from_int(2), Grade::VeryRelevant);
  EXPECT_THROW(grade_from_int(3), ParseError);
  EXPECT_THROW(grade_from_int(-1), ParseError);
}

}  // namespace
}  // namespace newsrank
