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

// Query events (notable-event descriptions) and candidate event triples,
// their file formats, and the generic-action filter.
//
// Query file: JSON lines, {"id": ..., "text": ..., "date": ...}.
// Candidate file: tab-separated, with the header
//   id subject predicate predicate_code predicate_description object city
//   country date

#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "newsrank/common.hpp"

namespace newsrank {

struct QueryEvent {
  std::string id;
  std::string text;
  Date date;

  friend bool operator==(const QueryEvent&, const QueryEvent&) = default;
};

struct CandidateTriple {
  std::string id;
  std::string subject;
  std::string predicate;
  std::string predicate_code;
  std::string predicate_description;
  std::string object;
  std::string city;
  std::string country;
  Date date;

  friend bool operator==(const CandidateTriple&,
                         const CandidateTriple&) = default;
};

enum class Grade : int { NotRelevant = 0, Relevant = 1, VeryRelevant = 2 };

inline Grade grade_from_int(int value) {
  if (value < 0 || value > 2) {
    throw ParseError("grade out of range: " + std::to_string(value));
  }
  return static_cast<Grade>(value);
}

/// Closed set of action-category codes. Empty means "not configured".
using CodeTable = std::set<std::string>;

inline constexpr std::string_view kCandidateHeader =
    "id\tsubject\tpredicate\tpredicate_code\tpredicate_description\tobject\t"
    "city\tcountry\tdate";

inline std::vector<QueryEvent> parse_queries(std::istream& in) {
  std::vector<QueryEvent> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    }
    auto field = [&](const char* name) -> std::string {
      if (!record.is_object() || !record.contains(name)) {
        throw ParseError(std::string("missing field '") + name + "'", lineno);
      }
      const auto& v = record.at(name);
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      throw ParseError(std::string("field '") + name + "' is not a string",
                       lineno);
    };
    QueryEvent q;
    q.id = field("id");
    q.text = field("text");
    if (detail::trim(q.text).empty()) {
      throw ParseError("empty query text", lineno);
    }
    try {
      q.date = Date::parse(field("date"));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    out.push_back(std::move(q));
  }
  return out;
}

inline void write_queries(std::ostream& out,
                          const std::vector<QueryEvent>& queries) {
  for (const auto& q : queries) {
    nlohmann::ordered_json j;
    j["id"] = q.id;
    j["text"] = q.text;
    j["date"] = q.date.iso();
    out << j.dump() << '\n';
  }
}

/// Parses the tab-separated candidate format. When `codes` is non-empty,
/// non-empty predicate codes must belong to it.
inline std::vector<CandidateTriple> parse_candidates(
    std::istream& in, const CodeTable& codes = {}) {
  std::vector<CandidateTriple> out;
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!seen_header) {
      if (line != kCandidateHeader) {
        throw ParseError("expected candidate header", lineno);
      }
      seen_header = true;
      continue;
    }
    if (line.empty()) continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 9) {
      throw ParseError("expected 9 columns, found " +
                           std::to_string(cols.size()),
                       lineno);
    }
    CandidateTriple c;
    c.id = std::string(cols[0]);
    c.subject = std::string(cols[1]);
    c.predicate = std::string(cols[2]);
    c.predicate_code = std::string(cols[3]);
    c.predicate_description = std::string(cols[4]);
    c.object = std::string(cols[5]);
    c.city = std::string(cols[6]);
    c.country = std::string(cols[7]);
    if (c.id.empty()) throw ParseError("empty id", lineno);
    if (c.subject.empty() || c.predicate.empty() || c.object.empty()) {
      throw ParseError("subject, predicate and object must be non-empty",
                       lineno);
    }
    if (!codes.empty() && !c.predicate_code.empty() &&
        !codes.contains(c.predicate_code)) {
      throw ParseError("unknown predicate code '" + c.predicate_code + "'",
                       lineno);
    }
    try {
      c.date = Date::parse(cols[8]);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline void write_candidates(std::ostream& out,
                             const std::vector<CandidateTriple>& candidates) {
  out << kCandidateHeader << '\n';
  for (const auto& c : candidates) {
    out << c.id << '\t' << c.subject << '\t' << c.predicate << '\t'
        << c.predicate_code << '\t' << c.predicate_description << '\t'
        << c.object << '\t' << c.city << '\t' << c.country << '\t'
        << c.date.iso() << '\n';
  }
}

/// Drops candidates whose predicate code, or predicate text
/// (case-insensitively), is in `banned`. Order is preserved.
inline std::vector<CandidateTriple> filter_generic(
    const std::vector<CandidateTriple>& candidates,
    const std::set<std::string>& banned) {
  if (banned.empty()) return candidates;
  std::unordered_set<std::string> banned_lower;
  for (const auto& b : banned) banned_lower.insert(detail::ascii_lower(b));
  std::vector<CandidateTriple> out;
  for (const auto& c : candidates) {
    bool drop = (!c.predicate_code.empty() && banned.contains(c.predicate_code)) ||
                banned_lower.contains(detail::ascii_lower(c.predicate));
    if (!drop) out.push_back(c);
  }
  return out;
}

/// Which candidate field feeds the "predicate" element.
enum class PredicateSource { Text, Code };

/// "subject predicate predicate_description object city country", empty
/// fields skipped. The date is never part of the text.
inline std::string candidate_text(
    const CandidateTriple& c, PredicateSource source = PredicateSource::Text) {
  std::string out;
  auto add = [&](std::string_view field) {
    // Collapse internal whitespace runs so the result never has double spaces.
    bool pending_space = !out.empty();
    for (char ch : field) {
      if (std::isspace(static_cast<unsigned char>(ch))) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(ch);
    }
  };
  add(c.subject);
  add(source == PredicateSource::Text ? c.predicate : c.predicate_code);
  add(c.predicate_description);
  add(c.object);
  add(c.city);
  add(c.country);
  return out;
}

}  // namespace newsrank
