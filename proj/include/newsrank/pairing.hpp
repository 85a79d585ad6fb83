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

#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "newsrank/corpus.hpp"
#include "newsrank/textproc.hpp"

namespace newsrank {

/// A (query, candidate) unit. Non-owning: both referents must outlive it.
struct Pair {
  const QueryEvent* query = nullptr;
  const CandidateTriple* candidate = nullptr;
};

/// Identifier-only form of a pair, as exchanged through pair files.
struct PairKey {
  std::string query_id;
  std::string candidate_id;

  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

struct PairingOptions {
  /// Compare stemmed rather than surface tokens in the overlap test.
  bool stemmed_overlap = false;
  PredicateSource predicate_source = PredicateSource::Text;
};

namespace detail {

inline std::set<std::string> overlap_terms(std::string_view text,
                                           bool stemmed) {
  auto tokens = tokenize(text);
  if (stemmed) tokens = stem_all(tokens);
  return term_set(tokens);
}

inline bool shares_term(const std::set<std::string>& a,
                        const std::set<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

}  // namespace detail

/// Every (query, candidate) with the same date and at least one term in
/// common, ordered by query id then candidate id.
inline std::vector<Pair> make_pairs(
    const std::vector<QueryEvent>& queries,
    const std::vector<CandidateTriple>& candidates,
    const PairingOptions& options = {}) {
  std::map<Date, std::vector<std::size_t>> by_date;
  std::vector<std::set<std::string>> cand_terms;
  cand_terms.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    by_date[candidates[i].date].push_back(i);
    cand_terms.push_back(detail::overlap_terms(
        candidate_text(candidates[i], options.predicate_source),
        options.stemmed_overlap));
  }

  std::vector<Pair> out;
  for (const auto& q : queries) {
    auto it = by_date.find(q.date);
    if (it == by_date.end()) continue;
    auto q_terms = detail::overlap_terms(q.text, options.stemmed_overlap);
    for (std::size_t ci : it->second) {
      if (detail::shares_term(q_terms, cand_terms[ci])) {
        out.push_back({&q, &candidates[ci]});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Pair& a, const Pair& b) {
    if (a.query->id != b.query->id) return a.query->id < b.query->id;
    return a.candidate->id < b.candidate->id;
  });
  return out;
}

inline void write_pair_keys(std::ostream& out, const std::vector<Pair>& pairs) {
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["query_id"] = p.query->id;
    j["candidate_id"] = p.candidate->id;
    out << j.dump() << '\n';
  }
}

inline std::vector<PairKey> read_pair_keys(std::istream& in) {
  std::vector<PairKey> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({j.at("query_id").get<std::string>(),
                     j.at("candidate_id").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad pair record: ") + e.what(), lineno);
    }
  }
  return out;
}

/// Resolves pair keys back to pairs over the given collections.
inline std::vector<Pair> resolve_pairs(
    const std::vector<PairKey>& keys, const std::vector<QueryEvent>& queries,
    const std::vector<CandidateTriple>& candidates) {
  std::map<std::string, const QueryEvent*> q_index;
  std::map<std::string, const CandidateTriple*> c_index;
  for (const auto& q : queries) q_index[q.id] = &q;
  for (const auto& c : candidates) c_index[c.id] = &c;
  std::vector<Pair> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    auto qi = q_index.find(k.query_id);
    auto ci = c_index.find(k.candidate_id);
    if (qi == q_index.end() || ci == c_index.end()) {
      throw ParseError("pair refers to unknown id (" + k.query_id + ", " +
                       k.candidate_id + ")");
    }
    out.push_back({qi->second, ci->second});
  }
  return out;
}

}  // namespace newsrank
