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

// Pair features.
//
// Three groups are computed for every (query, candidate) pair:
//
//  * component sizes: number of terms in the query and in the candidate;
//  * lexical pair scores: TF, TF-IDF and Okapi BM25 with the candidate as the
//    document and the query as the query, each on surface and on Porter-stemmed
//    terms, plus element-match (EM) scores
//        EM(q, e) = |terms(q) ∩ terms(e)| / |terms(e)|
//    for the subject, predicate, object, predicate description, location and
//    date of the candidate, and for the subject∪predicate∪object and
//    city∪country combinations;
//  * entity overlap: common entity count and Jaccard similarity.
//
// The canonical feature order is `all_feature_names()`; every feature set is
// a subsequence of it. Bump kFeatureSchemaVersion whenever it changes.

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "newsrank/common.hpp"
#include "newsrank/corpus.hpp"
#include "newsrank/entities.hpp"
#include "newsrank/pairing.hpp"
#include "newsrank/textproc.hpp"

namespace newsrank {

inline constexpr int kFeatureSchemaVersion = 1;

/// Named feature values in a fixed order. Names are unique.
class FeatureVector {
 public:
  FeatureVector() = default;

  void add(std::string name, double value) {
    if (has(name)) throw ConfigError("duplicate feature '" + name + "'");
    names_.push_back(std::move(name));
    values_.push_back(value);
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& values() const { return values_; }

  std::optional<double> get(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return values_[i];
    return std::nullopt;
  }

  bool has(std::string_view name) const { return get(name).has_value(); }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> values_;
};

enum class FeatureSet { All, AllMinus, Sel, B };

inline std::string to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::All: return "all";
    case FeatureSet::AllMinus: return "all-minus";
    case FeatureSet::Sel: return "sel";
    case FeatureSet::B: return "b";
  }
  return "?";
}

inline FeatureSet feature_set_from_string(std::string_view s) {
  if (s == "all") return FeatureSet::All;
  if (s == "all-minus") return FeatureSet::AllMinus;
  if (s == "sel") return FeatureSet::Sel;
  if (s == "b") return FeatureSet::B;
  throw ConfigError("unknown feature set '" + std::string(s) + "'");
}

inline const std::vector<std::string>& entity_feature_names() {
  static const std::vector<std::string> names = {"entity_common",
                                                 "entity_jaccard"};
  return names;
}

/// Candidate elements scored by element match, in canonical order.
inline const std::vector<std::string>& em_element_names() {
  static const std::vector<std::string> names = {
      "subject", "predicate", "object", "predicate_description", "location",
      "date"};
  return names;
}

inline const std::vector<std::string>& all_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"query_len", "candidate_len",
                                  "bm25_raw",  "bm25_stem",
                                  "tfidf_raw", "tfidf_stem",
                                  "tf_raw",    "tf_stem"};
    for (const auto& e : em_element_names()) {
      n.push_back("em_" + e + "_raw");
      n.push_back("em_" + e + "_stem");
    }
    for (const char* combo : {"spo", "city_country"}) {
      n.push_back(std::string("em_") + combo + "_raw");
      n.push_back(std::string("em_") + combo + "_stem");
    }
    for (const char* flag :
         {"missing_subject", "missing_predicate", "missing_object",
          "missing_predicate_description", "missing_location", "missing_spo"})
      n.push_back(flag);
    for (const auto& e : entity_feature_names()) n.push_back(e);
    return n;
  }();
  return names;
}

/// Members of a feature set, in canonical order.
inline std::vector<std::string> feature_set_members(FeatureSet set) {
  static const std::set<std::string> baseline = {"bm25_raw", "bm25_stem",
                                                 "tfidf_raw", "tfidf_stem"};
  static const std::set<std::string> selected_extra = {
      "em_subject_raw",   "em_subject_stem",  "em_predicate_raw",
      "em_predicate_stem", "em_object_raw",   "em_object_stem",
      "em_location_raw",  "em_location_stem", "entity_common",
      "entity_jaccard"};
  std::set<std::string> entity(entity_feature_names().begin(),
                               entity_feature_names().end());
  std::vector<std::string> out;
  for (const auto& name : all_feature_names()) {
    bool keep = false;
    switch (set) {
      case FeatureSet::All: keep = true; break;
      case FeatureSet::AllMinus: keep = !entity.contains(name); break;
      case FeatureSet::Sel:
        keep = baseline.contains(name) || selected_extra.contains(name);
        break;
      case FeatureSet::B: keep = baseline.contains(name); break;
    }
    if (keep) out.push_back(name);
  }
  return out;
}

inline bool uses_entities(FeatureSet set) {
  return set == FeatureSet::All || set == FeatureSet::Sel;
}

// ---------------------------------------------------------------------------
// Lexical scores. `query` is treated as a set of distinct terms; `doc` is the
// candidate's term sequence.

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

namespace detail {

inline std::map<std::string, std::size_t> counts(
    std::span<const std::string> doc) {
  std::map<std::string, std::size_t> out;
  for (const auto& t : doc) ++out[t];
  return out;
}

inline void require_corpus(const CorpusStats& stats) {
  if (stats.doc_count == 0) {
    throw ConfigError("corpus statistics are empty (N = 0)");
  }
}

}  // namespace detail

inline double tf_score(std::span<const std::string> query,
                       std::span<const std::string> doc) {
  auto c = detail::counts(doc);
  double sum = 0.0;
  for (const auto& t : term_set(query)) {
    auto it = c.find(t);
    if (it != c.end()) sum += static_cast<double>(it->second);
  }
  return sum;
}

/// Smoothed IDF: ln((N + 1) / (df + 1)) + 1.
inline double tfidf_idf(const CorpusStats& stats, const std::string& term) {
  return std::log((static_cast<double>(stats.doc_count) + 1.0) /
                  (static_cast<double>(stats.df(term)) + 1.0)) +
         1.0;
}

inline double tfidf_score(std::span<const std::string> query,
                          std::span<const std::string> doc,
                          const CorpusStats& stats) {
  detail::require_corpus(stats);
  auto c = detail::counts(doc);
  double sum = 0.0;
  for (const auto& t : term_set(query)) {
    auto it = c.find(t);
    if (it != c.end()) {
      sum += static_cast<double>(it->second) * tfidf_idf(stats, t);
    }
  }
  return sum;
}

/// Non-negative BM25 IDF: ln((N - df + 0.5) / (df + 0.5) + 1).
inline double bm25_idf(const CorpusStats& stats, const std::string& term) {
  double n = static_cast<double>(stats.doc_count);
  double df = static_cast<double>(stats.df(term));
  return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

inline double bm25_score(std::span<const std::string> query,
                         std::span<const std::string> doc,
                         const CorpusStats& stats, Bm25Params params = {}) {
  detail::require_corpus(stats);
  auto c = detail::counts(doc);
  double norm = stats.avg_doc_len > 0.0
                    ? static_cast<double>(doc.size()) / stats.avg_doc_len
                    : 1.0;
  double denom_base = params.k1 * (1.0 - params.b + params.b * norm);
  double sum = 0.0;
  for (const auto& t : term_set(query)) {
    auto it = c.find(t);
    if (it == c.end()) continue;
    double f = static_cast<double>(it->second);
    sum += bm25_idf(stats, t) * f * (params.k1 + 1.0) / (f + denom_base);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Element match

/// |query ∩ element| / |element| over distinct terms; nullopt when the element
/// has no terms.
inline std::optional<double> element_match(
    const std::set<std::string>& query_terms,
    const std::set<std::string>& element_terms) {
  if (element_terms.empty()) return std::nullopt;
  std::size_t common = 0;
  for (const auto& t : element_terms) common += query_terms.contains(t);
  return static_cast<double>(common) /
         static_cast<double>(element_terms.size());
}

/// Convenience form that reports an empty element as 0.
inline double em(const std::set<std::string>& query_terms,
                 const std::set<std::string>& element_terms) {
  return element_match(query_terms, element_terms).value_or(0.0);
}

/// (common entity count, Jaccard); Jaccard of two empty sets is 0.
inline std::pair<double, double> entity_features(const EntitySet& query,
                                                 const EntitySet& candidate) {
  std::size_t common = 0;
  for (const auto& e : query) common += candidate.contains(e);
  std::size_t uni = query.size() + candidate.size() - common;
  double jaccard = uni == 0 ? 0.0
                            : static_cast<double>(common) /
                                  static_cast<double>(uni);
  return {static_cast<double>(common), jaccard};
}

// ---------------------------------------------------------------------------
// Featurizer

struct FeaturizerOptions {
  Bm25Params bm25;
  PredicateSource predicate_source = PredicateSource::Text;
  TokenizerOptions tokenizer;
};

/// Computes feature vectors for pairs. IDF statistics come from the
/// candidate texts sharing the pair's date.
class Featurizer {
 public:
  Featurizer(const std::vector<CandidateTriple>& corpus,
             FeaturizerOptions options = {})
      : options_(options) {
    std::map<Date, std::vector<TokenList>> raw_docs;
    for (const auto& c : corpus) {
      raw_docs[c.date].push_back(tokens(candidate_text(c, options_.predicate_source)));
    }
    for (const auto& [date, docs] : raw_docs) {
      std::vector<TokenList> stemmed;
      stemmed.reserve(docs.size());
      for (const auto& d : docs) stemmed.push_back(stem_all(d));
      stats_.emplace(date, Partition{build_stats(docs), build_stats(stemmed)});
    }
  }

  const CorpusStats& raw_stats(const Date& date) const {
    return partition(date).raw;
  }
  const CorpusStats& stemmed_stats(const Date& date) const {
    return partition(date).stemmed;
  }

  /// Every feature in canonical order. Entity features are included only
  /// when both entity sets are supplied.
  FeatureVector compute(const Pair& pair,
                        const EntitySet* query_entities = nullptr,
                        const EntitySet* candidate_entities = nullptr) const {
    const QueryEvent& q = *pair.query;
    const CandidateTriple& c = *pair.candidate;
    const Partition& part = partition(c.date);

    TokenList q_raw = tokens(q.text);
    TokenList c_raw = tokens(candidate_text(c, options_.predicate_source));
    TokenList q_stem = stem_all(q_raw);
    TokenList c_stem = stem_all(c_raw);

    FeatureVector fv;
    fv.add("query_len", static_cast<double>(q_raw.size()));
    fv.add("candidate_len", static_cast<double>(c_raw.size()));
    fv.add("bm25_raw", bm25_score(q_raw, c_raw, part.raw, options_.bm25));
    fv.add("bm25_stem", bm25_score(q_stem, c_stem, part.stemmed, options_.bm25));
    fv.add("tfidf_raw", tfidf_score(q_raw, c_raw, part.raw));
    fv.add("tfidf_stem", tfidf_score(q_stem, c_stem, part.stemmed));
    fv.add("tf_raw", tf_score(q_raw, c_raw));
    fv.add("tf_stem", tf_score(q_stem, c_stem));

    auto q_raw_set = term_set(q_raw);
    auto q_stem_set = term_set(q_stem);
    auto element_sets = [&](std::string_view text) {
      auto t = tokens(text);
      return std::pair{term_set(t), term_set(stem_all(t))};
    };
    const std::string& predicate =
        options_.predicate_source == PredicateSource::Text ? c.predicate
                                                           : c.predicate_code;
    auto subject = element_sets(c.subject);
    auto pred = element_sets(predicate);
    auto object = element_sets(c.object);
    auto desc = element_sets(c.predicate_description);
    auto location = element_sets(c.city + " " + c.country);

    auto add_em = [&](const std::string& name,
                      const std::pair<std::set<std::string>,
                                      std::set<std::string>>& sets) {
      fv.add("em_" + name + "_raw", em(q_raw_set, sets.first));
      fv.add("em_" + name + "_stem", em(q_stem_set, sets.second));
    };
    add_em("subject", subject);
    add_em("predicate", pred);
    add_em("object", object);
    add_em("predicate_description", desc);
    add_em("location", location);
    double same_day = q.date == c.date ? 1.0 : 0.0;
    fv.add("em_date_raw", same_day);
    fv.add("em_date_stem", same_day);

    auto unite = [](std::initializer_list<const std::set<std::string>*> parts) {
      std::set<std::string> out;
      for (const auto* p : parts) out.insert(p->begin(), p->end());
      return out;
    };
    std::pair spo{unite({&subject.first, &pred.first, &object.first}),
                  unite({&subject.second, &pred.second, &object.second})};
    add_em("spo", spo);
    // city ∪ country is the location element's term set.
    add_em("city_country", location);

    auto flag = [](const auto& sets) { return sets.first.empty() ? 1.0 : 0.0; };
    fv.add("missing_subject", flag(subject));
    fv.add("missing_predicate", flag(pred));
    fv.add("missing_object", flag(object));
    fv.add("missing_predicate_description", flag(desc));
    fv.add("missing_location", flag(location));
    fv.add("missing_spo", flag(spo));

    if (query_entities && candidate_entities) {
      auto [common, jaccard] =
          entity_features(*query_entities, *candidate_entities);
      fv.add("entity_common", common);
      fv.add("entity_jaccard", jaccard);
    }
    return fv;
  }

 private:
  struct Partition {
    CorpusStats raw;
    CorpusStats stemmed;
  };

  FeaturizerOptions options_;
  std::map<Date, Partition> stats_;

  TokenList tokens(std::string_view text) const {
    return tokenize(text, options_.tokenizer);
  }

  const Partition& partition(const Date& date) const {
    auto it = stats_.find(date);
    if (it == stats_.end()) {
      throw ConfigError("no candidate corpus for date " + date.iso());
    }
    return it->second;
  }
};

/// Restricts a full feature vector to the members of `set`.
inline FeatureVector assemble(const FeatureVector& full, FeatureSet set) {
  FeatureVector out;
  for (const auto& name : feature_set_members(set)) {
    auto v = full.get(name);
    if (!v) {
      bool is_entity = name == "entity_common" || name == "entity_jaccard";
      throw ConfigError(is_entity ? "feature set '" + to_string(set) +
                                        "' needs entity features but no "
                                        "entity sets were supplied"
                                  : "feature '" + name + "' is missing");
    }
    out.add(name, *v);
  }
  return out;
}

}  // namespace newsrank
