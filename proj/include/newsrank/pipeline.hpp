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

// Glue between stages: entity maps, pair featurization and labelled
// dataset preparation.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "newsrank/dataset.hpp"
#include "newsrank/entities.hpp"
#include "newsrank/features.hpp"
#include "newsrank/labels.hpp"
#include "newsrank/pairing.hpp"

namespace newsrank {

/// Entity sets keyed by query id and by candidate id.
struct EntityMaps {
  std::map<std::string, EntitySet> queries;
  std::map<std::string, EntitySet> candidates;
};

inline EntityMaps link_all_offline(const std::vector<QueryEvent>& queries,
                                   const std::vector<CandidateTriple>& candidates,
                                   const Gazetteer& gazetteer,
                                   PredicateSource source = PredicateSource::Text) {
  EntityMaps maps;
  for (const auto& q : queries) {
    maps.queries[q.id] = entity_set(link_offline(q.text, gazetteer));
  }
  for (const auto& c : candidates) {
    maps.candidates[c.id] =
        entity_set(link_offline(candidate_text(c, source), gazetteer));
  }
  return maps;
}

/// Featurizes pairs. The IDF corpus is `corpus` (normally the filtered
/// candidate list). Entity features are added only when `entities` is given.
inline std::vector<FeaturizedPair> featurize_pairs(
    const std::vector<Pair>& pairs, const std::vector<CandidateTriple>& corpus,
    const FeaturizerOptions& options, const EntityMaps* entities = nullptr) {
  Featurizer featurizer(corpus, options);
  std::vector<FeaturizedPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const EntitySet* qe = nullptr;
    const EntitySet* ce = nullptr;
    if (entities) {
      auto qi = entities->queries.find(p.query->id);
      auto ci = entities->candidates.find(p.candidate->id);
      if (qi == entities->queries.end() || ci == entities->candidates.end()) {
        throw ConfigError("no entity annotations for pair (" + p.query->id +
                          ", " + p.candidate->id + ")");
      }
      qe = &qi->second;
      ce = &ci->second;
    }
    out.push_back({p.query->id, p.candidate->id, p.query->date, std::nullopt,
                   featurizer.compute(p, qe, ce)});
  }
  return out;
}

/// Labels, groups, filters and optionally binarises featurized pairs.
inline RankingDataset prepare_dataset(const std::vector<FeaturizedPair>& pairs,
                                      const GoldLabels& gold, FeatureSet set,
                                      bool binary) {
  auto ds = filter_queries(to_dataset(attach_labels(pairs, gold), set));
  if (binary) ds = filter_queries(binary_mode(ds));
  return ds;
}

}  // namespace newsrank
