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

// Seeded generator of a synthetic news-event corpus: free-text notable-event
// queries, event triples, a gazetteer and crowd judgments.
//
// Every query describes a hidden event (subject, action, object, city,
// country). A candidate's true grade for a query is derived from which of
// those elements it shares:
//
//   very relevant  subject, action, object and city all match
//   relevant       action and country match, exactly one of
//                  {subject, object, city} differs
//   not relevant   anything else
//
// Three simulated annotators vote the true grade with probability
// 1 - annotator_noise and a uniformly chosen other grade otherwise.

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "newsrank/corpus.hpp"
#include "newsrank/entities.hpp"
#include "newsrank/labels.hpp"
#include "newsrank/pairing.hpp"

namespace newsrank {

struct SynthConfig {
  std::uint64_t seed = 42;
  Date start{2017, 1, 10};
  int days = 14;
  int queries_per_day = 7;
  /// Candidate triples per day, excluding generic "Make statement" ones.
  int candidates_per_day = 260;
  int generic_per_day = 10;
  int annotators_per_pair = 3;
  double annotator_noise = 0.02;
};

struct SynthCorpus {
  std::vector<QueryEvent> queries;
  std::vector<CandidateTriple> candidates;  // includes generic triples
  Gazetteer gazetteer;
  std::vector<std::pair<std::string, std::string>> gazetteer_entries;
  std::vector<Judgment> judgments;
  /// Ground truth grade per pair, before annotation noise.
  std::map<PairKey, Grade> truth;
};

namespace detail {

struct SynthAction {
  const char* predicate;
  const char* code;
  const char* description;
  std::vector<const char*> phrasings;  // how a query describes it
};

inline const std::vector<SynthAction>& synth_actions() {
  static const std::vector<SynthAction> actions = {
      {"Carry out suicide bombing", "183",
       "Carry out suicide bombing or car bombing against targets",
       {"carried out a suicide bombing against", "detonated a bomb attacking",
        "bombed"}},
      {"Kill by physical assault", "1823",
       "Kill by physical assault including shooting or stabbing",
       {"killed", "shot dead", "stabbed and killed"}},
      {"Arrest, detain, or charge with legal action", "173",
       "Arrest, detain, or charge with legal action or extradition",
       {"arrested", "detained and charged", "extradited"}},
      {"Host a visit", "043", "Host or receive a visit by foreign leaders",
       {"hosted a visit from", "welcomed on a state visit"}},
      {"Sign formal agreement", "057", "Sign formal agreement or treaty",
       {"signed an agreement with", "signed a treaty with"}},
      {"Demonstrate or rally", "141", "Demonstrate or rally in protest",
       {"rallied in protest against", "demonstrated against"}},
      {"Use conventional military force", "190",
       "Use conventional military force and fight with light weapons",
       {"clashed with", "fought"}},
      {"Impose embargo, boycott, or sanctions", "163",
       "Impose embargo, boycott, or sanctions on trade",
       {"imposed sanctions on", "announced an embargo on"}},
      {"Abduct, hijack, or take hostage", "181",
       "Abduct, hijack, or take hostage",
       {"abducted", "kidnapped", "took hostage"}},
      {"Provide humanitarian aid", "073",
       "Provide humanitarian aid such as food and medicine",
       {"delivered humanitarian aid to", "sent food and medicine to"}},
      {"Express intent to negotiate", "036",
       "Express intent to meet or negotiate",
       {"agreed to hold talks with", "offered to negotiate with"}},
      {"Accuse of crime or corruption", "112",
       "Accuse of crime, corruption, or human rights abuses",
       {"accused", "blamed"}},
      {"Fire artillery or missiles", "195",
       "Employ aerial weapons, fire artillery or missiles",
       {"shelled", "launched missiles at"}},
      {"Seize or damage property", "175",
       "Seize or damage property, confiscate",
       {"seized property belonging to", "raided"}},
  };
  return actions;
}

inline const SynthAction& generic_action() {
  static const SynthAction a{"Make statement", "010", "Make public statement",
                             {"said"}};
  return a;
}

inline const std::vector<std::pair<const char*, const char*>>& synth_actors() {
  // (surface, entity id)
  static const std::vector<std::pair<const char*, const char*>> actors = {
      {"Armed Gang", "Gang"},
      {"Military", "Military"},
      {"Police", "Police"},
      {"Protesters", "Protest"},
      {"Government", "Government"},
      {"Rebels", "Rebellion"},
      {"Children", "Child"},
      {"Journalists", "Journalist"},
      {"Prime Minister", "Prime_minister"},
      {"Opposition Party", "Opposition_(politics)"},
      {"Students", "Student"},
      {"Militants", "Militant"},
      {"Security Forces", "Security_forces"},
      {"Foreign Ministry", "Ministry_of_Foreign_Affairs"},
      {"Refugees", "Refugee"},
      {"Workers", "Workforce"},
      {"Drug Cartel", "Drug_cartel"},
      {"Border Guards", "Border_guard"},
      {"Navy", "Navy"},
      {"United Nations", "United_Nations"},
      {"Red Cross", "International_Red_Cross_and_Red_Crescent_Movement"},
      {"Farmers", "Farmer"},
      {"Doctors", "Physician"},
      {"Business Leaders", "Businessperson"},
  };
  return actors;
}

inline const std::vector<std::pair<const char*, const char*>>& synth_places() {
  // (city, country); every city and country is also a gazetteer entity.
  static const std::vector<std::pair<const char*, const char*>> places = {
      {"Gao", "Mali"},           {"Bamako", "Mali"},
      {"Etah", "India"},         {"Mumbai", "India"},
      {"Kansas City", "United States"}, {"Washington", "United States"},
      {"Culiacan", "Mexico"},    {"Mexico City", "Mexico"},
      {"Kabul", "Afghanistan"},  {"Kandahar", "Afghanistan"},
      {"Baghdad", "Iraq"},       {"Mosul", "Iraq"},
      {"Aleppo", "Syria"},       {"Damascus", "Syria"},
      {"Lagos", "Nigeria"},      {"Maiduguri", "Nigeria"},
      {"Cairo", "Egypt"},        {"Alexandria", "Egypt"},
      {"Istanbul", "Turkey"},    {"Ankara", "Turkey"},
      {"Kiev", "Ukraine"},       {"Donetsk", "Ukraine"},
      {"Manila", "Philippines"}, {"Davao", "Philippines"},
      {"Karachi", "Pakistan"},   {"Peshawar", "Pakistan"},
      {"Caracas", "Venezuela"},  {"Maracaibo", "Venezuela"},
      {"Nairobi", "Kenya"},      {"Mombasa", "Kenya"},
  };
  return places;
}

inline const std::vector<const char*>& synth_fillers() {
  static const std::vector<const char*> fillers = {
      "officials said on Tuesday",
      "according to local media reports",
      "leaving at least 12 people dead",
      "in the worst incident this year",
      "amid rising tensions in the region",
      "witnesses told reporters",
      "prompting international condemnation",
      "as talks stalled over the weekend",
      "the interior ministry confirmed",
      "in a move criticised by rights groups",
  };
  return fillers;
}

struct SynthEvent {
  std::size_t subject;
  std::size_t action;
  std::size_t object;
  std::size_t place;
};

inline Grade synth_grade(const SynthEvent& q, const SynthEvent& c) {
  const auto& places = synth_places();
  bool ms = q.subject == c.subject;
  bool ma = q.action == c.action;
  bool mo = q.object == c.object;
  bool mc = q.place == c.place;
  bool mk = std::string_view(places[q.place].second) ==
            places[c.place].second;
  if (ms && ma && mo && mc) return Grade::VeryRelevant;
  int wrong = !ms + !mo + !mc;
  if (ma && mk && wrong == 1) return Grade::Relevant;
  return Grade::NotRelevant;
}

}  // namespace detail

inline SynthCorpus generate_synthetic_corpus(const SynthConfig& config) {
  using namespace detail;
  const auto& actions = synth_actions();
  const auto& actors = synth_actors();
  const auto& places = synth_places();
  const auto& fillers = synth_fillers();

  std::mt19937_64 rng(config.seed);
  auto uniform = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  auto chance = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };
  auto other = [&](std::size_t n, std::size_t not_this) {
    std::size_t v = uniform(n - 1);
    return v >= not_this ? v + 1 : v;
  };
  auto same_country_place = [&](std::size_t place) {
    // places come in (city, country) pairs of two cities per country
    return place ^ 1u;
  };

  SynthCorpus corpus;
  for (const auto& [surface, id] : actors) {
    corpus.gazetteer_entries.emplace_back(surface, id);
  }
  std::set<std::string> seen_places;
  for (const auto& [city, country] : places) {
    std::string city_id = city;
    std::replace(city_id.begin(), city_id.end(), ' ', '_');
    std::string country_id = country;
    std::replace(country_id.begin(), country_id.end(), ' ', '_');
    corpus.gazetteer_entries.emplace_back(city, city_id);
    if (seen_places.insert(country).second) {
      corpus.gazetteer_entries.emplace_back(country, country_id);
    }
  }
  corpus.gazetteer_entries.emplace_back("suicide bombing", "Suicide_attack");
  corpus.gazetteer_entries.emplace_back("sanctions", "Economic_sanctions");
  corpus.gazetteer_entries.emplace_back("humanitarian aid", "Humanitarian_aid");
  corpus.gazetteer_entries.emplace_back("hostage", "Hostage");
  corpus.gazetteer_entries.emplace_back("treaty", "Treaty");
  corpus.gazetteer_entries.emplace_back("missiles", "Missile");
  for (const auto& [surface, id] : corpus.gazetteer_entries) {
    corpus.gazetteer.add(surface, id);
  }

  auto actor_text = [&](std::size_t actor, std::size_t place) {
    std::string s = actors[actor].first;
    if (chance(0.3)) s += std::string(" (from ") + places[place].second + ")";
    return s;
  };

  std::size_t next_candidate = 0;
  std::vector<std::pair<CandidateTriple, SynthEvent>> cand_events;
  std::vector<std::pair<std::size_t, SynthEvent>> query_events;  // index into queries

  for (int day = 0; day < config.days; ++day) {
    Date date = Date::from_days(config.start.days() + day);
    std::vector<SynthEvent> events;
    for (int qi = 0; qi < config.queries_per_day; ++qi) {
      SynthEvent e{uniform(actors.size()), uniform(actions.size()), 0,
                   uniform(places.size())};
      e.object = other(actors.size(), e.subject);
      events.push_back(e);

      const auto& act = actions[e.action];
      std::string text = std::string(actors[e.subject].first) + " " +
                         act.phrasings[uniform(act.phrasings.size())] + " " +
                         detail::ascii_lower(actors[e.object].first);
      if (chance(0.85)) {
        text += std::string(" in ") + places[e.place].first + ", " +
                places[e.place].second;
      } else {
        text += std::string(" in ") + places[e.place].second;
      }
      text += std::string(", ") + fillers[uniform(fillers.size())];
      if (chance(0.5)) {
        // A distracting mention of another actor or place.
        if (chance(0.5)) {
          text += std::string(", while ") +
                  detail::ascii_lower(actors[uniform(actors.size())].first) +
                  " " + actions[uniform(actions.size())].phrasings[0] + " " +
                  "others";
        } else {
          text += std::string(" near the border with ") +
                  places[uniform(places.size())].second;
        }
      }
      text += ".";
      char id[32];
      std::snprintf(id, sizeof id, "q%02d%02d", day, qi);
      query_events.emplace_back(corpus.queries.size(), e);
      corpus.queries.push_back({id, text, date});
    }

    std::vector<SynthEvent> day_events;
    for (const auto& e : events) {
      int n_vr = 2 + static_cast<int>(uniform(4));  // 2..5
      for (int k = 0; k < n_vr; ++k) day_events.push_back(e);
      int n_r = static_cast<int>(uniform(3));  // 0..2
      for (int k = 0; k < n_r; ++k) {
        SynthEvent r = e;
        switch (uniform(3)) {
          case 0: r.place = same_country_place(e.place); break;
          case 1: r.subject = other(actors.size(), e.subject); break;
          default: r.object = other(actors.size(), e.object); break;
        }
        day_events.push_back(r);
      }
      // Hard negatives sharing part of the event.
      for (int k = 0; k < 8; ++k) {
        SynthEvent h = e;
        switch (k % 4) {
          case 0:  // same action and place, different actors
            h.subject = other(actors.size(), e.subject);
            h.object = other(actors.size(), e.object);
            break;
          case 1:  // same actors and place, different action
            h.action = other(actions.size(), e.action);
            break;
          case 2:  // same actors and action, other country
            h.place = other(places.size(), e.place);
            if (std::string_view(places[h.place].second) ==
                places[e.place].second)
              h.place = other(places.size(), h.place);
            h.subject = other(actors.size(), e.subject);
            break;
          default:  // same subject, everything else different
            h.action = other(actions.size(), e.action);
            h.object = other(actors.size(), e.object);
            h.place = other(places.size(), e.place);
            break;
        }
        day_events.push_back(h);
      }
    }
    while (static_cast<int>(day_events.size()) < config.candidates_per_day) {
      SynthEvent e{uniform(actors.size()), uniform(actions.size()), 0,
                   uniform(places.size())};
      e.object = other(actors.size(), e.subject);
      day_events.push_back(e);
    }
    std::shuffle(day_events.begin(), day_events.end(), rng);

    auto emit = [&](const SynthEvent& e, const SynthAction& act) {
      char id[32];
      std::snprintf(id, sizeof id, "c%06zu", next_candidate++);
      CandidateTriple c;
      c.id = id;
      c.subject = actor_text(e.subject, e.place);
      c.predicate = act.predicate;
      c.predicate_code = act.code;
      c.predicate_description = chance(0.9) ? act.description : "";
      c.object = actor_text(e.object, e.place);
      c.city = chance(0.92) ? places[e.place].first : "";
      c.country = places[e.place].second;
      c.date = date;
      cand_events.emplace_back(c, e);
      corpus.candidates.push_back(std::move(c));
    };
    for (const auto& e : day_events) emit(e, actions[e.action]);
    for (int k = 0; k < config.generic_per_day; ++k) {
      SynthEvent e{uniform(actors.size()), 0, 0, uniform(places.size())};
      e.object = other(actors.size(), e.subject);
      emit(e, generic_action());
    }
  }

  // Judge the pairs the pipeline will actually see.
  auto filtered = filter_generic(corpus.candidates, {"Make statement"});
  std::map<std::string, SynthEvent> event_of;
  for (const auto& [c, e] : cand_events) event_of.emplace(c.id, e);
  std::map<std::string, SynthEvent> query_event_of;
  for (const auto& [qi, e] : query_events) {
    query_event_of.emplace(corpus.queries[qi].id, e);
  }
  for (const auto& p : make_pairs(corpus.queries, filtered)) {
    Grade truth = synth_grade(query_event_of.at(p.query->id),
                              event_of.at(p.candidate->id));
    corpus.truth.emplace(PairKey{p.query->id, p.candidate->id}, truth);
    for (int a = 0; a < config.annotators_per_pair; ++a) {
      Grade vote = truth;
      if (chance(config.annotator_noise)) {
        int shift = 1 + static_cast<int>(uniform(2));
        vote = static_cast<Grade>((static_cast<int>(truth) + shift) % 3);
      }
      char annotator[16];
      std::snprintf(annotator, sizeof annotator, "a%02zu", uniform(20));
      corpus.judgments.push_back(
          {p.query->id, p.candidate->id, annotator, vote});
    }
  }
  return corpus;
}

}  // namespace newsrank
