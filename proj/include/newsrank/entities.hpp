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

// Entity linking. Two linkers produce the same annotation type:
//
//  * OfflineLinker: greedy longest-match over a surface-form gazetteer.
//    Deterministic; used for tests and air-gapped runs.
//  * RemoteLinker: a TagMe-compatible HTTP endpoint (GET with `text` and
//    `gcube-token`, JSON response with `annotations[].title` and `rho`),
//    written through a persistent cache.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "newsrank/common.hpp"
#include "newsrank/hash.hpp"
#include "newsrank/textproc.hpp"

namespace newsrank {

struct EntityAnnotation {
  std::string surface;
  std::string entity_id;
  double confidence = 1.0;

  friend bool operator==(const EntityAnnotation&,
                         const EntityAnnotation&) = default;
};

using EntitySet = std::set<std::string>;

inline EntitySet entity_set(const std::vector<EntityAnnotation>& annotations) {
  EntitySet out;
  for (const auto& a : annotations) out.insert(a.entity_id);
  return out;
}

inline nlohmann::ordered_json annotations_to_json(
    const std::vector<EntityAnnotation>& annotations) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& a : annotations) {
    nlohmann::ordered_json j;
    j["surface"] = a.surface;
    j["entity_id"] = a.entity_id;
    j["confidence"] = a.confidence;
    arr.push_back(j);
  }
  return arr;
}

inline std::vector<EntityAnnotation> annotations_from_json(
    const nlohmann::ordered_json& arr) {
  std::vector<EntityAnnotation> out;
  for (const auto& j : arr) {
    out.push_back({j.at("surface").get<std::string>(),
                   j.at("entity_id").get<std::string>(),
                   j.at("confidence").get<double>()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Offline linker

/// Surface form (matched on token boundaries, case-insensitive) to entity id.
class Gazetteer {
 public:
  Gazetteer() = default;

  void add(std::string_view surface, std::string entity_id) {
    if (entity_id.empty()) throw ParseError("empty entity id");
    auto tokens = tokenize(surface);
    if (tokens.empty()) return;
    max_len_ = std::max(max_len_, tokens.size());
    entries_[join(tokens)] = std::move(entity_id);
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_surface_tokens() const { return max_len_; }

  const std::string* find(const std::string& normalized) const {
    auto it = entries_.find(normalized);
    return it == entries_.end() ? nullptr : &it->second;
  }

  /// Every entity id the gazetteer can produce.
  EntitySet range() const {
    EntitySet out;
    for (const auto& [_, id] : entries_) out.insert(id);
    return out;
  }

  static std::string join(std::span<const std::string> tokens) {
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out.push_back(' ');
      out += t;
    }
    return out;
  }

 private:
  std::map<std::string, std::string> entries_;
  std::size_t max_len_ = 0;
};

/// TSV `surface<TAB>entity_id`, one entry per line; '#' starts a comment.
inline Gazetteer load_gazetteer(std::istream& in) {
  Gazetteer g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty() || line.front() == '#') continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 2 || detail::trim(cols[1]).empty()) {
      throw ParseError("expected 'surface<TAB>entity_id'", lineno);
    }
    g.add(cols[0], std::string(detail::trim(cols[1])));
  }
  return g;
}

/// Greedy longest-match-first scan over the token sequence of `text`.
/// Matches do not overlap and carry confidence 1.0.
inline std::vector<EntityAnnotation> link_offline(std::string_view text,
                                                  const Gazetteer& gazetteer) {
  std::vector<EntityAnnotation> out;
  if (gazetteer.empty()) return out;
  auto tokens = tokenize(text);
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t longest = std::min(gazetteer.max_surface_tokens(),
                                   tokens.size() - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      auto surface = Gazetteer::join(
          std::span<const std::string>(tokens).subspan(i, len));
      if (const auto* id = gazetteer.find(surface)) {
        out.push_back({surface, *id, 1.0});
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Remote linker

/// Network or authentication failure talking to the linking service.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// The service answered with something that is not a valid response.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Append-only key-value log, one `key<TAB>value` record per line. Later
/// records shadow earlier ones. Keys are content hashes.
class EntityCache {
 public:
  EntityCache() = default;  // in-memory only
  explicit EntityCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;  // torn trailing write
      entries_[line.substr(0, tab)] = line.substr(tab + 1);
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const std::string& value) {
    std::lock_guard lock(mu_);
    entries_[key] = value;
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::app);
      out << key << '\t' << value << '\n';
      if (!out) throw Error("cannot append to cache " + path_);
    }
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

 private:
  std::string path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::string> entries_;
};

struct RemoteLinkerConfig {
  std::string endpoint = "https://tagme.d4science.org/tagme/tag";
  std::string token;
  std::string lang = "en";
  double threshold = 0.1;
  int max_concurrency = 4;
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{30};
};

class RemoteLinker {
 public:
  RemoteLinker(RemoteLinkerConfig config, EntityCache& cache)
      : config_(std::move(config)), cache_(cache) {
    if (config_.threshold < 0.0 || config_.threshold > 1.0) {
      throw ConfigError("entity confidence threshold must be in [0,1]");
    }
    if (config_.max_concurrency < 1) {
      throw ConfigError("max_concurrency must be >= 1");
    }
    auto scheme = config_.endpoint.find("://");
    if (scheme == std::string::npos) {
      throw ConfigError("endpoint must be an absolute URL");
    }
    auto slash = config_.endpoint.find('/', scheme + 3);
    base_ = config_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
  }

  static std::string cache_key(std::string_view text, double threshold) {
    char thr[32];
    std::snprintf(thr, sizeof thr, "%.6f", threshold);
    return sha256_hex(text) + ":" + thr;
  }

  /// Annotations for `text` with confidence >= threshold.
  std::vector<EntityAnnotation> link(const std::string& text) {
    if (detail::trim(text).empty()) return {};
    auto key = cache_key(text, config_.threshold);
    if (auto hit = cache_.get(key)) {
      return annotations_from_json(nlohmann::ordered_json::parse(*hit));
    }
    auto annotations = parse_response(fetch(text), config_.threshold);
    cache_.put(key, annotations_to_json(annotations).dump());
    return annotations;
  }

  /// Links every text with at most `max_concurrency` requests in flight.
  /// Output order matches input order.
  std::vector<std::vector<EntityAnnotation>> link_all(
      const std::vector<std::string>& texts) {
    std::vector<std::vector<EntityAnnotation>> out(texts.size());
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= texts.size()) return;
        try {
          out[i] = link(texts[i]);
        } catch (...) {
          std::lock_guard lock(err_mu);
          if (!first_error) first_error = std::current_exception();
          next = texts.size();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    auto n = std::min<std::size_t>(static_cast<std::size_t>(config_.max_concurrency),
                                   std::max<std::size_t>(texts.size(), 1));
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
  }

  std::size_t requests_made() const { return requests_.load(); }

  static std::vector<EntityAnnotation> parse_response(const std::string& body,
                                                      double threshold) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ProtocolError(std::string("response is not JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("annotations") ||
        !j["annotations"].is_array()) {
      throw ProtocolError("response lacks an 'annotations' array");
    }
    std::vector<EntityAnnotation> out;
    for (const auto& a : j["annotations"]) {
      // Spots the service could not resolve come back without a title.
      if (!a.is_object() || !a.contains("title")) continue;
      if (!a["title"].is_string() || !a.contains("rho") ||
          !a["rho"].is_number()) {
        throw ProtocolError("annotation with malformed title/rho");
      }
      double rho = a["rho"].get<double>();
      if (rho < threshold) continue;
      std::string title = a["title"].get<std::string>();
      if (title.empty()) continue;
      std::replace(title.begin(), title.end(), ' ', '_');
      std::string spot = a.contains("spot") && a["spot"].is_string()
                             ? a["spot"].get<std::string>()
                             : std::string{};
      out.push_back({spot, title, std::clamp(rho, 0.0, 1.0)});
    }
    return out;
  }

 private:
  RemoteLinkerConfig config_;
  EntityCache& cache_;
  std::string base_;
  std::string path_;
  std::atomic<std::size_t> requests_{0};

  std::string fetch(const std::string& text) {
    httplib::Params params{{"text", text},
                           {"gcube-token", config_.token},
                           {"lang", config_.lang}};
    auto backoff = config_.initial_backoff;
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      httplib::Client client(base_);
      client.set_connection_timeout(config_.timeout);
      client.set_read_timeout(config_.timeout);
      ++requests_;
      auto res = client.Get(path_, params, httplib::Headers{});
      if (!res) {
        last_error = "request failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 401 || res->status == 403) {
        throw TransportError("authentication rejected (HTTP " +
                             std::to_string(res->status) + ")");
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw TransportError("unexpected HTTP " + std::to_string(res->status));
      }
      return res->body;
    }
    throw TransportError("entity service unreachable after retries: " +
                         last_error);
  }
};

}  // namespace newsrank
