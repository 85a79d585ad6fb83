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

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "newsrank/porter.hpp"

namespace newsrank {

/// Ordered lowercase terms. No term is empty or contains whitespace.
using TokenList = std::vector<std::string>;

struct TokenizerOptions {
  /// Drops a small English function-word list. Off by default: lexical
  /// features are computed over every term.
  bool remove_stopwords = false;
};

namespace detail {

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes one code point starting at `i`, advancing it. Invalid sequences
// decode to U+FFFD and consume a single byte.
inline char32_t next_code_point(std::string_view s, std::size_t& i) {
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  unsigned char c = byte(i);
  if (c < 0x80) {
    ++i;
    return c;
  }
  int len = (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  char32_t cp = c & (0x7F >> len);
  for (int k = 1; k < len; ++k) {
    unsigned char cc = byte(i + k);
    if ((cc & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  i += len;
  return cp;
}

// Letters and digits. Outside ASCII this is approximate: punctuation, symbol
// and space blocks are separators, every other assigned code point is a word
// character.
inline bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
  }
  if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp == 0xFFFD || cp == 0xFEFF) return false;
  return true;
}

inline char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177))
    return cp | 1;
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E))
    return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

inline const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a",   "an",   "and", "are",  "as",   "at",   "be",  "by",
      "for", "from", "has", "he",   "in",   "is",   "it",  "its",
      "of",  "on",   "or",  "that", "the",  "to",   "was", "were",
      "will", "with", "his", "her", "their", "they", "this", "after"};
  return words;
}

}  // namespace detail

/// Splits on every non-alphanumeric code point and lowercases. Digits are
/// kept as terms.
inline TokenList tokenize(std::string_view text,
                          const TokenizerOptions& options = {}) {
  TokenList out;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    if (!options.remove_stopwords || !detail::stopwords().contains(current))
      out.push_back(current);
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = detail::next_code_point(text, i);
    if (detail::is_word_char(cp)) {
      detail::append_utf8(current, detail::to_lower(cp));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

inline TokenList stem_all(std::span<const std::string> tokens) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(stem(t));
  return out;
}

/// Distinct terms of a token list.
inline std::set<std::string> term_set(std::span<const std::string> tokens) {
  return {tokens.begin(), tokens.end()};
}

/// Document statistics over a collection; immutable once built.
struct CorpusStats {
  std::size_t doc_count = 0;
  std::unordered_map<std::string, std::size_t> doc_freq;
  double avg_doc_len = 0.0;

  std::size_t df(const std::string& term) const {
    auto it = doc_freq.find(term);
    return it == doc_freq.end() ? 0 : it->second;
  }
};

inline CorpusStats build_stats(std::span<const TokenList> documents) {
  CorpusStats stats;
  stats.doc_count = documents.size();
  std::size_t total = 0;
  for (const auto& doc : documents) {
    total += doc.size();
    for (const auto& term : term_set(doc)) ++stats.doc_freq[term];
  }
  if (stats.doc_count > 0) {
    stats.avg_doc_len =
        static_cast<double>(total) / static_cast<double>(stats.doc_count);
  }
  return stats;
}

}  // namespace newsrank
