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
#include <cctype>
#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace newsrank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid configuration or incompatible combination of options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Training could not proceed on the supplied data.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Serialized artifact carries an unsupported schema version.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Serialized artifact is truncated or structurally invalid.
class CorruptArtifactError : public Error {
 public:
  using Error::Error;
};

/// Calendar date at day granularity (UTC).
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::year_month_day ymd) : ymd_(ymd) {
    if (!ymd_.ok()) throw ParseError("invalid calendar date");
  }
  Date(int y, unsigned m, unsigned d)
      : Date(std::chrono::year_month_day{std::chrono::year{y},
                                         std::chrono::month{m},
                                         std::chrono::day{d}}) {}

  int year() const { return static_cast<int>(ymd_.year()); }
  unsigned month() const { return static_cast<unsigned>(ymd_.month()); }
  unsigned day() const { return static_cast<unsigned>(ymd_.day()); }

  /// Days since 1970-01-01.
  long days() const {
    return std::chrono::sys_days{ymd_}.time_since_epoch().count();
  }
  static Date from_days(long days) {
    return Date{std::chrono::year_month_day{
        std::chrono::sys_days{std::chrono::days{days}}}};
  }

  std::string iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
  }

  /// Accepts "2017-01-17", "17 January 2017" and "17 Jan. 2017".
  static Date parse(std::string_view text);

  friend bool operator==(const Date& a, const Date& b) {
    return a.ymd_ == b.ymd_;
  }
  friend auto operator<=>(const Date& a, const Date& b) {
    return a.ymd_ <=> b.ymd_;
  }

 private:
  std::chrono::year_month_day ymd_{std::chrono::year{1970},
                                   std::chrono::January, std::chrono::day{1}};
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline std::optional<int> parse_uint(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::optional<unsigned> month_from_name(std::string_view name) {
  static constexpr const char* kMonths[] = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  std::string n = ascii_lower(name);
  if (!n.empty() && n.back() == '.') n.pop_back();
  if (n.size() < 3) return std::nullopt;
  for (unsigned i = 0; i < 12; ++i) {
    std::string_view full = kMonths[i];
    if (n == full) return i + 1;
    // Three- or four-letter abbreviations ("Jan", "Sept").
    if (n.size() <= 4 && full.substr(0, n.size()) == n) return i + 1;
  }
  return std::nullopt;
}

}  // namespace detail

inline Date Date::parse(std::string_view text) {
  auto s = detail::trim(text);
  auto fail = [&]() -> Date {
    throw ParseError("unparseable date '" + std::string(text) + "'");
  };
  auto make = [&](std::optional<int> y, std::optional<unsigned> m,
                  std::optional<int> d) -> Date {
    if (!y || !m || !d) return fail();
    std::chrono::year_month_day ymd{std::chrono::year{*y},
                                    std::chrono::month{*m},
                                    std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) {
      throw ParseError("invalid calendar date '" + std::string(text) + "'");
    }
    return Date{ymd};
  };

  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    auto m = detail::parse_uint(s.substr(5, 2));
    return make(detail::parse_uint(s.substr(0, 4)),
                m ? std::optional<unsigned>(static_cast<unsigned>(*m))
                  : std::nullopt,
                detail::parse_uint(s.substr(8, 2)));
  }

  std::vector<std::string_view> parts;
  for (auto p : detail::split(s, ' ')) {
    if (!p.empty()) parts.push_back(p);
  }
  if (parts.size() != 3) return fail();
  auto year = detail::parse_uint(parts[2]);
  if (parts[2].size() != 4) return fail();
  return make(year, detail::month_from_name(parts[1]),
              detail::parse_uint(parts[0]));
}

}  // namespace newsrank
