// Copyright 2026 The Signet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "signet/time.h"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace signet {
namespace {

using std::chrono::days;
using std::chrono::hours;
using std::chrono::minutes;
using std::chrono::seconds;

// Reads exactly `width` digits starting at `pos`.
bool ReadDigits(std::string_view s, std::size_t pos, std::size_t width,
                int& out) {
  if (pos + width > s.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    value = value * 10 + (s[i] - '0');
  }
  out = value;
  return true;
}

bool Expect(std::string_view s, std::size_t pos, char c) {
  return pos < s.size() && s[pos] == c;
}

}  // namespace

std::optional<Timestamp> ParseRfc3339(std::string_view s) {
  int year, month, day, hour, minute, second;
  if (!ReadDigits(s, 0, 4, year) || !Expect(s, 4, '-') ||
      !ReadDigits(s, 5, 2, month) || !Expect(s, 7, '-') ||
      !ReadDigits(s, 8, 2, day)) {
    return std::nullopt;
  }
  if (!(Expect(s, 10, 'T') || Expect(s, 10, 't') || Expect(s, 10, ' '))) {
    return std::nullopt;
  }
  if (!ReadDigits(s, 11, 2, hour) || !Expect(s, 13, ':') ||
      !ReadDigits(s, 14, 2, minute) || !Expect(s, 16, ':') ||
      !ReadDigits(s, 17, 2, second)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (Expect(s, pos, '.')) {
    ++pos;
    const std::size_t digits_start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
    if (pos == digits_start) return std::nullopt;
  }
  seconds offset{0};
  if (Expect(s, pos, 'Z') || Expect(s, pos, 'z')) {
    ++pos;
  } else if (Expect(s, pos, '+') || Expect(s, pos, '-')) {
    const int sign = s[pos] == '-' ? -1 : 1;
    int oh, om;
    if (!ReadDigits(s, pos + 1, 2, oh) || !Expect(s, pos + 3, ':') ||
        !ReadDigits(s, pos + 4, 2, om) || oh > 23 || om > 59) {
      return std::nullopt;
    }
    offset = sign * (hours(oh) + minutes(om));
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  const std::chrono::year_month_day ymd{
      std::chrono::year(year), std::chrono::month(static_cast<unsigned>(month)),
      std::chrono::day(static_cast<unsigned>(day))};
  // Leap seconds are not representable in sys_seconds.
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 59) {
    return std::nullopt;
  }
  const Timestamp local = std::chrono::sys_days(ymd) + hours(hour) +
                          minutes(minute) + seconds(second);
  return local - offset;
}

std::string FormatRfc3339(Timestamp ts) {
  const auto day_point = std::chrono::floor<days>(ts);
  const std::chrono::year_month_day ymd{day_point};
  const std::chrono::hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::optional<Duration> ParseDuration(std::string_view text) {
  if (text.size() < 2) return std::nullopt;
  long long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size() - 1;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || value < 0) return std::nullopt;
  switch (text.back()) {
    case 's':
      return seconds(value);
    case 'm':
      return minutes(value);
    case 'h':
      return hours(value);
    case 'd':
      return days(value);
    case 'w':
      return std::chrono::weeks(value);
    default:
      return std::nullopt;
  }
}

std::string FormatDuration(Duration d) {
  const long long s = d.count();
  if (s != 0 && s % 86400 == 0) return std::to_string(s / 86400) + "d";
  if (s != 0 && s % 3600 == 0) return std::to_string(s / 3600) + "h";
  if (s != 0 && s % 60 == 0) return std::to_string(s / 60) + "m";
  return std::to_string(s) + "s";
}

}  // namespace signet
