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

#ifndef SIGNET_TIME_H_
#define SIGNET_TIME_H_

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace signet {

/// UTC instant at second precision.
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

/// Parses an RFC-3339 date-time. Accepts `Z` or a numeric offset and an
/// optional fractional second, which is truncated. Returns nullopt on any
/// syntax or range error.
std::optional<Timestamp> ParseRfc3339(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string FormatRfc3339(Timestamp ts);

/// Parses durations such as `30d`, `12h`, `90m`, `45s` or `2w`.
std::optional<Duration> ParseDuration(std::string_view text);

std::string FormatDuration(Duration d);

/// Half-open UTC interval [start, end).
struct TimeWindow {
  Timestamp start;
  Timestamp end;

  bool Contains(Timestamp t) const { return start <= t && t < end; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

}  // namespace signet

#endif  // SIGNET_TIME_H_
