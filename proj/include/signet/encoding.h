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

// Hashing, base64, canonical JSON and UTF-8 helpers shared by the modules.

#ifndef SIGNET_ENCODING_H_
#define SIGNET_ENCODING_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace signet {

/// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

std::string Base64Encode(std::string_view data);
std::optional<std::string> Base64Decode(std::string_view text);

/// Serializes with sorted keys, no insignificant whitespace and every
/// floating-point number printed with exactly six decimals. Two equal values
/// always produce the same bytes.
std::string CanonicalJson(const nlohmann::json& value);

/// Rounds to the six-decimal grid used by CanonicalJson, so that values
/// survive a serialize/parse cycle unchanged.
double Quantize6(double value);

/// Byte offset of the `codepoint`-th code point in `utf8`, or nullopt if the
/// string has fewer code points. `codepoint == length` maps to `utf8.size()`.
std::optional<std::size_t> Utf8ByteOffset(std::string_view utf8,
                                          std::size_t codepoint);

std::size_t Utf8Length(std::string_view utf8);

/// Trims ASCII whitespace from both ends.
std::string_view TrimWhitespace(std::string_view s);

}  // namespace signet

#endif  // SIGNET_ENCODING_H_
