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

#ifndef SIGNET_FIXTURE_STORE_H_
#define SIGNET_FIXTURE_STORE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace signet {

/// Recorded model responses keyed by canonical request digest.
///
/// File format: one JSON object per line,
/// `{"digest": <hex>, "response": <base64 of the response body>}`.
/// The file is append-only. When a digest occurs more than once the first
/// entry wins.
class FixtureStore {
 public:
  /// Memory-only store; Append never touches disk.
  static std::shared_ptr<FixtureStore> InMemory();

  /// Loads `path`. A missing file is an empty store when `writable`, and an
  /// IoError otherwise. Appends go to the end of `path` when `writable`.
  static std::shared_ptr<FixtureStore> Open(const std::filesystem::path& path,
                                            bool writable);

  std::optional<std::string> Lookup(const std::string& digest) const;

  /// Adds an entry unless the digest is already present. Returns true when
  /// the entry was new. Safe to call concurrently with Lookup.
  bool Append(const std::string& digest, const std::string& response);

  std::size_t size() const;

 private:
  FixtureStore() = default;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::string> entries_;
  std::optional<std::filesystem::path> path_;
  bool writable_ = true;
};

}  // namespace signet

#endif  // SIGNET_FIXTURE_STORE_H_
