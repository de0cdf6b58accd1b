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

#include "signet/fixture_store.h"

#include <fstream>

#include "json.hpp"
#include "signet/encoding.h"
#include "signet/error.h"

namespace signet {

std::shared_ptr<FixtureStore> FixtureStore::InMemory() {
  return std::shared_ptr<FixtureStore>(new FixtureStore());
}

std::shared_ptr<FixtureStore> FixtureStore::Open(
    const std::filesystem::path& path, bool writable) {
  auto store = std::shared_ptr<FixtureStore>(new FixtureStore());
  store->path_ = path;
  store->writable_ = writable;

  std::ifstream in(path);
  if (!in) {
    if (writable && !std::filesystem::exists(path)) return store;
    throw IoError("cannot open fixture file " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, "<record>", e.what());
    }
    if (!j.is_object() || !j.contains("digest") || !j["digest"].is_string()) {
      throw ParseError(line_no, "digest", "missing or not a string");
    }
    if (!j.contains("response") || !j["response"].is_string()) {
      throw ParseError(line_no, "response", "missing or not a string");
    }
    auto decoded = Base64Decode(j["response"].get<std::string>());
    if (!decoded) throw ParseError(line_no, "response", "invalid base64");
    store->entries_.emplace(j["digest"].get<std::string>(),
                            std::move(*decoded));
  }
  return store;
}

std::optional<std::string> FixtureStore::Lookup(
    const std::string& digest) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(digest);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool FixtureStore::Append(const std::string& digest,
                          const std::string& response) {
  std::unique_lock lock(mu_);
  if (entries_.count(digest) > 0) return false;
  if (path_) {
    if (!writable_) {
      throw IoError("fixture file opened read-only: " + path_->string());
    }
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot append to fixture file " + path_->string());
    nlohmann::json record = {{"digest", digest},
                             {"response", Base64Encode(response)}};
    out << record.dump() << '\n';
    out.flush();
    if (!out) throw IoError("write failed on fixture file " + path_->string());
  }
  entries_.emplace(digest, response);
  return true;
}

std::size_t FixtureStore::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

}  // namespace signet
