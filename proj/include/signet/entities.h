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

// Entity resolution: maps organization surfaces to canonical entities by
// exact lookup after normalization. Nothing is guessed; a miss is reported
// as an unresolved mention keyed by its normalized surface.

#ifndef SIGNET_ENTITIES_H_
#define SIGNET_ENTITIES_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "signet/gateway.h"

namespace signet {

struct CanonicalEntity {
  std::string id;
  std::string display_name;
  std::vector<std::string> aliases;
  std::optional<std::string> ticker;
};

/// Casefolds, collapses whitespace, strips leading/trailing punctuation and
/// removes trailing corporate suffixes (inc, inc., corp, corp., ltd, llc,
/// co.). Idempotent.
std::string NormalizeSurface(std::string_view surface);

/// Maps a normalized surface onto [a-z0-9-]+; used as the node id of
/// unresolved entities ("gop firm" -> "gop-firm").
std::string SlugifySurface(std::string_view normalized);

bool IsValidEntityId(std::string_view id);

struct AliasConflict {
  enum class Kind { kAlias, kId };
  Kind kind = Kind::kAlias;
  std::string key;  // normalized alias, or the repeated id
  std::string first_id;
  std::string second_id;
};

/// Empty iff no normalized alias is claimed by two entities and no id
/// repeats.
std::vector<AliasConflict> ValidateAliasTable(
    const std::vector<CanonicalEntity>& entities);

/// Immutable after construction, so concurrent reads need no locking.
class AliasTable {
 public:
  AliasTable() = default;

  /// Throws ArgumentError on invalid ids or any conflict.
  static AliasTable FromEntities(std::vector<CanonicalEntity> entities);
  /// Parses the JSON array form. Throws ParseError on schema errors.
  static std::vector<CanonicalEntity> ParseEntities(const nlohmann::json& doc);
  static std::vector<CanonicalEntity> ReadEntities(
      const std::filesystem::path& path);
  static AliasTable Load(const std::filesystem::path& path);

  const std::vector<CanonicalEntity>& entities() const { return entities_; }
  const CanonicalEntity* Find(std::string_view id) const;
  /// Entity id for an already-normalized surface.
  std::optional<std::string> Lookup(std::string_view normalized) const;
  std::optional<std::string> EntityForTicker(std::string_view ticker) const;

 private:
  std::vector<CanonicalEntity> entities_;
  std::map<std::string, std::string, std::less<>> index_;
  std::map<std::string, std::string, std::less<>> by_ticker_;
};

/// Reference to an entity as seen in one document. Unresolved references
/// use SlugifySurface(normalized) as their id.
struct EntityRef {
  std::string id;
  bool resolved = false;
  std::string normalized;

  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

EntityRef ResolveSurface(std::string_view surface, const AliasTable& table);

struct ResolvedMention {
  MentionResult mention;
  EntityRef entity;
};

ResolvedMention Resolve(const MentionResult& mention, const AliasTable& table);

}  // namespace signet

#endif  // SIGNET_ENTITIES_H_
