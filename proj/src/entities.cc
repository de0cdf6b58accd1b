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

#include "signet/entities.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>

#include "signet/encoding.h"
#include "signet/error.h"

namespace signet {
namespace {

constexpr std::array<std::string_view, 7> kCorporateSuffixes = {
    "inc", "inc.", "corp", "corp.", "ltd", "llc", "co."};

bool IsAsciiPunctOrSpace(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && (std::ispunct(u) || std::isspace(u));
}

std::string StripEdges(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && IsAsciiPunctOrSpace(s[b])) ++b;
  while (e > b && IsAsciiPunctOrSpace(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string ToUpperAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string NormalizeSurface(std::string_view surface) {
  // Casefold (ASCII) and collapse whitespace runs into single spaces.
  std::string folded;
  bool pending_space = false;
  for (const char c : surface) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isspace(u)) {
      pending_space = !folded.empty();
      continue;
    }
    if (pending_space) folded.push_back(' ');
    pending_space = false;
    folded.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
  }

  std::string current = StripEdges(folded);
  for (;;) {
    const auto space = current.rfind(' ');
    if (space == std::string::npos) break;
    const std::string tail = current.substr(space + 1);
    // Edge stripping eats a final '.', so "co." arrives here as "co".
    auto listed = [](const std::string& s) {
      return std::find(kCorporateSuffixes.begin(), kCorporateSuffixes.end(), s) !=
             kCorporateSuffixes.end();
    };
    if (!listed(tail) && !listed(tail + ".")) break;
    std::string shorter = StripEdges(std::string_view(current).substr(0, space));
    if (shorter.empty()) break;
    current = std::move(shorter);
  }
  return current;
}

std::string SlugifySurface(std::string_view normalized) {
  std::string slug;
  bool pending_dash = false;
  for (const char c : normalized) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) {
      if (pending_dash && !slug.empty()) slug.push_back('-');
      pending_dash = false;
      slug.push_back(static_cast<char>(std::tolower(u)));
    } else {
      pending_dash = true;
    }
  }
  if (slug.empty()) {
    // Entirely non-ASCII surfaces still need a stable id.
    slug = "x-" + Sha256Hex(normalized).substr(0, 12);
  }
  return slug;
}

bool IsValidEntityId(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
  });
}

std::vector<AliasConflict> ValidateAliasTable(
    const std::vector<CanonicalEntity>& entities) {
  std::vector<AliasConflict> conflicts;
  std::map<std::string, std::string> owner;
  std::map<std::string, int> ids;
  for (const auto& entity : entities) {
    if (ids[entity.id]++ == 1) {
      conflicts.push_back({AliasConflict::Kind::kId, entity.id, entity.id,
                           entity.id});
    }
    std::set<std::string> keys;
    for (const auto& alias : entity.aliases) keys.insert(NormalizeSurface(alias));
    keys.insert(NormalizeSurface(entity.display_name));
    for (const auto& key : keys) {
      auto [it, inserted] = owner.emplace(key, entity.id);
      if (!inserted && it->second != entity.id) {
        conflicts.push_back(
            {AliasConflict::Kind::kAlias, key, it->second, entity.id});
      }
    }
  }
  return conflicts;
}

AliasTable AliasTable::FromEntities(std::vector<CanonicalEntity> entities) {
  for (const auto& entity : entities) {
    if (!IsValidEntityId(entity.id)) {
      throw ArgumentError("alias table: invalid entity id '" + entity.id + "'");
    }
  }
  const auto conflicts = ValidateAliasTable(entities);
  if (!conflicts.empty()) {
    const auto& c = conflicts.front();
    throw ArgumentError("alias table: '" + c.key + "' claimed by both '" +
                        c.first_id + "' and '" + c.second_id + "' (" +
                        std::to_string(conflicts.size()) + " conflicts)");
  }
  AliasTable table;
  for (auto& entity : entities) {
    const std::string display_key = NormalizeSurface(entity.display_name);
    const bool listed = std::any_of(
        entity.aliases.begin(), entity.aliases.end(),
        [&](const std::string& a) { return NormalizeSurface(a) == display_key; });
    if (!listed) entity.aliases.push_back(entity.display_name);
    for (const auto& alias : entity.aliases) {
      table.index_.emplace(NormalizeSurface(alias), entity.id);
    }
    if (entity.ticker) table.by_ticker_.emplace(ToUpperAscii(*entity.ticker), entity.id);
  }
  table.entities_ = std::move(entities);
  return table;
}

std::vector<CanonicalEntity> AliasTable::ParseEntities(
    const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError(0, "<table>", "expected a JSON array");
  std::vector<CanonicalEntity> entities;
  std::size_t index = 0;
  for (const auto& e : doc) {
    ++index;
    const std::string where = "entity " + std::to_string(index);
    if (!e.is_object()) throw ParseError(0, where, "not an object");
    CanonicalEntity entity;
    if (!e.contains("id") || !e["id"].is_string()) {
      throw ParseError(0, where + ".id", "missing or not a string");
    }
    entity.id = e["id"].get<std::string>();
    if (!e.contains("display_name") || !e["display_name"].is_string()) {
      throw ParseError(0, where + ".display_name", "missing or not a string");
    }
    entity.display_name = e["display_name"].get<std::string>();
    if (!e.contains("aliases") || !e["aliases"].is_array()) {
      throw ParseError(0, where + ".aliases", "missing or not an array");
    }
    for (const auto& a : e["aliases"]) {
      if (!a.is_string()) throw ParseError(0, where + ".aliases", "non-string alias");
      entity.aliases.push_back(a.get<std::string>());
    }
    if (e.contains("ticker") && e["ticker"].is_string()) {
      entity.ticker = e["ticker"].get<std::string>();
    } else if (e.contains("ticker") && !e["ticker"].is_null()) {
      throw ParseError(0, where + ".ticker", "not a string or null");
    }
    entities.push_back(std::move(entity));
  }
  return entities;
}

std::vector<CanonicalEntity> AliasTable::ReadEntities(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read alias table " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, "<table>", std::string("invalid JSON: ") + e.what());
  }
  return ParseEntities(doc);
}

AliasTable AliasTable::Load(const std::filesystem::path& path) {
  return FromEntities(ReadEntities(path));
}

const CanonicalEntity* AliasTable::Find(std::string_view id) const {
  for (const auto& entity : entities_) {
    if (entity.id == id) return &entity;
  }
  return nullptr;
}

std::optional<std::string> AliasTable::Lookup(std::string_view normalized) const {
  auto it = index_.find(normalized);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> AliasTable::EntityForTicker(
    std::string_view ticker) const {
  auto it = by_ticker_.find(ToUpperAscii(ticker));
  if (it == by_ticker_.end()) return std::nullopt;
  return it->second;
}

EntityRef ResolveSurface(std::string_view surface, const AliasTable& table) {
  EntityRef ref;
  ref.normalized = NormalizeSurface(surface);
  if (auto id = table.Lookup(ref.normalized)) {
    ref.id = *id;
    ref.resolved = true;
  } else {
    ref.id = SlugifySurface(ref.normalized);
  }
  return ref;
}

ResolvedMention Resolve(const MentionResult& mention, const AliasTable& table) {
  return {mention, ResolveSurface(mention.surface, table)};
}

}  // namespace signet
