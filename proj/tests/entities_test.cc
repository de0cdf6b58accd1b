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


#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "signet/entities.h"
#include "signet/error.h"
#include "test_util.h"

namespace signet {
namespace {

AliasTable Shipped() { return AliasTable::Load(test::SourceDir() / "data" / "aliases.json"); }

TEST(Normalize, CasefoldWhitespaceAndSuffixes) {
  EXPECT_EQ(NormalizeSurface("  Apple   Inc. "), "apple");
  EXPECT_EQ(NormalizeSurface("APPLE"), "apple");
  EXPECT_EQ(NormalizeSurface("Microsoft Corp"), "microsoft");
  EXPECT_EQ(NormalizeSurface("Acme Co., Ltd"), "acme");
  EXPECT_EQ(NormalizeSurface("\"Meta\","), "meta");
  EXPECT_EQ(NormalizeSurface("Meta\tPlatforms"), "meta platforms");
  EXPECT_EQ(NormalizeSurface("Inc"), "inc");
  EXPECT_EQ(NormalizeSurface("Amazon.com"), "amazon.com");
  EXPECT_EQ(NormalizeSurface("Acme Co."), "acme");
  EXPECT_EQ(NormalizeSurface("Apple Inc."), "apple");
  EXPECT_EQ(NormalizeSurface("  GOOGLE "), "google");
  EXPECT_EQ(NormalizeSurface("Tiktok"), "tiktok");
}

TEST(Normalize, Idempotent) {
  std::mt19937 rng(5);
  const std::string alphabet = "aBc .,Inc\t-Corp";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = static_cast<int>(rng() % 20);
    for (int k = 0; k < n; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
    const std::string once = NormalizeSurface(s);
    ASSERT_EQ(NormalizeSurface(once), once) << '"' << s << '"';
  }
}

TEST(Slugify, ProducesValidIds) {
  EXPECT_EQ(SlugifySurface("gop firm"), "gop-firm");
  EXPECT_EQ(SlugifySurface("at&t"), "at-t");
  EXPECT_EQ(SlugifySurface("  x  "), "x");
  const std::string non_ascii = SlugifySurface("\xe5\xb0\x8f\xe7\xb1\xb3");
  EXPECT_EQ(non_ascii.rfind("x-", 0), 0u);
  EXPECT_EQ(non_ascii, SlugifySurface("\xe5\xb0\x8f\xe7\xb1\xb3"));
  for (const auto& s : {"gop firm", "at&t", "\xe5\xb0\x8f"}) {
    EXPECT_TRUE(IsValidEntityId(SlugifySurface(s))) << s;
  }
  EXPECT_FALSE(IsValidEntityId(""));
  EXPECT_FALSE(IsValidEntityId("Apple"));
  EXPECT_FALSE(IsValidEntityId("a b"));
}

TEST(AliasTable, ShippedTableHasNoConflicts) {
  const auto entities = AliasTable::ReadEntities(test::SourceDir() / "data" / "aliases.json");
  EXPECT_TRUE(ValidateAliasTable(entities).empty());
  EXPECT_EQ(entities.size(), 7u);
}

TEST(AliasTable, ResolvesAliasesAndTickers) {
  const AliasTable table = Shipped();
  EXPECT_EQ(ResolveSurface("Meta Platforms", table).id, "facebook");
  EXPECT_EQ(ResolveSurface("FB", table).id, "facebook");
  EXPECT_EQ(ResolveSurface("Alphabet Inc.", table).id, "google");
  EXPECT_EQ(ResolveSurface("Tiktok", table).id, "tiktok");
  EXPECT_TRUE(ResolveSurface("Apple", table).resolved);
  const EntityRef gop = ResolveSurface("GOP Firm", table);
  EXPECT_FALSE(gop.resolved);
  EXPECT_EQ(gop.id, "gop-firm");
  EXPECT_EQ(gop.normalized, "gop firm");
  const EntityRef palantir = ResolveSurface("Palantir", table);
  EXPECT_FALSE(palantir.resolved);
  EXPECT_EQ(palantir.id, "palantir");
  EXPECT_EQ(table.EntityForTicker("meta"), "facebook");
  EXPECT_FALSE(table.EntityForTicker("TSLA").has_value());
  ASSERT_NE(table.Find("snap"), nullptr);
  EXPECT_EQ(table.Find("snap")->display_name, "Snap");
}

TEST(AliasTable, DetectsConflicts) {
  std::vector<CanonicalEntity> entities = {
      {"apple", "Apple", {"Apple Inc"}, "AAPL"},
      {"apple-records", "Apple Records", {"apple inc."}, std::nullopt},
      {"apple", "Apple again", {}, std::nullopt},
  };
  const auto conflicts = ValidateAliasTable(entities);
  ASSERT_EQ(conflicts.size(), 2u);
  EXPECT_EQ(conflicts[0].kind, AliasConflict::Kind::kAlias);
  EXPECT_EQ(conflicts[0].key, "apple");
  EXPECT_EQ(conflicts[0].first_id, "apple");
  EXPECT_EQ(conflicts[0].second_id, "apple-records");
  EXPECT_EQ(conflicts[1].kind, AliasConflict::Kind::kId);
  EXPECT_THROW(AliasTable::FromEntities(entities), ArgumentError);
  EXPECT_THROW(AliasTable::FromEntities({{"Bad Id", "X", {}, std::nullopt}}), ArgumentError);
}

TEST(AliasTable, SchemaErrorsNameTheField) {
  try {
    AliasTable::ParseEntities(nlohmann::json::parse(R"([{"id":"a","aliases":[]}])"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "entity 1.display_name");
  }
  EXPECT_THROW(AliasTable::ParseEntities(nlohmann::json::parse(R"({"id":"a"})")), ParseError);
  EXPECT_THROW(
      AliasTable::ParseEntities(nlohmann::json::parse(
          R"([{"id":"a","display_name":"A","aliases":[],"ticker":3}])")),
      ParseError);
}

}  // namespace
}  // namespace signet
