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

#include <gtest/gtest.h>

#include "signet/encoding.h"
#include "signet/time.h"

namespace signet {
namespace {

using std::chrono::seconds;

TEST(Rfc3339, ParsesUtcAndOffsets) {
  // Epoch values computed with Python's datetime.
  EXPECT_EQ(ParseRfc3339("2021-04-05T14:00:00Z")->time_since_epoch(), seconds(1617631200));
  EXPECT_EQ(ParseRfc3339("2021-04-05T16:30:00+02:30")->time_since_epoch(),
            seconds(1617631200));
  EXPECT_EQ(ParseRfc3339("2000-02-29T12:34:56Z")->time_since_epoch(), seconds(951827696));
  EXPECT_EQ(ParseRfc3339("1969-12-31T23:59:59Z")->time_since_epoch(), seconds(-1));
  EXPECT_EQ(ParseRfc3339("2021-04-05T14:00:00.987Z")->time_since_epoch(),
            seconds(1617631200));
}

TEST(Rfc3339, RejectsMalformed) {
  for (const char* bad : {"", "2021-04-05", "2021-04-05T14:00:00", "2021-13-01T00:00:00Z",
                          "2021-02-30T00:00:00Z", "2021-04-05T24:00:00Z",
                          "2021-04-05T14:00:00Zjunk", "yesterday", "2021-04-05T14:00:00.Z"}) {
    EXPECT_FALSE(ParseRfc3339(bad).has_value()) << bad;
  }
}

TEST(Rfc3339, FormatRoundTrips) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> dist(-2'000'000'000LL, 4'000'000'000LL);
  for (int i = 0; i < 500; ++i) {
    const Timestamp t{seconds(dist(rng))};
    const std::string text = FormatRfc3339(t);
    ASSERT_EQ(ParseRfc3339(text), t) << text;
  }
  EXPECT_EQ(FormatRfc3339(*ParseRfc3339("2021-04-05T16:30:00+02:30")),
            "2021-04-05T14:00:00Z");
}

TEST(Duration, ParseAndFormat) {
  EXPECT_EQ(ParseDuration("30d"), seconds(30 * 86400));
  EXPECT_EQ(ParseDuration("2w"), seconds(14 * 86400));
  EXPECT_EQ(ParseDuration("12h"), seconds(12 * 3600));
  EXPECT_EQ(ParseDuration("90m"), seconds(5400));
  EXPECT_EQ(ParseDuration("45s"), seconds(45));
  EXPECT_FALSE(ParseDuration("").has_value());
  EXPECT_FALSE(ParseDuration("d").has_value());
  EXPECT_FALSE(ParseDuration("10y").has_value());
  EXPECT_EQ(FormatDuration(seconds(30 * 86400)), "30d");
  EXPECT_EQ(FormatDuration(seconds(5400)), "90m");
  EXPECT_EQ(FormatDuration(seconds(61)), "61s");
}

TEST(TimeWindow, HalfOpen) {
  const TimeWindow w{Timestamp{seconds(10)}, Timestamp{seconds(20)}};
  EXPECT_TRUE(w.Contains(Timestamp{seconds(10)}));
  EXPECT_TRUE(w.Contains(Timestamp{seconds(19)}));
  EXPECT_FALSE(w.Contains(Timestamp{seconds(20)}));
  EXPECT_FALSE(w.Contains(Timestamp{seconds(9)}));
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Base64, KnownVectorsAndRoundTrip) {
  EXPECT_EQ(Base64Encode(""), "");
  EXPECT_EQ(Base64Encode("f"), "Zg==");
  EXPECT_EQ(Base64Encode("fo"), "Zm8=");
  EXPECT_EQ(Base64Encode("foobar"), "Zm9vYmFy");
  EXPECT_FALSE(Base64Decode("Zm9").has_value());
  EXPECT_FALSE(Base64Decode("Z=9v").has_value());
  EXPECT_FALSE(Base64Decode("Zm9*").has_value());
  std::mt19937 rng(3);
  for (int n = 0; n < 64; ++n) {
    std::string s(n, '\0');
    for (char& c : s) c = static_cast<char>(rng());
    ASSERT_EQ(Base64Decode(Base64Encode(s)), s);
  }
}

TEST(CanonicalJson, SortsKeysAndFixesFloats) {
  const auto a = nlohmann::json::parse(R"({"b":1,"a":{"y":0.5,"x":[true,null,"s"]}})");
  const auto b = nlohmann::json::parse(R"({"a":{"x":[true,null,"s"],"y":0.5},"b":1})");
  EXPECT_EQ(CanonicalJson(a), CanonicalJson(b));
  EXPECT_EQ(CanonicalJson(a), R"({"a":{"x":[true,null,"s"],"y":0.500000},"b":1})");
  EXPECT_EQ(CanonicalJson(nlohmann::json(-0.0)), "0.000000");
  EXPECT_EQ(CanonicalJson(nlohmann::json(-1e-9)), "0.000000");
  EXPECT_EQ(CanonicalJson(nlohmann::json("quote\"\n")), R"("quote\"\n")");
}

TEST(Quantize6, GridAndIdempotence) {
  EXPECT_EQ(Quantize6(0.1234564), 0.123456);
  EXPECT_EQ(Quantize6(-0.0), 0.0);
  EXPECT_FALSE(std::signbit(Quantize6(-1e-9)));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double q = Quantize6(dist(rng));
    ASSERT_EQ(Quantize6(q), q);
    ASSERT_EQ(Quantize6(-q), -q);
    // The printed form parses back to the same double.
    ASSERT_EQ(std::stod(CanonicalJson(nlohmann::json(q))), q);
  }
}

TEST(Utf8, OffsetsAndTrim) {
  const std::string s = "caf\xc3\xa9 Apple";
  EXPECT_EQ(Utf8Length(s), 10u);
  EXPECT_EQ(Utf8ByteOffset(s, 4), 5u);
  EXPECT_EQ(Utf8ByteOffset(s, 10), s.size());
  EXPECT_FALSE(Utf8ByteOffset(s, 11).has_value());
  EXPECT_EQ(TrimWhitespace("  \t a b \n"), "a b");
  EXPECT_EQ(TrimWhitespace("   "), "");
}

}  // namespace
}  // namespace signet
