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


#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "balance_oracle.h"
#include "signet/balance.h"
#include "signet/error.h"
#include "test_util.h"

namespace signet {
namespace {

using test::SignMatrix;

SignMatrix Complete(std::size_t n, int sign) {
  SignMatrix s(n, std::vector<int>(n, sign));
  for (std::size_t i = 0; i < n; ++i) s[i][i] = 0;
  return s;
}

TEST(Discretize, Threshold) {
  NetworkSnapshot snap;
  snap.window = {*ParseRfc3339("2021-01-01T00:00:00Z"), *ParseRfc3339("2021-02-01T00:00:00Z")};
  snap.nodes = {"a", "b", "c", "d"};
  auto edge = [](const char* x, const char* y, double w) {
    SignedEdge e{EntityPair::Of(x, y)};
    e.weight = w;
    return e;
  };
  snap.edges = {edge("a", "b", 0.5), edge("a", "c", -0.05), edge("a", "d", 0.0),
                edge("b", "c", -0.9)};
  const auto g = Discretize(snap, 0.1);
  EXPECT_EQ(g.signed_edges().size(), 2u);
  EXPECT_EQ(g.Sign("a", "b"), 1);
  EXPECT_EQ(g.Sign("c", "b"), -1);
  EXPECT_EQ(g.Sign("a", "c"), 0);
  EXPECT_EQ(g.nodes().size(), 4u);
  EXPECT_EQ(Discretize(snap, 0.0).signed_edges().size(), 3u);
}

TEST(Discretize, BundleSnapshot) {
  const auto snap = SnapshotFromJson(
      nlohmann::json::parse(std::ifstream(test::GoldenDir() / "headlines.json")));
  const auto g = Discretize(snap, 0.1);
  std::size_t positive = 0, negative = 0;
  for (const auto& [pair, sign] : g.signed_edges()) (sign > 0 ? positive : negative) += 1;
  EXPECT_EQ(positive, 1u);
  EXPECT_EQ(negative, 4u);
  // apple-facebook-google closes the only triangle: (-, +, -) is balanced.
  const auto census = ComputeTriadCensus(g);
  EXPECT_EQ(census.pnn, 1u);
  EXPECT_EQ(census.total(), 1u);
  EXPECT_EQ(BalanceIndex(census), 1.0);
}

TEST(DiscretizedGraph, Validates) {
  EXPECT_THROW(DiscretizedGraph({"a", "b"}, {{EntityPair::Of("a", "b"), 2}}), ArgumentError);
  EXPECT_THROW(DiscretizedGraph({"a"}, {{EntityPair::Of("a", "b"), 1}}), ArgumentError);
}

TEST(TriadCensus, Examples) {
  const auto one = ComputeTriadCensus(test::ToGraph(Complete(3, 1)));
  EXPECT_EQ(one, (TriadCensus{1, 0, 0, 0}));
  const auto neg = ComputeTriadCensus(test::ToGraph(Complete(4, -1)));
  EXPECT_EQ(neg, (TriadCensus{0, 0, 0, 4}));
  EXPECT_EQ(ComputeTriadCensus(DiscretizedGraph{}).total(), 0u);
}

TEST(BalanceIndex, Examples) {
  EXPECT_EQ(BalanceIndex({1, 0, 0, 0}), 1.0);
  EXPECT_EQ(BalanceIndex({0, 2, 0, 0}), 0.0);
  EXPECT_EQ(BalanceIndex({1, 2, 1, 0}), 0.5);
  EXPECT_FALSE(BalanceIndex({}).has_value());
  const auto j = CensusToJson({});
  EXPECT_TRUE(j["balance_index"].is_null());
  EXPECT_EQ(j["triangles"], 0);
  EXPECT_EQ(CensusToJson({1, 2, 1, 0})["triads"]["++-"], 2);
}

TEST(PredictEdgeSign, Examples) {
  // a-b unknown; k1 is a friend of both, k2 an enemy of both.
  SignMatrix s(4, std::vector<int>(4, 0));
  auto set = [&](int i, int j, int v) { s[i][j] = s[j][i] = v; };
  set(0, 2, 1);
  set(1, 2, 1);
  set(0, 3, -1);
  set(1, 3, -1);
  const auto g = test::ToGraph(s);
  const auto p = PredictEdgeSign(g, EntityPair::Of("n0", "n1"));
  EXPECT_EQ(p.predicted, PredictedSign::kPositive);
  EXPECT_EQ(p.positive_votes, 2u);
  EXPECT_EQ(p.negative_votes, 0u);

  SignMatrix t(3, std::vector<int>(3, 0));
  t[0][2] = t[2][0] = 1;
  t[1][2] = t[2][1] = -1;
  const auto q = PredictEdgeSign(test::ToGraph(t), EntityPair::Of("n0", "n1"));
  EXPECT_EQ(q.predicted, PredictedSign::kNegative);
  EXPECT_EQ(q.negative_votes, 1u);
  EXPECT_EQ(PredictionToJson(q)["predicted"], "negative");

  EXPECT_EQ(PredictEdgeSign(test::ToGraph(t), EntityPair::Of("n0", "n9")).predicted,
            PredictedSign::kUnknown);
  EXPECT_THROW(PredictEdgeSign(test::ToGraph(t), EntityPair::Of("n0", "n2")), ArgumentError);
}

TEST(BalanceOracle, ExhaustiveUpToFourNodes) {
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t graphs = 0, predictions = 0;
    EXPECT_EQ(test::ExhaustiveMismatches(n, &graphs, &predictions), 0u) << n;
    EXPECT_EQ(graphs, test::GraphCount(n));
  }
}

TEST(BalanceOracle, RandomSixNodeGraphs) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    const SignMatrix s = test::DecodeGraph(n, rng() % test::GraphCount(n));
    const auto want = test::OracleCensus(s);
    const auto got = ComputeTriadCensus(test::ToGraph(s));
    ASSERT_EQ(got, (TriadCensus{want[0], want[1], want[2], want[3]}));
  }
}

TEST(BalanceProperties, GlobalFlipSwapsCensus) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    SignMatrix s = test::DecodeGraph(n, rng() % test::GraphCount(n));
    const auto before = ComputeTriadCensus(test::ToGraph(s));
    for (auto& row : s) {
      for (int& v : row) v = -v;
    }
    const auto after = ComputeTriadCensus(test::ToGraph(s));
    ASSERT_EQ(after.ppp, before.nnn);
    ASSERT_EQ(after.nnn, before.ppp);
    ASSERT_EQ(after.ppn, before.pnn);
    ASSERT_EQ(after.pnn, before.ppn);
    if (before.total() > 0) {
      ASSERT_EQ(*BalanceIndex(after),
                static_cast<double>(before.nnn + before.ppn) / before.total());
    }
  }
}

TEST(BalanceProperties, InvariantUnderRelabeling) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 4;
    const SignMatrix s = test::DecodeGraph(n, rng() % test::GraphCount(n));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> names(n);
    // Node i is renamed so that the sorted order changes too.
    for (std::size_t i = 0; i < n; ++i) names[i] = "v" + std::to_string(perm[i]);
    const auto g = test::ToGraph(s);
    const auto h = test::ToGraph(s, names);
    ASSERT_EQ(ComputeTriadCensus(g), ComputeTriadCensus(h));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (s[a][b] != 0) continue;
        const auto p = PredictEdgeSign(g, EntityPair::Of(test::NodeName(a), test::NodeName(b)));
        const auto q = PredictEdgeSign(h, EntityPair::Of(names[a], names[b]));
        ASSERT_EQ(p.predicted, q.predicted);
        ASSERT_EQ(p.positive_votes, q.positive_votes);
        ASSERT_EQ(p.negative_votes, q.negative_votes);
      }
    }
  }
}

}  // namespace
}  // namespace signet
