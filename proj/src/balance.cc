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

#include "signet/balance.h"

#include <algorithm>
#include <set>

#include "signet/error.h"

namespace signet {

DiscretizedGraph::DiscretizedGraph(std::vector<std::string> nodes,
                                   std::map<EntityPair, int> signed_edges)
    : edges_(std::move(signed_edges)) {
  std::set<std::string> unique(nodes.begin(), nodes.end());
  nodes_.assign(unique.begin(), unique.end());
  for (const auto& [pair, sign] : edges_) {
    if (sign != 1 && sign != -1) {
      throw ArgumentError("edge " + pair.ToString() + " has sign " +
                          std::to_string(sign) + ", expected +1 or -1");
    }
    for (const auto* id : {&pair.a(), &pair.b()}) {
      if (!unique.count(*id)) {
        throw ArgumentError("edge endpoint '" + *id + "' is not a node");
      }
    }
    adjacency_[pair.a()][pair.b()] = sign;
    adjacency_[pair.b()][pair.a()] = sign;
  }
}

int DiscretizedGraph::Sign(const std::string& x, const std::string& y) const {
  auto it = adjacency_.find(x);
  if (it == adjacency_.end()) return 0;
  auto jt = it->second.find(y);
  return jt == it->second.end() ? 0 : jt->second;
}

const std::map<std::string, int>& DiscretizedGraph::Neighbors(
    const std::string& id) const {
  static const std::map<std::string, int> kNone;
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? kNone : it->second;
}

DiscretizedGraph Discretize(const NetworkSnapshot& snapshot, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ArgumentError("tau must lie in [0,1]");
  std::map<EntityPair, int> signs;
  for (const auto& e : snapshot.edges) {
    if (const int s = DiscretizeWeight(e.weight, tau); s != 0) signs.emplace(e.pair, s);
  }
  return DiscretizedGraph(snapshot.nodes, std::move(signs));
}

TriadCensus ComputeTriadCensus(const DiscretizedGraph& graph) {
  TriadCensus census;
  // Each triangle x < y < z is found once, from its smallest edge (x, y).
  for (const auto& [pair, s_xy] : graph.signed_edges()) {
    const auto& x_neighbors = graph.Neighbors(pair.a());
    for (auto it = x_neighbors.upper_bound(pair.b()); it != x_neighbors.end(); ++it) {
      const int s_yz = graph.Sign(pair.b(), it->first);
      if (s_yz == 0) continue;
      const int negatives = (s_xy < 0) + (it->second < 0) + (s_yz < 0);
      switch (negatives) {
        case 0: ++census.ppp; break;
        case 1: ++census.ppn; break;
        case 2: ++census.pnn; break;
        default: ++census.nnn; break;
      }
    }
  }
  return census;
}

std::optional<double> BalanceIndex(const TriadCensus& census) {
  if (census.total() == 0) return std::nullopt;
  return static_cast<double>(census.balanced()) / static_cast<double>(census.total());
}

std::string_view PredictedSignName(PredictedSign sign) {
  switch (sign) {
    case PredictedSign::kPositive: return "positive";
    case PredictedSign::kNegative: return "negative";
    case PredictedSign::kUnknown: return "unknown";
  }
  return "unknown";
}

EdgePrediction PredictEdgeSign(const DiscretizedGraph& graph,
                               const EntityPair& pair) {
  if (graph.HasEdge(pair)) {
    throw ArgumentError("pair " + pair.ToString() + " is already an edge");
  }
  EdgePrediction prediction{pair};
  const auto& a_neighbors = graph.Neighbors(pair.a());
  const auto& b_neighbors = graph.Neighbors(pair.b());
  for (const auto& [k, s_ak] : a_neighbors) {
    auto it = b_neighbors.find(k);
    if (it == b_neighbors.end()) continue;
    if (s_ak * it->second > 0) {
      ++prediction.positive_votes;
    } else {
      ++prediction.negative_votes;
    }
  }
  if (prediction.positive_votes > prediction.negative_votes) {
    prediction.predicted = PredictedSign::kPositive;
  } else if (prediction.negative_votes > prediction.positive_votes) {
    prediction.predicted = PredictedSign::kNegative;
  }
  return prediction;
}

nlohmann::json CensusToJson(const TriadCensus& census) {
  const auto index = BalanceIndex(census);
  return {{"triads",
           {{"+++", census.ppp}, {"++-", census.ppn}, {"+--", census.pnn},
            {"---", census.nnn}}},
          {"triangles", census.total()},
          {"balanced", census.balanced()},
          {"balance_index", index ? nlohmann::json(*index) : nlohmann::json(nullptr)},
          {"formulation", "strong"}};
}

nlohmann::json PredictionToJson(const EdgePrediction& prediction) {
  return {{"pair", {{"a", prediction.pair.a()}, {"b", prediction.pair.b()}}},
          {"predicted", std::string(PredictedSignName(prediction.predicted))},
          {"votes",
           {{"positive", prediction.positive_votes},
            {"negative", prediction.negative_votes}}}};
}

}  // namespace signet
