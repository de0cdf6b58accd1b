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

// Strong structural balance on sign-only graphs: a triangle is balanced iff
// the product of its three edge signs is +1.

#ifndef SIGNET_BALANCE_H_
#define SIGNET_BALANCE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "signet/network.h"
#include "signet/relations.h"

namespace signet {

class DiscretizedGraph {
 public:
  DiscretizedGraph() = default;

  /// Throws ArgumentError when a sign is not +1/-1 or an endpoint is not in
  /// `nodes`.
  DiscretizedGraph(std::vector<std::string> nodes,
                   std::map<EntityPair, int> signed_edges);

  /// Sorted, unique.
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::map<EntityPair, int>& signed_edges() const { return edges_; }

  /// +1, -1, or 0 when there is no edge.
  int Sign(const std::string& x, const std::string& y) const;
  bool HasEdge(const EntityPair& pair) const { return edges_.count(pair) > 0; }

  /// Neighbors of `id` with their edge signs, sorted by id.
  const std::map<std::string, int>& Neighbors(const std::string& id) const;

 private:
  std::vector<std::string> nodes_;
  std::map<EntityPair, int> edges_;
  std::map<std::string, std::map<std::string, int>> adjacency_;
};

/// Keeps an edge with sign(weight) iff |weight| >= tau and weight != 0.
/// Every snapshot node is kept. Throws ArgumentError when tau is outside
/// [0, 1].
DiscretizedGraph Discretize(const NetworkSnapshot& snapshot, double tau);

struct TriadCensus {
  std::size_t ppp = 0;  // +++
  std::size_t ppn = 0;  // ++-
  std::size_t pnn = 0;  // +--
  std::size_t nnn = 0;  // ---

  std::size_t total() const { return ppp + ppn + pnn + nnn; }
  std::size_t balanced() const { return ppp + pnn; }

  friend bool operator==(const TriadCensus&, const TriadCensus&) = default;
};

/// Counts every closed triangle once, by its sign multiset.
TriadCensus ComputeTriadCensus(const DiscretizedGraph& graph);

/// Fraction of balanced triangles; nullopt when there are none.
std::optional<double> BalanceIndex(const TriadCensus& census);

enum class PredictedSign { kPositive, kNegative, kUnknown };

std::string_view PredictedSignName(PredictedSign sign);

struct EdgePrediction {
  EntityPair pair;
  PredictedSign predicted = PredictedSign::kUnknown;
  std::size_t positive_votes = 0;
  std::size_t negative_votes = 0;

  friend bool operator==(const EdgePrediction&, const EdgePrediction&) = default;
};

/// Each common neighbor k votes sign(a,k) * sign(b,k); the majority wins and
/// a tie or no common neighbor gives kUnknown. Throws ArgumentError when the
/// pair is already an edge.
EdgePrediction PredictEdgeSign(const DiscretizedGraph& graph,
                               const EntityPair& pair);

nlohmann::json CensusToJson(const TriadCensus& census);
nlohmann::json PredictionToJson(const EdgePrediction& prediction);

}  // namespace signet

#endif  // SIGNET_BALANCE_H_
