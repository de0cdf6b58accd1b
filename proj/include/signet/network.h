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

// Signed business networks: observations aggregated into undirected edges
// with weights in [-1, 1], grouped into time windows.
//
// Edge weight for a pair with observations (label_i, score_i):
//
//   weight = sum(score_i^2 * sign_i) / sum(score_i)
//
// over non-unknown observations, where sign is +1, -1 or 0 for positive,
// negative and neutral. A single observation yields sign * score. Neutral
// evidence only enlarges the denominator. Weights and score sums are rounded
// to six decimals so that the JSON form is lossless.

#ifndef SIGNET_NETWORK_H_
#define SIGNET_NETWORK_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "signet/relations.h"
#include "signet/time.h"

namespace signet {

struct LabelTallies {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t unknown = 0;

  std::size_t total() const { return positive + negative + neutral + unknown; }
  std::size_t& operator[](RelationLabel label);
  std::size_t operator[](RelationLabel label) const;

  friend bool operator==(const LabelTallies&, const LabelTallies&) = default;
};

struct SignedEdge {
  EntityPair pair;
  double weight = 0.0;
  LabelTallies tallies;
  /// Sum of scores of non-unknown observations.
  double score_sum = 0.0;
  /// Sorted ObservationId values, unknown observations included.
  std::vector<std::string> observation_ids;

  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

/// +1, -1 or 0. Unknown maps to 0 as well but never reaches a weight.
int LabelSign(RelationLabel label);

/// Returns nullopt when `observations` is empty or every label is unknown.
/// Throws ArgumentError when the observations span more than one pair.
std::optional<SignedEdge> AggregateEdge(
    const std::vector<RelationObservation>& observations);

struct NetworkSnapshot {
  TimeWindow window;
  /// Sorted, unique.
  std::vector<std::string> nodes;
  /// Sorted by pair, one per pair.
  std::vector<SignedEdge> edges;

  const SignedEdge* Find(const EntityPair& pair) const;

  friend bool operator==(const NetworkSnapshot&, const NetworkSnapshot&) = default;
};

struct SnapshotOptions {
  /// Keep endpoints whose pairs only carry unknown observations as nodes.
  bool include_isolated = false;
};

/// Throws ArgumentError when window.end <= window.start.
NetworkSnapshot BuildSnapshot(const std::vector<RelationObservation>& observations,
                              const TimeWindow& window,
                              const SnapshotOptions& options = {});

/// A window covering every observation, [earliest, latest + 1s).
std::optional<TimeWindow> CoveringWindow(
    const std::vector<RelationObservation>& observations);

struct TemporalNetwork {
  std::vector<NetworkSnapshot> snapshots;
  Duration window_length{0};
  Duration stride{0};
};

/// Windows start at the earliest observation time floored to a multiple of
/// `stride` since the Unix epoch, and continue until one covers the latest
/// observation. Empty windows in between are kept. Throws ArgumentError on a
/// non-positive length or stride.
TemporalNetwork BuildTemporal(const std::vector<RelationObservation>& observations,
                              Duration window_length, Duration stride,
                              const SnapshotOptions& options = {});

/// sign(w) when |w| >= tau and w != 0, else 0.
int DiscretizeWeight(double weight, double tau);

struct SignFlip {
  EntityPair pair;
  int before = 0;
  int after = 0;

  friend bool operator==(const SignFlip&, const SignFlip&) = default;
};

struct WeightDelta {
  EntityPair pair;
  double before = 0.0;
  double after = 0.0;

  friend bool operator==(const WeightDelta&, const WeightDelta&) = default;
};

struct SnapshotDiff {
  double tau = 0.0;
  std::vector<SignedEdge> added;
  std::vector<SignedEdge> removed;
  /// Pairs in both snapshots whose discretized sign differs.
  std::vector<SignFlip> sign_flips;
  /// Pairs in both snapshots whose weight differs.
  std::vector<WeightDelta> weight_deltas;
  /// After-state of every edge present in both snapshots whose content
  /// differs in any way, so that ApplyDiff is lossless.
  std::vector<SignedEdge> updated;

  bool empty() const {
    return added.empty() && removed.empty() && sign_flips.empty() &&
           weight_deltas.empty() && updated.empty();
  }
};

/// Throws ArgumentError when tau is outside [0, 1].
SnapshotDiff DiffSnapshots(const NetworkSnapshot& before,
                           const NetworkSnapshot& after, double tau);

/// Edges of `before` with `diff` applied, sorted by pair.
std::vector<SignedEdge> ApplyDiff(const NetworkSnapshot& before,
                                  const SnapshotDiff& diff);

nlohmann::json DiffToJson(const SnapshotDiff& diff);

enum class ExportFormat { kJson, kDot, kGraphMl };

/// Throws ArgumentError for anything but "json", "dot" or "graphml".
ExportFormat ParseExportFormat(std::string_view name);

nlohmann::json SnapshotToJson(const NetworkSnapshot& snapshot);
/// Throws ParseError naming the offending field.
NetworkSnapshot SnapshotFromJson(const nlohmann::json& j);

/// Byte-deterministic rendering. JSON output is canonical and newline
/// terminated.
std::string ExportSnapshot(const NetworkSnapshot& snapshot, ExportFormat format);

bool StructurallyEqual(const NetworkSnapshot& x, const NetworkSnapshot& y);

}  // namespace signet

#endif  // SIGNET_NETWORK_H_
