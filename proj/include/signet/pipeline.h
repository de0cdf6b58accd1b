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

// End-to-end runs: configuration, orchestration of both extraction
// pipelines, network construction and the run report.

#ifndef SIGNET_PIPELINE_H_
#define SIGNET_PIPELINE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "signet/batch.h"
#include "signet/explanation.h"
#include "signet/gateway.h"
#include "signet/ingestion.h"
#include "signet/network.h"
#include "signet/relations.h"
#include "signet/retry.h"
#include "signet/transport.h"

namespace signet {

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path alias_table;
  std::filesystem::path fixtures;
  std::filesystem::path out_dir;

  BackendMode mode = BackendMode::kReplay;
  BackendConfig ner = DefaultBackendConfig(Capability::kNer);
  BackendConfig zsc = DefaultBackendConfig(Capability::kZsc);
  BackendConfig llm = DefaultBackendConfig(Capability::kLlm);

  bool run_zsc = true;
  bool run_llm = true;
  bool stock_filter = true;
  double stock_threshold = 0.5;
  ClassSet classes = ClassSet::kThree;
  bool context = false;
  PairingMode pairing = PairingMode::kAll;
  bool include_unresolved = true;
  TextFields text = TextFields::kHeadline;
  double llm_confidence = 1.0;
  bool summaries = true;

  Duration window{30 * 86400};
  Duration stride{30 * 86400};
  double tau = 0.1;
  bool include_isolated = false;
  /// Which extraction methods feed the network.
  std::vector<ExtractionMethod> network_methods = {ExtractionMethod::kZsc,
                                                   ExtractionMethod::kLlm};
  std::optional<Timestamp> event_date;

  int workers = 1;
  OnError on_parse_error = OnError::kFail;
  FailurePolicy on_failure = FailurePolicy::kFailFast;

  /// Sets one key. Relative paths resolve against `base_dir`. Throws
  /// UsageError naming the key on an unknown key or a bad value.
  void Set(const std::string& key, const std::string& value,
           const std::filesystem::path& base_dir);

  /// Throws UsageError naming the first invalid field.
  void Validate() const;

  /// Canonical form of every setting that affects outputs; the output
  /// directory is excluded.
  nlohmann::json ToJson() const;
  std::string Digest() const;
};

/// Parses `key = value` lines; `#` starts a comment. Throws UsageError on a
/// malformed line and IoError when the file cannot be read.
std::vector<std::pair<std::string, std::string>> ParseConfigText(
    const std::string& text);

/// Defaults, then the file at `path`, whose relative paths resolve against
/// its directory.
RunConfig LoadRunConfig(const std::filesystem::path& path);

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct RunReport {
  std::string config_digest;
  BackendMode mode = BackendMode::kReplay;
  std::map<std::string, std::size_t> counts;
  std::vector<ItemFailure> failures;
  std::vector<StageTiming> timings;
  int exit_code = 0;

  nlohmann::json ToJson() const;
};

struct RunArtifacts {
  Corpus corpus;
  FilterResult filter;
  std::vector<RelationObservation> observations;
  LlmPipelineResult llm;
  NetworkSnapshot snapshot;
  TemporalNetwork temporal;
  std::optional<std::pair<NetworkSnapshot, NetworkSnapshot>> split;
  std::optional<SnapshotDiff> diff;
};

struct RunEnvironment {
  /// Defaults to MakeHttpTransport().
  std::shared_ptr<Transport> transport;
  Sleeper sleeper = RealSleeper();
};

/// Everything a run needs besides the configuration: fixtures opened per
/// mode, and a gateway over them.
struct RunContext {
  std::shared_ptr<FixtureStore> fixtures;
  Gateway gateway;
};

/// Opens the fixture store (read-only in replay, appendable in record) and
/// builds the gateway. `config` must be valid.
RunContext OpenRunContext(const RunConfig& config, const RunEnvironment& env);

/// Observations whose method feeds the network under `config`.
std::vector<RelationObservation> NetworkObservations(
    const RunConfig& config, const std::vector<RelationObservation>& all);

/// Before and after windows of length config.window around the event date.
std::pair<TimeWindow, TimeWindow> EventWindows(Timestamp event, Duration length);

/// Runs every enabled stage and writes the outputs under config.out_dir:
/// observations.jsonl, explanations.jsonl, summaries.jsonl,
/// diagnostics.jsonl, snapshot.{json,dot,graphml}, snapshots.jsonl,
/// before.json/after.json/diff.json when an event date is set, and
/// report.json. Fatal errors propagate; item failures under the skip policy
/// set exit code 2.
RunReport RunPipeline(const RunConfig& config, const RunEnvironment& env = {},
                      RunArtifacts* artifacts = nullptr);

/// RunPipeline in record mode with fail-fast, so an unreachable backend
/// aborts the run with the capability named in the error.
RunReport RecordPipeline(RunConfig config, const RunEnvironment& env = {},
                         RunArtifacts* artifacts = nullptr);

/// Writes `content` to `path`, creating parent directories.
void WriteFile(const std::filesystem::path& path, const std::string& content);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace signet

#endif  // SIGNET_PIPELINE_H_
