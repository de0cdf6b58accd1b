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

// Client side of the three remote model capabilities: named entity
// recognition, entailment-based zero-shot classification and chat-style LLM
// completion. Every call goes through a RequestExecutor, which owns the
// live/record/replay switch, retries and the in-flight cap.

#ifndef SIGNET_GATEWAY_H_
#define SIGNET_GATEWAY_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "signet/fixture_store.h"
#include "signet/retry.h"
#include "signet/transport.h"

namespace signet {

enum class Capability { kNer, kZsc, kLlm };

/// "ner", "zsc" or "llm".
std::string_view CapabilityName(Capability capability);

enum class BackendMode { kLive, kRecord, kReplay };

std::string_view BackendModeName(BackendMode mode);
std::optional<BackendMode> ParseBackendMode(std::string_view text);

inline constexpr std::string_view kDefaultNerModel =
    "xlm-roberta-large-finetuned-conll03-english";
inline constexpr std::string_view kDefaultZscModel = "bart-large-mnli";
inline constexpr std::string_view kDefaultLlmModel = "gpt-4";

struct BackendConfig {
  std::string endpoint;
  std::string model_id;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;
  int max_in_flight = 4;
  BackendMode mode = BackendMode::kReplay;
  BackoffPolicy backoff;
  std::uint64_t jitter_seed = 0;

  /// Throws UsageError naming the offending field.
  void Validate(Capability capability) const;
};

/// Defaults for `capability`, with endpoint and model taken from
/// SIGNET_<CAP>_ENDPOINT / SIGNET_<CAP>_MODEL when set.
BackendConfig DefaultBackendConfig(Capability capability);

/// Digest identifying a request independent of key order and formatting:
/// SHA-256 over the canonical serialization of
/// {"capability": ..., "model": ..., "request": body}.
std::string CanonicalDigest(Capability capability, std::string_view model_id,
                            const nlohmann::json& body);

/// One entity mention. `start`/`end` are code-point offsets, half-open.
struct MentionResult {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;
  double score = 0.0;

  friend bool operator==(const MentionResult&, const MentionResult&) = default;
};

/// Candidate labels ordered by descending score; ties by label.
struct ZscResult {
  std::vector<std::string> labels;
  std::vector<double> scores;

  const std::string& top_label() const { return labels.front(); }
  double top_score() const { return scores.front(); }
  /// Score of `label`, or nullopt when it was not a candidate.
  std::optional<double> ScoreOf(std::string_view label) const;
};

enum class CompletionCondition { kComplete, kEmpty, kRefusal };

struct LlmResult {
  std::string text;
  std::string model_id;
  CompletionCondition condition = CompletionCondition::kComplete;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

/// Placeholder the zero-shot backend substitutes each candidate label into.
inline constexpr std::string_view kLabelPlaceholder = "{}";

/// Executes requests for one capability according to its BackendConfig.
///
///   live    transport only; retries retriable failures.
///   record  fixture hit returns the stored bytes without a network call;
///           a miss goes live and appends the response to the fixture.
///   replay  fixture only; a miss throws DeterminismError.
///
/// At most `max_in_flight` transport attempts run concurrently.
class RequestExecutor {
 public:
  struct Stats {
    std::size_t transport_attempts = 0;
    std::size_t retries = 0;
    std::size_t fixture_hits = 0;
  };

  RequestExecutor(Capability capability, BackendConfig config,
                  std::shared_ptr<Transport> transport,
                  std::shared_ptr<FixtureStore> fixtures,
                  Sleeper sleeper = RealSleeper());

  RequestExecutor(const RequestExecutor&) = delete;
  RequestExecutor& operator=(const RequestExecutor&) = delete;

  /// Returns the raw response body for `body`.
  std::string Execute(const nlohmann::json& body);

  Capability capability() const { return capability_; }
  const BackendConfig& config() const { return config_; }
  Stats stats() const;

 private:
  std::string CallWithRetries(const std::string& digest,
                              const std::string& payload);

  Capability capability_;
  BackendConfig config_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<FixtureStore> fixtures_;
  Sleeper sleeper_;
  std::unique_ptr<std::counting_semaphore<>> permits_;
  std::atomic<std::size_t> transport_attempts_{0};
  std::atomic<std::size_t> retries_{0};
  std::atomic<std::size_t> fixture_hits_{0};
};

class NerBackend {
 public:
  explicit NerBackend(std::shared_ptr<RequestExecutor> executor)
      : executor_(std::move(executor)) {}

  /// Mentions sorted by start offset. With `organizations_only` the response
  /// is post-filtered to organization labels (ORG / ORGANIZATION).
  std::vector<MentionResult> Recognize(std::string_view text,
                                       bool organizations_only = true) const;

  RequestExecutor& executor() const { return *executor_; }

 private:
  std::shared_ptr<RequestExecutor> executor_;
};

class ZscBackend {
 public:
  explicit ZscBackend(std::shared_ptr<RequestExecutor> executor)
      : executor_(std::move(executor)) {}

  /// `hypothesis_template` must contain kLabelPlaceholder exactly once.
  /// Single-label mode (the default) requires the scores to sum to 1.
  ZscResult Classify(std::string_view premise,
                     std::string_view hypothesis_template,
                     const std::vector<std::string>& candidate_labels,
                     bool multi_label = false) const;

  RequestExecutor& executor() const { return *executor_; }

 private:
  std::shared_ptr<RequestExecutor> executor_;
};

class LlmBackend {
 public:
  explicit LlmBackend(std::shared_ptr<RequestExecutor> executor)
      : executor_(std::move(executor)) {}

  LlmResult Complete(const std::vector<ChatMessage>& messages) const;

  RequestExecutor& executor() const { return *executor_; }

 private:
  std::shared_ptr<RequestExecutor> executor_;
};

/// Request bodies as sent on the wire.
nlohmann::json NerRequestBody(std::string_view text);
nlohmann::json ZscRequestBody(std::string_view premise,
                              std::string_view hypothesis_template,
                              const std::vector<std::string>& candidate_labels,
                              bool multi_label);
nlohmann::json LlmRequestBody(std::string_view model_id,
                              const std::vector<ChatMessage>& messages);

/// The three backends sharing one transport and one fixture store.
struct Gateway {
  std::shared_ptr<NerBackend> ner;
  std::shared_ptr<ZscBackend> zsc;
  std::shared_ptr<LlmBackend> llm;

  static Gateway Create(const BackendConfig& ner_config,
                        const BackendConfig& zsc_config,
                        const BackendConfig& llm_config,
                        std::shared_ptr<Transport> transport,
                        std::shared_ptr<FixtureStore> fixtures,
                        Sleeper sleeper = RealSleeper());
};

}  // namespace signet

#endif  // SIGNET_GATEWAY_H_
