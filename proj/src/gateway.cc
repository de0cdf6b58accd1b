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

#include "signet/gateway.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <tuple>

#include "signet/encoding.h"
#include "signet/error.h"

namespace signet {
namespace {

class PermitGuard {
 public:
  explicit PermitGuard(std::counting_semaphore<>& permits)
      : permits_(permits) {
    permits_.acquire();
  }
  ~PermitGuard() { permits_.release(); }

  PermitGuard(const PermitGuard&) = delete;
  PermitGuard& operator=(const PermitGuard&) = delete;

 private:
  std::counting_semaphore<>& permits_;
};

nlohmann::json ParseBody(Capability capability, const std::string& body) {
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string(CapabilityName(capability)) +
                        " response is not JSON: " + e.what());
  }
}

[[noreturn]] void Malformed(Capability capability, const std::string& what) {
  throw ProtocolError(std::string(CapabilityName(capability)) +
                      " response malformed: " + what);
}

bool IsOrganizationLabel(std::string_view label) {
  std::string upper(label);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  // Aggregated token-classification outputs sometimes keep the BIO prefix.
  if (upper.size() > 2 && (upper[0] == 'B' || upper[0] == 'I') &&
      upper[1] == '-') {
    upper = upper.substr(2);
  }
  return upper == "ORG" || upper == "ORGANIZATION";
}

std::size_t CountOccurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

std::uint64_t SeedFromDigest(const std::string& digest, std::uint64_t salt) {
  return std::strtoull(digest.substr(0, 16).c_str(), nullptr, 16) ^ salt;
}

}  // namespace

std::string_view CapabilityName(Capability capability) {
  switch (capability) {
    case Capability::kNer:
      return "ner";
    case Capability::kZsc:
      return "zsc";
    case Capability::kLlm:
      return "llm";
  }
  return "unknown";
}

std::string_view BackendModeName(BackendMode mode) {
  switch (mode) {
    case BackendMode::kLive:
      return "live";
    case BackendMode::kRecord:
      return "record";
    case BackendMode::kReplay:
      return "replay";
  }
  return "unknown";
}

std::optional<BackendMode> ParseBackendMode(std::string_view text) {
  if (text == "live") return BackendMode::kLive;
  if (text == "record") return BackendMode::kRecord;
  if (text == "replay") return BackendMode::kReplay;
  return std::nullopt;
}

void BackendConfig::Validate(Capability capability) const {
  const std::string prefix(CapabilityName(capability));
  if (max_retries < 0) {
    throw UsageError(prefix + ".max_retries", "must be >= 0");
  }
  if (max_in_flight < 1) {
    throw UsageError(prefix + ".max_in_flight", "must be >= 1");
  }
  if (timeout.count() <= 0) {
    throw UsageError(prefix + ".timeout_ms", "must be > 0");
  }
  if (model_id.empty()) throw UsageError(prefix + ".model", "must be set");
  if (mode != BackendMode::kReplay && endpoint.empty()) {
    throw UsageError(prefix + ".endpoint",
                     "required in " + std::string(BackendModeName(mode)) +
                         " mode");
  }
}

BackendConfig DefaultBackendConfig(Capability capability) {
  BackendConfig config;
  switch (capability) {
    case Capability::kNer:
      config.model_id = kDefaultNerModel;
      break;
    case Capability::kZsc:
      config.model_id = kDefaultZscModel;
      break;
    case Capability::kLlm:
      config.model_id = kDefaultLlmModel;
      break;
  }
  std::string cap(CapabilityName(capability));
  for (char& c : cap) c = static_cast<char>(std::toupper(c));
  if (const char* endpoint = std::getenv(("SIGNET_" + cap + "_ENDPOINT").c_str())) {
    config.endpoint = endpoint;
  }
  if (const char* model = std::getenv(("SIGNET_" + cap + "_MODEL").c_str())) {
    config.model_id = model;
  }
  return config;
}

std::string CanonicalDigest(Capability capability, std::string_view model_id,
                            const nlohmann::json& body) {
  const nlohmann::json envelope = {
      {"capability", std::string(CapabilityName(capability))},
      {"model", std::string(model_id)},
      {"request", body}};
  return Sha256Hex(CanonicalJson(envelope));
}

std::optional<double> ZscResult::ScoreOf(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return scores[i];
  }
  return std::nullopt;
}

RequestExecutor::RequestExecutor(Capability capability, BackendConfig config,
                                 std::shared_ptr<Transport> transport,
                                 std::shared_ptr<FixtureStore> fixtures,
                                 Sleeper sleeper)
    : capability_(capability),
      config_(std::move(config)),
      transport_(std::move(transport)),
      fixtures_(std::move(fixtures)),
      sleeper_(std::move(sleeper)) {
  if (config_.max_retries < 0 || config_.max_in_flight < 1) {
    throw ArgumentError("max_retries must be >= 0 and max_in_flight >= 1");
  }
  if (config_.mode != BackendMode::kLive && !fixtures_) {
    throw ArgumentError(std::string(BackendModeName(config_.mode)) +
                        " mode requires a fixture store");
  }
  permits_ = std::make_unique<std::counting_semaphore<>>(config_.max_in_flight);
}

std::string RequestExecutor::Execute(const nlohmann::json& body) {
  const std::string digest =
      CanonicalDigest(capability_, config_.model_id, body);
  switch (config_.mode) {
    case BackendMode::kReplay: {
      if (auto hit = fixtures_->Lookup(digest)) {
        ++fixture_hits_;
        return *hit;
      }
      throw DeterminismError(digest, "no recorded " +
                                         std::string(CapabilityName(capability_)) +
                                         " response in replay mode");
    }
    case BackendMode::kRecord: {
      if (auto hit = fixtures_->Lookup(digest)) {
        ++fixture_hits_;
        return *hit;
      }
      std::string response = CallWithRetries(digest, body.dump());
      fixtures_->Append(digest, response);
      return response;
    }
    case BackendMode::kLive:
      return CallWithRetries(digest, body.dump());
  }
  throw ArgumentError("unknown backend mode");
}

std::string RequestExecutor::CallWithRetries(const std::string& digest,
                                             const std::string& payload) {
  const std::string cap(CapabilityName(capability_));
  if (!transport_) throw BackendError(cap, "no transport configured");
  FullJitterBackoff backoff(config_.backoff,
                            SeedFromDigest(digest, config_.jitter_seed));
  for (int attempt = 0;; ++attempt) {
    try {
      PermitGuard permit(*permits_);
      ++transport_attempts_;
      return transport_->Post(config_.endpoint, payload, config_.timeout);
    } catch (const TransportError& e) {
      if (!e.retriable()) throw BackendError(cap, e.what());
      if (attempt >= config_.max_retries) {
        throw BackendError(cap, "giving up after " +
                                    std::to_string(config_.max_retries) +
                                    " retries: " + e.what());
      }
    }
    ++retries_;
    sleeper_(backoff.Delay(attempt));
  }
}

RequestExecutor::Stats RequestExecutor::stats() const {
  return {transport_attempts_.load(), retries_.load(), fixture_hits_.load()};
}

nlohmann::json NerRequestBody(std::string_view text) {
  return {{"text", std::string(text)}};
}

nlohmann::json ZscRequestBody(std::string_view premise,
                              std::string_view hypothesis_template,
                              const std::vector<std::string>& candidate_labels,
                              bool multi_label) {
  return {{"premise", std::string(premise)},
          {"hypothesis_template", std::string(hypothesis_template)},
          {"candidate_labels", candidate_labels},
          {"multi_label", multi_label}};
}

nlohmann::json LlmRequestBody(std::string_view model_id,
                              const std::vector<ChatMessage>& messages) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& m : messages) {
    list.push_back({{"role", m.role}, {"content", m.content}});
  }
  return {{"model", std::string(model_id)}, {"messages", std::move(list)}};
}

std::vector<MentionResult> NerBackend::Recognize(
    std::string_view text, bool organizations_only) const {
  if (TrimWhitespace(text).empty()) {
    throw ArgumentError("ner: text must be non-empty");
  }
  constexpr Capability kCap = Capability::kNer;
  const nlohmann::json response =
      ParseBody(kCap, executor_->Execute(NerRequestBody(text)));
  if (!response.is_object() || !response.contains("mentions") ||
      !response["mentions"].is_array()) {
    Malformed(kCap, "missing 'mentions' array");
  }
  const std::size_t length = Utf8Length(text);
  std::vector<MentionResult> mentions;
  for (const auto& m : response["mentions"]) {
    if (!m.is_object() || !m.contains("text") || !m["text"].is_string() ||
        !m.contains("start") || !m["start"].is_number_integer() ||
        !m.contains("end") || !m["end"].is_number_integer() ||
        !m.contains("label") || !m["label"].is_string() ||
        !m.contains("score") || !m["score"].is_number()) {
      Malformed(kCap, "mention lacks text/start/end/label/score");
    }
    const auto start = m["start"].get<std::int64_t>();
    const auto end = m["end"].get<std::int64_t>();
    if (start < 0 || start >= end || static_cast<std::size_t>(end) > length) {
      Malformed(kCap, "span [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") out of range");
    }
    MentionResult mention;
    mention.surface = m["text"].get<std::string>();
    mention.start = static_cast<std::size_t>(start);
    mention.end = static_cast<std::size_t>(end);
    mention.label = m["label"].get<std::string>();
    mention.score = m["score"].get<double>();
    if (!(mention.score >= 0.0 && mention.score <= 1.0)) {
      Malformed(kCap, "score outside [0,1]");
    }
    const std::size_t byte_start = *Utf8ByteOffset(text, mention.start);
    const std::size_t byte_end = *Utf8ByteOffset(text, mention.end);
    if (text.substr(byte_start, byte_end - byte_start) != mention.surface) {
      Malformed(kCap, "span does not match surface '" + mention.surface + "'");
    }
    if (organizations_only && !IsOrganizationLabel(mention.label)) continue;
    mentions.push_back(std::move(mention));
  }
  std::stable_sort(mentions.begin(), mentions.end(),
                   [](const MentionResult& a, const MentionResult& b) {
                     return std::tie(a.start, a.end) < std::tie(b.start, b.end);
                   });
  return mentions;
}

ZscResult ZscBackend::Classify(std::string_view premise,
                               std::string_view hypothesis_template,
                               const std::vector<std::string>& candidate_labels,
                               bool multi_label) const {
  if (candidate_labels.empty()) {
    throw ArgumentError("zsc: candidate_labels must be non-empty");
  }
  if (CountOccurrences(hypothesis_template, kLabelPlaceholder) != 1) {
    throw ArgumentError("zsc: hypothesis template needs exactly one '{}'");
  }
  const std::set<std::string> candidates(candidate_labels.begin(),
                                         candidate_labels.end());
  if (candidates.size() != candidate_labels.size()) {
    throw ArgumentError("zsc: duplicate candidate label");
  }

  constexpr Capability kCap = Capability::kZsc;
  const nlohmann::json response = ParseBody(
      kCap, executor_->Execute(ZscRequestBody(premise, hypothesis_template,
                                              candidate_labels, multi_label)));
  if (!response.is_object() || !response.contains("labels") ||
      !response["labels"].is_array() || !response.contains("scores") ||
      !response["scores"].is_array()) {
    Malformed(kCap, "missing 'labels'/'scores' arrays");
  }
  const auto& labels = response["labels"];
  const auto& scores = response["scores"];
  if (labels.size() != scores.size() || labels.empty()) {
    Malformed(kCap, "labels and scores differ in length or are empty");
  }
  std::vector<std::pair<std::string, double>> ranked;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string() || !scores[i].is_number()) {
      Malformed(kCap, "label/score of wrong type");
    }
    const std::string label = labels[i].get<std::string>();
    const double score = scores[i].get<double>();
    if (!(score >= 0.0 && score <= 1.0)) Malformed(kCap, "score outside [0,1]");
    if (candidates.count(label) == 0 || !seen.insert(label).second) {
      Malformed(kCap, "unexpected or repeated label '" + label + "'");
    }
    ranked.emplace_back(label, score);
  }
  if (seen.size() != candidates.size()) {
    Malformed(kCap, "response does not score every candidate label");
  }
  if (!multi_label) {
    double sum = 0.0;
    for (const auto& [label, score] : ranked) sum += score;
    if (std::abs(sum - 1.0) > 1e-6) {
      Malformed(kCap, "single-label scores do not sum to 1");
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  ZscResult result;
  for (auto& [label, score] : ranked) {
    result.labels.push_back(std::move(label));
    result.scores.push_back(score);
  }
  return result;
}

LlmResult LlmBackend::Complete(const std::vector<ChatMessage>& messages) const {
  if (messages.empty()) throw ArgumentError("llm: prompt must be non-empty");
  constexpr Capability kCap = Capability::kLlm;
  const nlohmann::json response = ParseBody(
      kCap, executor_->Execute(
                LlmRequestBody(executor_->config().model_id, messages)));
  if (!response.is_object() || !response.contains("text") ||
      !response["text"].is_string()) {
    Malformed(kCap, "missing 'text' string");
  }
  LlmResult result;
  result.text = response["text"].get<std::string>();
  if (response.contains("model") && response["model"].is_string()) {
    result.model_id = response["model"].get<std::string>();
  } else {
    Malformed(kCap, "missing 'model' string");
  }
  if (response.contains("refusal") && !response["refusal"].is_null() &&
      response["refusal"] != false) {
    result.condition = CompletionCondition::kRefusal;
  } else if (result.text.empty()) {
    result.condition = CompletionCondition::kEmpty;
  }
  return result;
}

Gateway Gateway::Create(const BackendConfig& ner_config,
                        const BackendConfig& zsc_config,
                        const BackendConfig& llm_config,
                        std::shared_ptr<Transport> transport,
                        std::shared_ptr<FixtureStore> fixtures,
                        Sleeper sleeper) {
  Gateway gateway;
  gateway.ner = std::make_shared<NerBackend>(std::make_shared<RequestExecutor>(
      Capability::kNer, ner_config, transport, fixtures, sleeper));
  gateway.zsc = std::make_shared<ZscBackend>(std::make_shared<RequestExecutor>(
      Capability::kZsc, zsc_config, transport, fixtures, sleeper));
  gateway.llm = std::make_shared<LlmBackend>(std::make_shared<RequestExecutor>(
      Capability::kLlm, llm_config, transport, fixtures, sleeper));
  return gateway;
}

}  // namespace signet
