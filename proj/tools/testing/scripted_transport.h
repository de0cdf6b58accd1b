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

// A Transport that answers from a hand-written script instead of a model
// server. Used to author fixtures and to exercise live/record code paths in
// tests without a network.
//
// Script format (JSON):
//
//   {
//     "ner": {"<text>": [{"text": "Apple", "label": "ORG", "score": 0.99}]},
//     "zsc": [{"premise": "...", "hypothesis_template": "... {}.",
//              "scores": {"<label>": 0.9, ...}}],
//     "llm": [{"contains": "<substring of the last message>", "text": "..."}]
//   }
//
// NER offsets are computed by locating each surface after the previous one.
// LLM entries are tried in order; the first whose substring occurs wins.

#ifndef SIGNET_TESTING_SCRIPTED_TRANSPORT_H_
#define SIGNET_TESTING_SCRIPTED_TRANSPORT_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "signet/transport.h"

namespace signet::testing {

class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(nlohmann::json script);
  static std::shared_ptr<ScriptedTransport> FromFile(
      const std::filesystem::path& path);

  std::string Post(const std::string& endpoint, const std::string& body,
                   std::chrono::milliseconds timeout) override;

  /// The next `count` calls fail with a TransportError before consulting the
  /// script.
  void InjectFailures(int count, bool retriable, int status = 503);

  std::size_t calls() const { return calls_.load(); }
  /// Calls that reached the script, per capability ("ner", "zsc", "llm").
  std::map<std::string, std::size_t> answered() const;
  /// Highest number of calls that were in progress at once.
  std::size_t peak_in_flight() const { return peak_.load(); }

  /// Delay applied inside every call, to make overlap observable.
  void set_latency(std::chrono::milliseconds latency) { latency_ = latency; }

 private:
  std::string AnswerNer(const nlohmann::json& request) const;
  std::string AnswerZsc(const nlohmann::json& request) const;
  std::string AnswerLlm(const nlohmann::json& request) const;

  nlohmann::json script_;
  mutable std::mutex mu_;
  int pending_failures_ = 0;
  bool failure_retriable_ = true;
  int failure_status_ = 503;
  std::map<std::string, std::size_t> answered_;
  std::atomic<std::size_t> calls_{0};
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> peak_{0};
  std::chrono::milliseconds latency_{0};
};

}  // namespace signet::testing

#endif  // SIGNET_TESTING_SCRIPTED_TRANSPORT_H_
