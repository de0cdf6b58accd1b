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

// The instruction-tuned LLM pipeline: one prompt per headline asking for the
// organizations and a sign with a rationale for every pair, a parser for the
// answers, and per-pair summaries across documents.
//
// The prompt requests one machine-readable line per pair,
//
//   REL: <A> | <B> | <class> | <rationale>
//
// but models frequently answer in prose ("Apple and Facebook: The
// relationship appears to be negative, as ..."), so the parser falls back to
// a prose reader when no REL: line is present.

#ifndef SIGNET_EXPLANATION_H_
#define SIGNET_EXPLANATION_H_

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "signet/batch.h"
#include "signet/entities.h"
#include "signet/gateway.h"
#include "signet/ingestion.h"
#include "signet/relations.h"

namespace signet {

/// Bumped whenever the prompt text changes, which invalidates fixtures.
inline constexpr std::string_view kRelationPromptVersion = "relations-v1";
inline constexpr std::string_view kSummaryPromptVersion = "summary-v1";

/// Throws ArgumentError when `classes` is empty or the headline is blank.
std::vector<ChatMessage> BuildRelationPrompt(
    const NewsItem& item, const std::vector<RelationLabel>& classes,
    TextFields fields = TextFields::kHeadline);

/// One strict-format line, as the prompt asks the model to write it.
std::string FormatRelLine(std::string_view a, std::string_view b,
                          RelationLabel label, std::string_view rationale);

struct PairExplanation {
  EntityPair pair;
  RelationLabel label = RelationLabel::kUnknown;
  std::string rationale;
  std::string doc_id;
  /// Aligned with (pair.a, pair.b).
  std::pair<std::string, std::string> display_names;
  std::pair<bool, bool> resolved{true, true};

  bool HasUnresolved() const { return !resolved.first || !resolved.second; }

  friend bool operator==(const PairExplanation&, const PairExplanation&) = default;
};

struct ParseDiagnostic {
  std::string doc_id;
  std::string message;
  std::string raw;
};

struct ParsedRelations {
  std::vector<PairExplanation> explanations;
  std::vector<ParseDiagnostic> diagnostics;
  bool used_fallback = false;
};

/// Never throws on model output: unusable segments become diagnostics, and a
/// completion that yields nothing keeps its raw text in a diagnostic.
ParsedRelations ParseLlmRelations(std::string_view completion,
                                  const NewsItem& item,
                                  const AliasTable& table);

nlohmann::json ExplanationToJson(const PairExplanation& explanation);
void WriteExplanations(const std::vector<PairExplanation>& explanations,
                       std::ostream& out);

/// Confidence given to LLM observations, which carry no calibrated score.
/// Unknown explanations always map to 0.
struct ScorePolicy {
  double confidence = 1.0;
};

/// One observation per explanation, method=llm, timestamps from `corpus`.
std::vector<RelationObservation> LlmObservations(
    const std::vector<PairExplanation>& explanations, const Corpus& corpus,
    const ScorePolicy& policy = {});

struct ExplanationSummary {
  EntityPair pair;
  std::string summary;
  std::size_t observation_count = 0;
  std::vector<std::string> doc_ids;
};

nlohmann::json SummaryToJson(const ExplanationSummary& summary);
void WriteSummaries(const std::vector<ExplanationSummary>& summaries,
                    std::ostream& out);

/// Rationales ordered by (published_at, doc_id).
std::vector<ChatMessage> BuildSummaryPrompt(
    const EntityPair& pair, const std::vector<PairExplanation>& explanations,
    const Corpus& corpus);

/// Throws ArgumentError when `explanations` is empty or mentions another
/// pair.
ExplanationSummary SummarizePair(const EntityPair& pair,
                                 const std::vector<PairExplanation>& explanations,
                                 const Corpus& corpus, const LlmBackend& llm);

struct LlmPipelineOptions {
  ClassSet classes = ClassSet::kFour;
  TextFields text = TextFields::kHeadline;
  ScorePolicy score;
  bool summaries = false;
  /// When false, explanations touching an unresolved surface are kept in
  /// the explanation list but produce no observation or summary.
  bool include_unresolved = true;
  int workers = 1;
  FailurePolicy on_failure = FailurePolicy::kFailFast;
};

struct LlmPipelineResult {
  std::vector<PairExplanation> explanations;
  std::vector<RelationObservation> observations;
  std::vector<ExplanationSummary> summaries;
  std::vector<ParseDiagnostic> diagnostics;
  std::vector<ItemFailure> failures;
};

/// `corpus` should already be stock-filtered. Output follows corpus order,
/// then the order pairs appear in each completion; summaries follow pair
/// order.
LlmPipelineResult RunLlmPipeline(const Corpus& corpus, const AliasTable& table,
                                 const LlmBackend& llm,
                                 const LlmPipelineOptions& options = {});

}  // namespace signet

#endif  // SIGNET_EXPLANATION_H_
