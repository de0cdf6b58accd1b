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

// Relation extraction with an entailment classifier. For every document that
// mentions at least two entities, each unordered pair is classified by
// instantiating a hypothesis template once per relation class.

#ifndef SIGNET_RELATIONS_H_
#define SIGNET_RELATIONS_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
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
#include "signet/time.h"

namespace signet {

/// Unordered pair of distinct entity ids, stored with a() < b().
class EntityPair {
 public:
  /// Throws ArgumentError when x == y.
  static EntityPair Of(std::string x, std::string y);

  const std::string& a() const { return a_; }
  const std::string& b() const { return b_; }
  bool Contains(std::string_view id) const { return a_ == id || b_ == id; }
  std::string ToString() const { return a_ + "," + b_; }

  friend auto operator<=>(const EntityPair&, const EntityPair&) = default;
  friend bool operator==(const EntityPair&, const EntityPair&) = default;

 private:
  EntityPair(std::string a, std::string b) : a_(std::move(a)), b_(std::move(b)) {}

  std::string a_;
  std::string b_;
};

enum class RelationLabel { kPositive, kNegative, kNeutral, kUnknown };

/// "positive", "negative", "neutral" or "unknown".
std::string_view LabelName(RelationLabel label);
/// Case-insensitive inverse of LabelName.
std::optional<RelationLabel> ParseLabel(std::string_view text);

enum class ClassSet { kThree, kFour };

/// Class declaration order: positive, negative, neutral[, unknown].
std::vector<RelationLabel> ClassLabels(ClassSet classes);

/// Sentence with the placeholders {A}, {B} and {CLASS}, each exactly once.
class HypothesisTemplate {
 public:
  static constexpr std::string_view kDefault =
      "the relationship between {A} and {B} is {CLASS}.";

  HypothesisTemplate() : HypothesisTemplate(std::string(kDefault)) {}
  /// Throws ArgumentError when a placeholder is missing or repeated.
  explicit HypothesisTemplate(std::string text);

  const std::string& text() const { return text_; }

  /// Fills {A} and {B}; {CLASS} becomes the zero-shot label placeholder.
  std::string Instantiate(std::string_view a, std::string_view b) const;

 private:
  std::string text_;
};

struct ContextTag {
  std::string label;
  double score = 0.0;

  friend bool operator==(const ContextTag&, const ContextTag&) = default;
};

enum class ExtractionMethod { kZsc, kLlm };

std::string_view MethodName(ExtractionMethod method);

struct RelationObservation {
  EntityPair pair;
  RelationLabel label = RelationLabel::kUnknown;
  double score = 0.0;
  std::string doc_id;
  Timestamp published_at;
  std::optional<ContextTag> context;
  ExtractionMethod method = ExtractionMethod::kZsc;
  /// Surfaces as mentioned in the document, aligned with (pair.a, pair.b).
  std::pair<std::string, std::string> display_names;

  friend bool operator==(const RelationObservation&,
                         const RelationObservation&) = default;
};

/// Stable provenance id: 16 hex digits over (doc_id, pair, method).
std::string ObservationId(const RelationObservation& observation);

nlohmann::json ObservationToJson(const RelationObservation& observation);
/// Throws ParseError naming the field.
RelationObservation ObservationFromJson(const nlohmann::json& j,
                                        std::size_t line = 0);

void WriteObservations(const std::vector<RelationObservation>& observations,
                       std::ostream& out);
std::vector<RelationObservation> ReadObservations(
    const std::filesystem::path& path);

/// All C(n,2) pairs over the distinct entity ids, in lexicographic order.
std::vector<EntityPair> EnumeratePairs(
    const std::vector<ResolvedMention>& resolved);

/// Keeps pairs with at least one endpoint in `anchors`. An empty anchor set
/// keeps every pair.
std::vector<EntityPair> RestrictToAnchors(const std::vector<EntityPair>& pairs,
                                          const std::vector<std::string>& anchors);

/// Entity ids linked to the item's tickers through the alias table.
std::vector<std::string> TickerAnchors(const NewsItem& item,
                                       const AliasTable& table);

std::vector<std::string> DefaultTopicLabels();

inline constexpr std::string_view kContextTemplate = "This news is about {}.";

/// Top-scoring topic label. Throws ArgumentError when `topic_labels` is empty.
ContextTag ExtractContext(std::string_view text, const ZscBackend& zsc,
                          const std::vector<std::string>& topic_labels,
                          std::string_view hypothesis_template = kContextTemplate);

/// Classifies one pair of `item`. `display_names` are the document surfaces
/// for (pair.a, pair.b) and fill {A} and {B}. The premise is
/// ItemText(item, premise_fields).
RelationObservation ClassifyRelation(
    const NewsItem& item, const EntityPair& pair,
    const std::pair<std::string, std::string>& display_names,
    const HypothesisTemplate& hypothesis, const ZscBackend& zsc,
    ClassSet classes = ClassSet::kThree,
    TextFields premise_fields = TextFields::kHeadline);

enum class PairingMode {
  kAll,       // every pair of distinct entities
  kAnchored,  // only pairs touching an entity linked to the item's tickers
};

struct ZscPipelineOptions {
  bool filter_stock_news = true;
  StockFilterOptions filter;
  TextFields text = TextFields::kHeadline;
  HypothesisTemplate hypothesis;
  ClassSet classes = ClassSet::kThree;
  bool context = false;
  std::vector<std::string> topic_labels = DefaultTopicLabels();
  bool include_unresolved = true;
  PairingMode pairing = PairingMode::kAll;
  int workers = 1;
  FailurePolicy on_failure = FailurePolicy::kFailFast;
};

struct ZscPipelineResult {
  FilterResult filter;
  std::vector<RelationObservation> observations;
  std::vector<ItemFailure> failures;
  std::size_t mentions = 0;
  /// Sum of C(n,2) over processed documents; an upper bound on observations.
  std::size_t pair_capacity = 0;
};

/// stock filter -> NER -> resolve -> pairs -> context -> classification.
/// Observations come out in (corpus order, pair order).
ZscPipelineResult RunZscPipeline(const Corpus& corpus, const AliasTable& table,
                                 const NerBackend& ner, const ZscBackend& zsc,
                                 const ZscPipelineOptions& options = {});

}  // namespace signet

#endif  // SIGNET_RELATIONS_H_
