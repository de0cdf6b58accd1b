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

#include "signet/relations.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include "signet/encoding.h"
#include "signet/error.h"

namespace signet {
namespace {

std::size_t CountOf(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

void ReplaceOnce(std::string& text, std::string_view from, std::string_view to) {
  const auto pos = text.find(from);
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
}

const nlohmann::json& Field(const nlohmann::json& j, const char* name,
                            std::size_t line) {
  if (!j.contains(name)) throw ParseError(line, name, "missing");
  return j[name];
}

std::string StringField(const nlohmann::json& j, const char* name,
                        std::size_t line) {
  const auto& v = Field(j, name, line);
  if (!v.is_string()) throw ParseError(line, name, "not a string");
  return v.get<std::string>();
}

double UnitField(const nlohmann::json& j, const char* name, std::size_t line) {
  const auto& v = Field(j, name, line);
  if (!v.is_number()) throw ParseError(line, name, "not a number");
  const double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) throw ParseError(line, name, "outside [0,1]");
  return x;
}

}  // namespace

EntityPair EntityPair::Of(std::string x, std::string y) {
  if (x == y) throw ArgumentError("entity pair needs two distinct ids: " + x);
  if (y < x) std::swap(x, y);
  return EntityPair(std::move(x), std::move(y));
}

std::string_view LabelName(RelationLabel label) {
  switch (label) {
    case RelationLabel::kPositive:
      return "positive";
    case RelationLabel::kNegative:
      return "negative";
    case RelationLabel::kNeutral:
      return "neutral";
    case RelationLabel::kUnknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<RelationLabel> ParseLabel(std::string_view text) {
  std::string lower(TrimWhitespace(text));
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto label : {RelationLabel::kPositive, RelationLabel::kNegative,
                     RelationLabel::kNeutral, RelationLabel::kUnknown}) {
    if (lower == LabelName(label)) return label;
  }
  return std::nullopt;
}

std::vector<RelationLabel> ClassLabels(ClassSet classes) {
  std::vector<RelationLabel> labels = {RelationLabel::kPositive,
                                       RelationLabel::kNegative,
                                       RelationLabel::kNeutral};
  if (classes == ClassSet::kFour) labels.push_back(RelationLabel::kUnknown);
  return labels;
}

HypothesisTemplate::HypothesisTemplate(std::string text) : text_(std::move(text)) {
  for (std::string_view placeholder : {"{A}", "{B}", "{CLASS}"}) {
    if (CountOf(text_, placeholder) != 1) {
      throw ArgumentError("hypothesis template needs exactly one " +
                          std::string(placeholder) + ": " + text_);
    }
  }
  if (CountOf(text_, kLabelPlaceholder) != 0) {
    throw ArgumentError("hypothesis template must not contain '{}'");
  }
}

std::string HypothesisTemplate::Instantiate(std::string_view a,
                                            std::string_view b) const {
  // Fill {CLASS} first so that names containing "{A}"-like text stay inert.
  std::string out = text_;
  ReplaceOnce(out, "{CLASS}", kLabelPlaceholder);
  const auto pos_a = out.find("{A}");
  const auto pos_b = out.find("{B}");
  if (pos_a < pos_b) {
    out.replace(pos_b, 3, b);
    out.replace(pos_a, 3, a);
  } else {
    out.replace(pos_a, 3, a);
    out.replace(pos_b, 3, b);
  }
  return out;
}

std::string_view MethodName(ExtractionMethod method) {
  return method == ExtractionMethod::kZsc ? "zsc" : "llm";
}

std::string ObservationId(const RelationObservation& o) {
  std::string material = o.doc_id;
  material += '\n';
  material += o.pair.a();
  material += '\n';
  material += o.pair.b();
  material += '\n';
  material += MethodName(o.method);
  return Sha256Hex(material).substr(0, 16);
}

nlohmann::json ObservationToJson(const RelationObservation& o) {
  nlohmann::json context = nullptr;
  if (o.context) {
    context = {{"label", o.context->label}, {"score", o.context->score}};
  }
  return {{"id", ObservationId(o)},
          {"pair", {{"a", o.pair.a()}, {"b", o.pair.b()}}},
          {"label", std::string(LabelName(o.label))},
          {"score", o.score},
          {"doc_id", o.doc_id},
          {"published_at", FormatRfc3339(o.published_at)},
          {"context", context},
          {"method", std::string(MethodName(o.method))},
          {"display_names", {o.display_names.first, o.display_names.second}}};
}

RelationObservation ObservationFromJson(const nlohmann::json& j,
                                        std::size_t line) {
  if (!j.is_object()) throw ParseError(line, "<record>", "not an object");
  const auto& pair = Field(j, "pair", line);
  if (!pair.is_object()) throw ParseError(line, "pair", "not an object");
  std::optional<EntityPair> entity_pair;
  try {
    entity_pair = EntityPair::Of(StringField(pair, "a", line),
                                 StringField(pair, "b", line));
  } catch (const ArgumentError& e) {
    throw ParseError(line, "pair", e.what());
  }
  RelationObservation o{*entity_pair};
  const auto label = ParseLabel(StringField(j, "label", line));
  if (!label) throw ParseError(line, "label", "not a relation class");
  o.label = *label;
  o.score = UnitField(j, "score", line);
  o.doc_id = StringField(j, "doc_id", line);
  const auto ts = ParseRfc3339(StringField(j, "published_at", line));
  if (!ts) throw ParseError(line, "published_at", "not RFC-3339");
  o.published_at = *ts;
  const auto& context = Field(j, "context", line);
  if (context.is_object()) {
    o.context = ContextTag{StringField(context, "label", line),
                           UnitField(context, "score", line)};
  } else if (!context.is_null()) {
    throw ParseError(line, "context", "not an object or null");
  }
  const std::string method = StringField(j, "method", line);
  if (method == "zsc") {
    o.method = ExtractionMethod::kZsc;
  } else if (method == "llm") {
    o.method = ExtractionMethod::kLlm;
  } else {
    throw ParseError(line, "method", "expected zsc or llm");
  }
  const auto& names = Field(j, "display_names", line);
  if (!names.is_array() || names.size() != 2 || !names[0].is_string() ||
      !names[1].is_string()) {
    throw ParseError(line, "display_names", "expected two strings");
  }
  o.display_names = {names[0].get<std::string>(), names[1].get<std::string>()};
  return o;
}

void WriteObservations(const std::vector<RelationObservation>& observations,
                       std::ostream& out) {
  for (const auto& o : observations) {
    out << CanonicalJson(ObservationToJson(o)) << '\n';
  }
}

std::vector<RelationObservation> ReadObservations(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read observations file " + path.string());
  std::vector<RelationObservation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, "<record>", e.what());
    }
    out.push_back(ObservationFromJson(j, line_no));
  }
  return out;
}

std::vector<EntityPair> EnumeratePairs(
    const std::vector<ResolvedMention>& resolved) {
  std::set<std::string> ids;
  for (const auto& m : resolved) ids.insert(m.entity.id);
  const std::vector<std::string> sorted(ids.begin(), ids.end());
  std::vector<EntityPair> pairs;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      pairs.push_back(EntityPair::Of(sorted[i], sorted[j]));
    }
  }
  return pairs;
}

std::vector<EntityPair> RestrictToAnchors(const std::vector<EntityPair>& pairs,
                                          const std::vector<std::string>& anchors) {
  if (anchors.empty()) return pairs;
  std::vector<EntityPair> out;
  for (const auto& pair : pairs) {
    const bool anchored = std::any_of(
        anchors.begin(), anchors.end(),
        [&](const std::string& id) { return pair.Contains(id); });
    if (anchored) out.push_back(pair);
  }
  return out;
}

std::vector<std::string> TickerAnchors(const NewsItem& item,
                                       const AliasTable& table) {
  std::set<std::string> anchors;
  for (const auto& ticker : item.tickers) {
    if (auto id = table.EntityForTicker(ticker)) anchors.insert(*id);
  }
  return {anchors.begin(), anchors.end()};
}

std::vector<std::string> DefaultTopicLabels() {
  return {"privacy", "advertising", "hardware",    "cloud",
          "social media", "legal", "acquisition", "partnership"};
}

ContextTag ExtractContext(std::string_view text, const ZscBackend& zsc,
                          const std::vector<std::string>& topic_labels,
                          std::string_view hypothesis_template) {
  if (topic_labels.empty()) {
    throw ArgumentError("context extraction needs at least one topic label");
  }
  const ZscResult result = zsc.Classify(text, hypothesis_template, topic_labels);
  return {result.top_label(), Quantize6(result.top_score())};
}

RelationObservation ClassifyRelation(
    const NewsItem& item, const EntityPair& pair,
    const std::pair<std::string, std::string>& display_names,
    const HypothesisTemplate& hypothesis, const ZscBackend& zsc,
    ClassSet classes, TextFields premise_fields) {
  std::vector<std::string> labels;
  for (auto label : ClassLabels(classes)) labels.emplace_back(LabelName(label));
  const ZscResult result = zsc.Classify(
      ItemText(item, premise_fields),
      hypothesis.Instantiate(display_names.first, display_names.second), labels);

  RelationObservation o{pair};
  o.label = *ParseLabel(result.top_label());
  o.score = Quantize6(result.top_score());
  o.doc_id = item.id;
  o.published_at = item.published_at;
  o.method = ExtractionMethod::kZsc;
  o.display_names = display_names;
  return o;
}

ZscPipelineResult RunZscPipeline(const Corpus& corpus, const AliasTable& table,
                                 const NerBackend& ner, const ZscBackend& zsc,
                                 const ZscPipelineOptions& options) {
  ZscPipelineResult result;
  if (options.filter_stock_news) {
    StockFilterOptions filter = options.filter;
    filter.workers = options.workers;
    filter.on_failure = options.on_failure;
    result.filter = FilterStockNews(corpus, zsc, filter);
    result.failures = result.filter.failures;
  } else {
    result.filter.kept = corpus;
  }
  const Corpus& kept = result.filter.kept;

  struct ItemOutput {
    std::vector<RelationObservation> observations;
    std::size_t mentions = 0;
    std::size_t entities = 0;
    std::string failed_pair;
  };
  std::vector<ItemOutput> outputs(kept.size());

  auto errors = ParallelFor(kept.size(), options.workers, [&](std::size_t i) {
    const NewsItem& item = kept.items[i];
    ItemOutput& out = outputs[i];
    const auto mentions = ner.Recognize(ItemText(item, options.text));
    out.mentions = mentions.size();

    std::vector<ResolvedMention> resolved;
    std::map<std::string, std::string> display;  // first surface per entity
    for (const auto& mention : mentions) {
      ResolvedMention r = Resolve(mention, table);
      if (!r.entity.resolved && !options.include_unresolved) continue;
      display.emplace(r.entity.id, r.mention.surface);
      resolved.push_back(std::move(r));
    }
    out.entities = display.size();

    std::vector<EntityPair> pairs = EnumeratePairs(resolved);
    if (options.pairing == PairingMode::kAnchored) {
      pairs = RestrictToAnchors(pairs, TickerAnchors(item, table));
    }
    if (pairs.empty()) return;

    std::optional<ContextTag> context;
    if (options.context) {
      context = ExtractContext(ItemText(item, options.text), zsc,
                               options.topic_labels);
    }
    for (const auto& pair : pairs) {
      out.failed_pair = pair.ToString();
      RelationObservation o = ClassifyRelation(
          item, pair, {display.at(pair.a()), display.at(pair.b())},
          options.hypothesis, zsc, options.classes, options.text);
      o.context = context;
      out.observations.push_back(std::move(o));
    }
    out.failed_pair.clear();
  });

  for (std::size_t i = 0; i < kept.size(); ++i) {
    const NewsItem& item = kept.items[i];
    ItemOutput& out = outputs[i];
    if (errors[i]) {
      std::string message;
      try {
        std::rethrow_exception(errors[i]);
      } catch (const DeterminismError&) {
        throw;
      } catch (const std::exception& e) {
        message = e.what();
      }
      if (!out.failed_pair.empty()) {
        message = "pair (" + out.failed_pair + "): " + message;
      }
      if (options.on_failure == FailurePolicy::kFailFast) {
        throw PipelineError(item.id, message);
      }
      result.failures.push_back({item.id, "extract", message});
      continue;
    }
    result.mentions += out.mentions;
    const std::size_t n = out.entities;
    result.pair_capacity += n < 2 ? 0 : n * (n - 1) / 2;
    for (auto& o : out.observations) result.observations.push_back(std::move(o));
  }
  return result;
}

}  // namespace signet
