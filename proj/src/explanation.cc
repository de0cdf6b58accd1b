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

#include "signet/explanation.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "signet/encoding.h"
#include "signet/error.h"

namespace signet {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto piece = text.substr(
        start, end == std::string_view::npos ? std::string_view::npos : end - start);
    lines.emplace_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

// A candidate pair read from the model output, before resolution.
struct RawRelation {
  std::string name_a;
  std::string name_b;
  std::optional<RelationLabel> label;
  std::string rationale;
  std::string raw;
};

std::optional<RawRelation> ParseRelLine(std::string_view line) {
  static const std::regex kRel(R"(^\s*REL:\s*(.*)$)", std::regex::icase);
  std::smatch m;
  const std::string s(line);
  if (!std::regex_match(s, m, kRel)) return std::nullopt;
  std::vector<std::string> fields;
  std::string rest = m[1].str();
  for (int i = 0; i < 3; ++i) {
    const auto bar = rest.find('|');
    if (bar == std::string::npos) break;
    fields.emplace_back(TrimWhitespace(rest.substr(0, bar)));
    rest = rest.substr(bar + 1);
  }
  fields.emplace_back(TrimWhitespace(rest));
  RawRelation raw;
  raw.raw = s;
  if (fields.size() != 4) return raw;  // unusable, reported by the caller
  raw.name_a = fields[0];
  raw.name_b = fields[1];
  raw.label = ParseLabel(fields[2]);
  raw.rationale = fields[3];
  return raw;
}

std::optional<RelationLabel> LabelFromProse(std::string_view body) {
  static const std::regex kCue(
      R"(\b(?:appears?\s+to\s+be|seems?\s+to\s+be|interpreted\s+as|classified\s+as|considered|is)\s+(?:(?:a|an|mostly|likely|clearly|generally)\s+)?(positive|negative|neutral|unknown)\b)",
      std::regex::icase);
  const std::string s(body);
  std::smatch m;
  if (std::regex_search(s, m, kCue)) return ParseLabel(m[1].str());

  // Without a cue phrase, accept a class word only if it is the sole one.
  static const std::regex kWord(R"(\b(positive|negative|neutral|unknown)\b)",
                                std::regex::icase);
  std::set<RelationLabel> seen;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kWord);
       it != std::sregex_iterator(); ++it) {
    seen.insert(*ParseLabel((*it)[1].str()));
  }
  if (seen.size() == 1) return *seen.begin();
  return std::nullopt;
}

// Chooses where to split "X and Y" when either name may itself contain
// " and ". Prefers splits whose sides resolve, then sides found in the text.
std::optional<std::pair<std::string, std::string>> SplitPairHeader(
    std::string_view header, std::string_view source_text,
    const AliasTable& table) {
  static constexpr std::string_view kAnd = " and ";
  const std::string lower_source = Lower(source_text);
  std::optional<std::pair<std::string, std::string>> best;
  int best_score = -1;
  for (auto pos = header.find(kAnd); pos != std::string_view::npos;
       pos = header.find(kAnd, pos + 1)) {
    std::string a(TrimWhitespace(header.substr(0, pos)));
    std::string b(TrimWhitespace(header.substr(pos + kAnd.size())));
    if (a.empty() || b.empty()) continue;
    int score = 0;
    for (const auto& name : {a, b}) {
      if (ResolveSurface(name, table).resolved) score += 2;
      if (lower_source.find(Lower(name)) != std::string::npos) score += 1;
    }
    if (score > best_score) {
      best_score = score;
      best = std::make_pair(std::move(a), std::move(b));
    }
  }
  return best;
}

std::vector<RawRelation> ReadProse(std::string_view completion,
                                   std::string_view source_text,
                                   const AliasTable& table,
                                   std::vector<std::string>& unparsed) {
  static const std::regex kHeader(
      R"(^\s*(?:[-*]\s+|\d+[.)]\s+)?([^:]{3,160}?)\s*:\s*(.*)$)");
  std::vector<RawRelation> out;
  std::optional<RawRelation> current;
  auto flush = [&] {
    if (!current) return;
    current->rationale = std::string(TrimWhitespace(current->rationale));
    current->label = LabelFromProse(current->rationale);
    out.push_back(std::move(*current));
    current.reset();
  };
  for (const auto& line : SplitLines(completion)) {
    if (TrimWhitespace(line).empty()) continue;
    std::smatch m;
    if (std::regex_match(line, m, kHeader)) {
      if (auto names = SplitPairHeader(m[1].str(), source_text, table)) {
        flush();
        current = RawRelation{names->first, names->second, std::nullopt,
                              m[2].str(), line};
        continue;
      }
    }
    if (current) {
      current->rationale += " ";
      current->rationale += TrimWhitespace(line);
      current->raw += "\n" + line;
    } else {
      unparsed.push_back(line);
    }
  }
  flush();
  return out;
}

}  // namespace

std::vector<ChatMessage> BuildRelationPrompt(
    const NewsItem& item, const std::vector<RelationLabel>& classes,
    TextFields fields) {
  if (classes.empty()) {
    throw ArgumentError("relation prompt needs at least one class");
  }
  if (TrimWhitespace(item.headline).empty()) {
    throw ArgumentError("relation prompt needs a non-empty headline");
  }
  std::vector<RelationLabel> listed = classes;
  if (std::find(listed.begin(), listed.end(), RelationLabel::kUnknown) ==
      listed.end()) {
    listed.push_back(RelationLabel::kUnknown);
  }
  std::string class_list;
  for (std::size_t i = 0; i < listed.size(); ++i) {
    if (i > 0) class_list += ", ";
    class_list += LabelName(listed[i]);
  }

  std::string system =
      "You are a business analyst. You read news about companies and "
      "describe how the organizations mentioned relate to each other. "
      "[prompt ";
  system += kRelationPromptVersion;
  system += "]";

  std::string user = "News: ";
  user += ItemText(item, fields);
  user +=
      "\n\n"
      "1. List every organization mentioned in the news.\n"
      "2. For every unordered pair of those organizations write exactly one "
      "line of the form\n"
      "REL: <organization A> | <organization B> | <class> | <rationale>\n"
      "where <class> is one of: ";
  user += class_list;
  user +=
      ", and <rationale> is one sentence explaining the class.\n"
      "3. Use \"unknown\" when the text does not state a relationship "
      "between the two organizations.";
  return {{"system", std::move(system)}, {"user", std::move(user)}};
}

std::string FormatRelLine(std::string_view a, std::string_view b,
                          RelationLabel label, std::string_view rationale) {
  std::string line = "REL: ";
  line += a;
  line += " | ";
  line += b;
  line += " | ";
  line += LabelName(label);
  line += " | ";
  line += rationale;
  return line;
}

ParsedRelations ParseLlmRelations(std::string_view completion,
                                  const NewsItem& item,
                                  const AliasTable& table) {
  ParsedRelations parsed;
  auto diagnose = [&](std::string message, std::string raw) {
    parsed.diagnostics.push_back({item.id, std::move(message), std::move(raw)});
  };
  if (TrimWhitespace(completion).empty()) {
    diagnose("empty completion", std::string(completion));
    return parsed;
  }

  std::vector<RawRelation> raws;
  std::vector<std::string> unparsed;
  for (const auto& line : SplitLines(completion)) {
    if (auto rel = ParseRelLine(line)) raws.push_back(std::move(*rel));
  }
  if (raws.empty()) {
    parsed.used_fallback = true;
    raws = ReadProse(completion, ItemText(item, TextFields::kHeadlineAndSummary),
                     table, unparsed);
  }

  std::set<EntityPair> seen;
  for (auto& raw : raws) {
    if (raw.name_a.empty() || raw.name_b.empty()) {
      diagnose("relation line lacks four fields", raw.raw);
      continue;
    }
    if (!raw.label) {
      diagnose("no relation class found", raw.raw);
      continue;
    }
    const EntityRef a = ResolveSurface(raw.name_a, table);
    const EntityRef b = ResolveSurface(raw.name_b, table);
    if (a.id == b.id) {
      diagnose("both sides name the same entity '" + a.id + "'", raw.raw);
      continue;
    }
    if (*raw.label != RelationLabel::kUnknown &&
        TrimWhitespace(raw.rationale).empty()) {
      diagnose("missing rationale", raw.raw);
      continue;
    }
    EntityPair pair = EntityPair::Of(a.id, b.id);
    if (!seen.insert(pair).second) {
      diagnose("repeated pair " + pair.ToString(), raw.raw);
      continue;
    }
    const bool swapped = pair.a() != a.id;
    PairExplanation e{pair};
    e.label = *raw.label;
    e.rationale = std::string(TrimWhitespace(raw.rationale));
    e.doc_id = item.id;
    e.display_names = swapped ? std::make_pair(raw.name_b, raw.name_a)
                              : std::make_pair(raw.name_a, raw.name_b);
    e.resolved = swapped ? std::make_pair(b.resolved, a.resolved)
                         : std::make_pair(a.resolved, b.resolved);
    parsed.explanations.push_back(std::move(e));
  }
  for (const auto& line : unparsed) diagnose("unparsed text", line);
  if (parsed.explanations.empty()) {
    diagnose("completion yielded no relations", std::string(completion));
  }
  return parsed;
}

nlohmann::json ExplanationToJson(const PairExplanation& e) {
  nlohmann::json unresolved = nlohmann::json::array();
  if (!e.resolved.first) unresolved.push_back(e.pair.a());
  if (!e.resolved.second) unresolved.push_back(e.pair.b());
  return {{"pair", {{"a", e.pair.a()}, {"b", e.pair.b()}}},
          {"label", std::string(LabelName(e.label))},
          {"rationale", e.rationale},
          {"doc_id", e.doc_id},
          {"display_names", {e.display_names.first, e.display_names.second}},
          {"unresolved", std::move(unresolved)}};
}

void WriteExplanations(const std::vector<PairExplanation>& explanations,
                       std::ostream& out) {
  for (const auto& e : explanations) {
    out << CanonicalJson(ExplanationToJson(e)) << '\n';
  }
}

std::vector<RelationObservation> LlmObservations(
    const std::vector<PairExplanation>& explanations, const Corpus& corpus,
    const ScorePolicy& policy) {
  if (!(policy.confidence >= 0.0 && policy.confidence <= 1.0)) {
    throw ArgumentError("LLM confidence must lie in [0,1]");
  }
  std::vector<RelationObservation> out;
  out.reserve(explanations.size());
  for (const auto& e : explanations) {
    const NewsItem* item = corpus.Find(e.doc_id);
    if (!item) throw ArgumentError("explanation refers to unknown item " + e.doc_id);
    RelationObservation o{e.pair};
    o.label = e.label;
    o.score = e.label == RelationLabel::kUnknown ? 0.0 : Quantize6(policy.confidence);
    o.doc_id = e.doc_id;
    o.published_at = item->published_at;
    o.method = ExtractionMethod::kLlm;
    o.display_names = e.display_names;
    out.push_back(std::move(o));
  }
  return out;
}

nlohmann::json SummaryToJson(const ExplanationSummary& s) {
  return {{"pair", {{"a", s.pair.a()}, {"b", s.pair.b()}}},
          {"summary", s.summary},
          {"observation_count", s.observation_count},
          {"doc_ids", s.doc_ids}};
}

void WriteSummaries(const std::vector<ExplanationSummary>& summaries,
                    std::ostream& out) {
  for (const auto& s : summaries) out << CanonicalJson(SummaryToJson(s)) << '\n';
}

namespace {

std::vector<const PairExplanation*> Chronological(
    const std::vector<PairExplanation>& explanations, const Corpus& corpus) {
  std::vector<const PairExplanation*> ordered;
  for (const auto& e : explanations) ordered.push_back(&e);
  auto time_of = [&](const PairExplanation* e) {
    const NewsItem* item = corpus.Find(e->doc_id);
    if (!item) throw ArgumentError("explanation refers to unknown item " + e->doc_id);
    return item->published_at;
  };
  std::stable_sort(ordered.begin(), ordered.end(),
                   [&](const PairExplanation* x, const PairExplanation* y) {
                     return std::make_pair(time_of(x), x->doc_id) <
                            std::make_pair(time_of(y), y->doc_id);
                   });
  return ordered;
}

}  // namespace

std::vector<ChatMessage> BuildSummaryPrompt(
    const EntityPair& pair, const std::vector<PairExplanation>& explanations,
    const Corpus& corpus) {
  if (explanations.empty()) {
    throw ArgumentError("summary needs at least one explanation");
  }
  const auto ordered = Chronological(explanations, corpus);
  const auto& names = ordered.front()->display_names;

  std::string system =
      "You summarize how news describes the relationship between two "
      "organizations. [prompt ";
  system += kSummaryPromptVersion;
  system += "]";

  std::ostringstream user;
  user << "Summarize the relationship between " << names.first << " and "
       << names.second
       << " in at most three sentences, using these explanations in order of "
          "publication:\n";
  for (const PairExplanation* e : ordered) {
    const NewsItem* item = corpus.Find(e->doc_id);
    user << "- " << FormatRfc3339(item->published_at).substr(0, 10) << " ("
         << LabelName(e->label) << "): "
         << (e->rationale.empty() ? "no rationale given" : e->rationale)
         << '\n';
  }
  (void)pair;
  return {{"system", std::move(system)}, {"user", user.str()}};
}

ExplanationSummary SummarizePair(const EntityPair& pair,
                                 const std::vector<PairExplanation>& explanations,
                                 const Corpus& corpus, const LlmBackend& llm) {
  if (explanations.empty()) {
    throw ArgumentError("summary needs at least one explanation");
  }
  for (const auto& e : explanations) {
    if (e.pair != pair) {
      throw ArgumentError("explanation for " + e.pair.ToString() +
                          " passed to summary of " + pair.ToString());
    }
  }
  const LlmResult result = llm.Complete(BuildSummaryPrompt(pair, explanations, corpus));
  ExplanationSummary summary{pair};
  summary.summary = result.text;
  for (const PairExplanation* e : Chronological(explanations, corpus)) {
    if (std::find(summary.doc_ids.begin(), summary.doc_ids.end(), e->doc_id) ==
        summary.doc_ids.end()) {
      summary.doc_ids.push_back(e->doc_id);
    }
  }
  summary.observation_count = summary.doc_ids.size();
  return summary;
}

LlmPipelineResult RunLlmPipeline(const Corpus& corpus, const AliasTable& table,
                                 const LlmBackend& llm,
                                 const LlmPipelineOptions& options) {
  const auto classes = ClassLabels(options.classes);
  std::vector<std::optional<ParsedRelations>> parsed(corpus.size());

  auto errors = ParallelFor(corpus.size(), options.workers, [&](std::size_t i) {
    const NewsItem& item = corpus.items[i];
    const LlmResult result =
        llm.Complete(BuildRelationPrompt(item, classes, options.text));
    if (result.condition != CompletionCondition::kComplete) {
      ParsedRelations none;
      none.diagnostics.push_back(
          {item.id,
           result.condition == CompletionCondition::kRefusal ? "model refused"
                                                             : "empty completion",
           result.text});
      parsed[i] = std::move(none);
      return;
    }
    parsed[i] = ParseLlmRelations(result.text, item, table);
  });

  LlmPipelineResult out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const NewsItem& item = corpus.items[i];
    if (errors[i]) {
      std::string message;
      try {
        std::rethrow_exception(errors[i]);
      } catch (const DeterminismError&) {
        throw;
      } catch (const std::exception& e) {
        message = e.what();
      }
      if (options.on_failure == FailurePolicy::kFailFast) {
        throw PipelineError(item.id, message);
      }
      out.failures.push_back({item.id, "explain", message});
      continue;
    }
    for (auto& e : parsed[i]->explanations) out.explanations.push_back(std::move(e));
    for (auto& d : parsed[i]->diagnostics) out.diagnostics.push_back(std::move(d));
  }

  std::vector<PairExplanation> usable;
  for (const auto& e : out.explanations) {
    if (options.include_unresolved || !e.HasUnresolved()) usable.push_back(e);
  }
  out.observations = LlmObservations(usable, corpus, options.score);

  if (options.summaries) {
    std::map<EntityPair, std::vector<PairExplanation>> by_pair;
    for (const auto& e : usable) by_pair[e.pair].push_back(e);
    for (const auto& [pair, group] : by_pair) {
      try {
        out.summaries.push_back(SummarizePair(pair, group, corpus, llm));
      } catch (const DeterminismError&) {
        throw;
      } catch (const Error& e) {
        if (options.on_failure == FailurePolicy::kFailFast) throw;
        out.failures.push_back({pair.ToString(), "summarize", e.what()});
      }
    }
  }
  return out;
}

}  // namespace signet
