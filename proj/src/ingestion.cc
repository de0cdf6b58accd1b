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

#include "signet/ingestion.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include "signet/encoding.h"
#include "signet/error.h"

namespace signet {
namespace {

std::string RequireString(const nlohmann::json& record, const char* field,
                          std::size_t line) {
  if (!record.contains(field)) throw ParseError(line, field, "missing");
  const auto& value = record[field];
  if (!value.is_string()) throw ParseError(line, field, "not a string");
  return value.get<std::string>();
}

}  // namespace

std::string NewsItemId(std::string_view url, std::string_view headline) {
  std::string material(url);
  material.push_back('\n');
  material.append(headline);
  return Sha256Hex(material).substr(0, 16);
}

const NewsItem* Corpus::Find(std::string_view id) const {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

Corpus Corpus::FromItems(std::vector<NewsItem> items,
                         std::size_t* duplicates) {
  Corpus corpus;
  std::set<std::string> seen;
  std::size_t dropped = 0;
  for (auto& item : items) {
    if (!seen.insert(item.id).second) {
      ++dropped;
      continue;
    }
    corpus.items.push_back(std::move(item));
  }
  std::sort(corpus.items.begin(), corpus.items.end(),
            [](const NewsItem& a, const NewsItem& b) {
              return std::tie(a.published_at, a.id) <
                     std::tie(b.published_at, b.id);
            });
  if (duplicates) *duplicates = dropped;
  return corpus;
}

NewsItem ParseNewsRecord(const nlohmann::json& record, std::size_t line) {
  if (!record.is_object()) throw ParseError(line, "<record>", "not an object");
  NewsItem item;
  item.headline = std::string(TrimWhitespace(RequireString(record, "headline", line)));
  if (item.headline.empty()) {
    throw ParseError(line, "headline", "empty after trimming");
  }
  if (!record.contains("summary")) throw ParseError(line, "summary", "missing");
  if (record["summary"].is_string()) {
    item.summary = record["summary"].get<std::string>();
  } else if (!record["summary"].is_null()) {
    throw ParseError(line, "summary", "not a string or null");
  }
  const std::string published = RequireString(record, "published_at", line);
  auto ts = ParseRfc3339(published);
  if (!ts) {
    throw ParseError(line, "published_at",
                     "not an RFC-3339 timestamp: '" + published + "'");
  }
  item.published_at = *ts;
  item.source = RequireString(record, "source", line);
  item.url = RequireString(record, "url", line);
  if (!record.contains("tickers")) throw ParseError(line, "tickers", "missing");
  if (!record["tickers"].is_array()) {
    throw ParseError(line, "tickers", "not an array");
  }
  for (const auto& t : record["tickers"]) {
    if (!t.is_string()) throw ParseError(line, "tickers", "non-string entry");
    item.tickers.push_back(t.get<std::string>());
  }
  item.id = NewsItemId(item.url, item.headline);
  return item;
}

nlohmann::json NewsItemToJson(const NewsItem& item) {
  return {{"id", item.id},
          {"headline", item.headline},
          {"summary", item.summary ? nlohmann::json(*item.summary)
                                   : nlohmann::json(nullptr)},
          {"published_at", FormatRfc3339(item.published_at)},
          {"source", item.source},
          {"url", item.url},
          {"tickers", item.tickers}};
}

LoadResult LoadCorpus(const std::filesystem::path& path, OnError on_error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus file " + path.string());

  LoadResult result;
  std::vector<NewsItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (TrimWhitespace(line).empty()) continue;
    ++result.records;
    try {
      nlohmann::json record;
      try {
        record = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_no, "<record>", std::string("invalid JSON: ") + e.what());
      }
      items.push_back(ParseNewsRecord(record, line_no));
    } catch (const ParseError& e) {
      if (on_error == OnError::kFail) throw;
      ++result.skipped;
      result.diagnostics.push_back({e.line(), e.field(), e.what()});
    }
  }
  if (in.bad()) throw IoError("read failed on corpus file " + path.string());
  result.corpus = Corpus::FromItems(std::move(items), &result.duplicates);
  return result;
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& item : corpus.items) {
    out << CanonicalJson(NewsItemToJson(item)) << '\n';
  }
}

std::string ItemText(const NewsItem& item, TextFields fields) {
  if (fields == TextFields::kHeadlineAndSummary && item.summary &&
      !TrimWhitespace(*item.summary).empty()) {
    return item.headline + "\n" + *item.summary;
  }
  return item.headline;
}

FilterResult FilterStockNews(const Corpus& corpus, const ZscBackend& zsc,
                             const StockFilterOptions& options) {
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
    throw ArgumentError("stock filter threshold must lie in [0,1]");
  }
  const std::vector<std::string> labels = {options.stock_label,
                                           options.relation_label};
  enum class Verdict { kKeep, kDrop };
  std::vector<Verdict> verdicts(corpus.size(), Verdict::kKeep);

  auto errors = ParallelFor(corpus.size(), options.workers, [&](std::size_t i) {
    const NewsItem& item = corpus.items[i];
    const ZscResult result = zsc.Classify(ItemText(item, options.text),
                                          options.hypothesis_template, labels);
    const bool stock_first = result.top_label() == options.stock_label;
    verdicts[i] = stock_first && result.top_score() >= options.threshold
                      ? Verdict::kDrop
                      : Verdict::kKeep;
  });

  FilterResult out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const NewsItem& item = corpus.items[i];
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const DeterminismError&) {
        throw;
      } catch (const std::exception& e) {
        if (options.on_failure == FailurePolicy::kFailFast) {
          throw PipelineError(item.id, e.what());
        }
        out.failures.push_back({item.id, "filter", e.what()});
      }
      continue;
    }
    (verdicts[i] == Verdict::kDrop ? out.dropped : out.kept)
        .items.push_back(item);
  }
  return out;
}

}  // namespace signet
