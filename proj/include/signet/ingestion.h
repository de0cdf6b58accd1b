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

// News corpus loading and the stock-news pre-filter.
//
// Input files hold one JSON object per line:
//   {"headline": string, "summary": string|null, "published_at": RFC-3339,
//    "source": string, "url": string, "tickers": [string]}
// Unknown fields are ignored, which lets a normalized corpus (with its
// derived "id") be loaded again.

#ifndef SIGNET_INGESTION_H_
#define SIGNET_INGESTION_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "signet/batch.h"
#include "signet/gateway.h"
#include "signet/time.h"

namespace signet {

struct NewsItem {
  std::string id;
  std::string headline;
  std::optional<std::string> summary;
  Timestamp published_at;
  std::string source;
  std::string url;
  std::vector<std::string> tickers;

  friend bool operator==(const NewsItem&, const NewsItem&) = default;
};

/// First 16 hex digits of SHA-256(url + "\n" + headline).
std::string NewsItemId(std::string_view url, std::string_view headline);

/// Items sorted by (published_at, id), unique by id.
struct Corpus {
  std::vector<NewsItem> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  const NewsItem* Find(std::string_view id) const;

  /// Sorts and drops repeated ids, keeping the first occurrence. Returns the
  /// number of duplicates removed.
  static Corpus FromItems(std::vector<NewsItem> items,
                          std::size_t* duplicates = nullptr);

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

enum class OnError { kFail, kSkip };

struct LoadDiagnostic {
  std::size_t line = 0;
  std::string field;
  std::string message;
};

struct LoadResult {
  Corpus corpus;
  std::size_t records = 0;     // non-blank lines read
  std::size_t skipped = 0;     // malformed lines dropped under kSkip
  std::size_t duplicates = 0;  // valid lines whose id was already present
  std::vector<LoadDiagnostic> diagnostics;
};

/// Validates one input record. Throws ParseError naming `line` and the field.
NewsItem ParseNewsRecord(const nlohmann::json& record, std::size_t line);

nlohmann::json NewsItemToJson(const NewsItem& item);

/// Throws IoError when the file cannot be read and, under OnError::kFail,
/// ParseError for the first malformed line.
LoadResult LoadCorpus(const std::filesystem::path& path, OnError on_error);

/// One canonical JSON object per line, including "id".
void WriteCorpus(const Corpus& corpus, std::ostream& out);

/// Which fields of an item are sent to the classifiers.
enum class TextFields { kHeadline, kHeadlineAndSummary };

std::string ItemText(const NewsItem& item, TextFields fields);

struct StockFilterOptions {
  double threshold = 0.5;
  std::string stock_label = "stock market report";
  std::string relation_label = "business relationship news";
  std::string hypothesis_template = "This news is a {}.";
  TextFields text = TextFields::kHeadline;
  int workers = 1;
  FailurePolicy on_failure = FailurePolicy::kFailFast;
};

struct FilterResult {
  Corpus kept;
  Corpus dropped;
  /// Items whose classification failed under FailurePolicy::kSkip. They are
  /// in neither partition.
  std::vector<ItemFailure> failures;
};

/// Drops an item iff the stock label ranks first with score >= threshold.
/// Under kFailFast a backend failure throws PipelineError carrying the item
/// id; a replay miss always throws DeterminismError.
FilterResult FilterStockNews(const Corpus& corpus, const ZscBackend& zsc,
                             const StockFilterOptions& options = {});

}  // namespace signet

#endif  // SIGNET_INGESTION_H_
