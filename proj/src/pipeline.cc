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

#include "signet/pipeline.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <tuple>

#include "signet/encoding.h"
#include "signet/entities.h"
#include "signet/error.h"

namespace signet {
namespace {

bool ParseSwitch(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "yes" || value == "1") return true;
  if (value == "off" || value == "false" || value == "no" || value == "0") return false;
  throw UsageError(key, "expected on or off, got '" + value + "'");
}

long long ParseInteger(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(key, "expected an integer, got '" + value + "'");
  }
  return out;
}

double ParseReal(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw UsageError(key, "expected a number, got '" + value + "'");
  }
  return out;
}

Duration ParseDurationSetting(const std::string& key, const std::string& value) {
  const auto d = ParseDuration(value);
  if (!d) throw UsageError(key, "expected a duration such as 30d, got '" + value + "'");
  return *d;
}

std::filesystem::path ResolvePath(const std::string& value,
                                  const std::filesystem::path& base_dir) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

BackendConfig* BackendFor(RunConfig& config, std::string_view name) {
  if (name == "ner") return &config.ner;
  if (name == "zsc") return &config.zsc;
  if (name == "llm") return &config.llm;
  return nullptr;
}

nlohmann::json BackendToJson(const BackendConfig& b) {
  // Transport tuning does not change outputs, so only identity is hashed.
  return {{"endpoint", b.endpoint}, {"model", b.model_id}};
}

std::string MethodList(const std::vector<ExtractionMethod>& methods) {
  std::string out;
  for (auto m : methods) {
    if (!out.empty()) out += ",";
    out += MethodName(m);
  }
  return out;
}

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& timings) : timings_(timings) {}

  template <typename Fn>
  auto Time(const std::string& stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      StageClock* self;
      std::string stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const std::chrono::duration<double, std::milli> ms =
            std::chrono::steady_clock::now() - start;
        self->timings_.push_back({stage, ms.count()});
      }
    } record{this, stage, start};
    return fn();
  }

 private:
  std::vector<StageTiming>& timings_;
};

std::string JsonLines(const std::vector<nlohmann::json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += CanonicalJson(r);
    out += '\n';
  }
  return out;
}

}  // namespace

void RunConfig::Set(const std::string& key, const std::string& value,
                    const std::filesystem::path& base_dir) {
  if (key == "corpus") {
    corpus = ResolvePath(value, base_dir);
  } else if (key == "alias_table") {
    alias_table = ResolvePath(value, base_dir);
  } else if (key == "fixtures") {
    fixtures = ResolvePath(value, base_dir);
  } else if (key == "out") {
    out_dir = ResolvePath(value, base_dir);
  } else if (key == "mode") {
    const auto m = ParseBackendMode(value);
    if (!m) throw UsageError(key, "expected live, record or replay");
    mode = *m;
  } else if (key == "zsc") {
    run_zsc = ParseSwitch(key, value);
  } else if (key == "llm") {
    run_llm = ParseSwitch(key, value);
  } else if (key == "stock_filter") {
    stock_filter = ParseSwitch(key, value);
  } else if (key == "stock_threshold") {
    stock_threshold = ParseReal(key, value);
  } else if (key == "classes") {
    if (value == "3") {
      classes = ClassSet::kThree;
    } else if (value == "4") {
      classes = ClassSet::kFour;
    } else {
      throw UsageError(key, "expected 3 or 4");
    }
  } else if (key == "context") {
    context = ParseSwitch(key, value);
  } else if (key == "pairing") {
    if (value == "all") {
      pairing = PairingMode::kAll;
    } else if (value == "anchored") {
      pairing = PairingMode::kAnchored;
    } else {
      throw UsageError(key, "expected all or anchored");
    }
  } else if (key == "include_unresolved") {
    include_unresolved = ParseSwitch(key, value);
  } else if (key == "text") {
    if (value == "headline") {
      text = TextFields::kHeadline;
    } else if (value == "headline+summary") {
      text = TextFields::kHeadlineAndSummary;
    } else {
      throw UsageError(key, "expected headline or headline+summary");
    }
  } else if (key == "llm_confidence") {
    llm_confidence = ParseReal(key, value);
  } else if (key == "summaries") {
    summaries = ParseSwitch(key, value);
  } else if (key == "window") {
    window = ParseDurationSetting(key, value);
  } else if (key == "stride") {
    stride = ParseDurationSetting(key, value);
  } else if (key == "tau") {
    tau = ParseReal(key, value);
  } else if (key == "include_isolated") {
    include_isolated = ParseSwitch(key, value);
  } else if (key == "network_methods") {
    std::vector<ExtractionMethod> methods;
    std::stringstream in(value);
    std::string part;
    while (std::getline(in, part, ',')) {
      const std::string name(TrimWhitespace(part));
      const auto m = name == "zsc"   ? std::optional(ExtractionMethod::kZsc)
                     : name == "llm" ? std::optional(ExtractionMethod::kLlm)
                                     : std::nullopt;
      if (!m) throw UsageError(key, "unknown method '" + name + "'");
      if (std::find(methods.begin(), methods.end(), *m) == methods.end()) {
        methods.push_back(*m);
      }
    }
    std::sort(methods.begin(), methods.end());
    network_methods = std::move(methods);
  } else if (key == "event_date") {
    if (value.empty()) {
      event_date.reset();
    } else {
      event_date = ParseRfc3339(value);
      if (!event_date) throw UsageError(key, "not an RFC-3339 timestamp");
    }
  } else if (key == "workers") {
    workers = static_cast<int>(ParseInteger(key, value));
  } else if (key == "on_parse_error") {
    if (value != "fail" && value != "skip") throw UsageError(key, "expected fail or skip");
    on_parse_error = value == "fail" ? OnError::kFail : OnError::kSkip;
  } else if (key == "on_failure") {
    if (value != "fail" && value != "skip") throw UsageError(key, "expected fail or skip");
    on_failure = value == "fail" ? FailurePolicy::kFailFast : FailurePolicy::kSkip;
  } else if (const auto dot = key.find('.'); dot != std::string::npos) {
    BackendConfig* backend = BackendFor(*this, std::string_view(key).substr(0, dot));
    const std::string field = key.substr(dot + 1);
    if (!backend) throw UsageError(key, "unknown setting");
    if (field == "endpoint") {
      backend->endpoint = value;
    } else if (field == "model") {
      backend->model_id = value;
    } else if (field == "timeout_ms") {
      backend->timeout = std::chrono::milliseconds(ParseInteger(key, value));
    } else if (field == "max_retries") {
      backend->max_retries = static_cast<int>(ParseInteger(key, value));
    } else if (field == "max_in_flight") {
      backend->max_in_flight = static_cast<int>(ParseInteger(key, value));
    } else if (field == "jitter_seed") {
      backend->jitter_seed = static_cast<std::uint64_t>(ParseInteger(key, value));
    } else if (field == "backoff_base_ms") {
      backend->backoff.base = std::chrono::milliseconds(ParseInteger(key, value));
    } else if (field == "backoff_cap_ms") {
      backend->backoff.cap = std::chrono::milliseconds(ParseInteger(key, value));
    } else {
      throw UsageError(key, "unknown setting");
    }
  } else {
    throw UsageError(key, "unknown setting");
  }
}

void RunConfig::Validate() const {
  if (corpus.empty()) throw UsageError("corpus", "must be set");
  if (alias_table.empty()) throw UsageError("alias_table", "must be set");
  if (!std::filesystem::exists(alias_table)) {
    throw UsageError("alias_table", "no such file: " + alias_table.string());
  }
  if (out_dir.empty()) throw UsageError("out", "must be set");
  if (mode == BackendMode::kReplay) {
    if (fixtures.empty()) throw UsageError("fixtures", "required in replay mode");
    if (!std::filesystem::exists(fixtures)) {
      throw UsageError("fixtures", "no such file: " + fixtures.string());
    }
  }
  if (mode == BackendMode::kRecord && fixtures.empty()) {
    throw UsageError("fixtures", "required in record mode");
  }
  if (!(stock_threshold >= 0.0 && stock_threshold <= 1.0)) {
    throw UsageError("stock_threshold", "must lie in [0,1]");
  }
  if (!(llm_confidence >= 0.0 && llm_confidence <= 1.0)) {
    throw UsageError("llm_confidence", "must lie in [0,1]");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) throw UsageError("tau", "must lie in [0,1]");
  if (window <= Duration::zero()) throw UsageError("window", "must be positive");
  if (stride <= Duration::zero()) throw UsageError("stride", "must be positive");
  if (workers < 1) throw UsageError("workers", "must be >= 1");
  if (network_methods.empty()) throw UsageError("network_methods", "must name a method");
  const bool need_ner = run_zsc;
  const bool need_zsc = run_zsc || stock_filter;
  const bool need_llm = run_llm;
  for (auto [cap, backend, needed] :
       {std::tuple{Capability::kNer, &ner, need_ner},
        std::tuple{Capability::kZsc, &zsc, need_zsc},
        std::tuple{Capability::kLlm, &llm, need_llm}}) {
    if (!needed) continue;
    BackendConfig effective = *backend;
    effective.mode = mode;
    effective.Validate(cap);
  }
}

nlohmann::json RunConfig::ToJson() const {
  return {
      {"corpus", corpus.generic_string()},
      {"alias_table", alias_table.generic_string()},
      {"fixtures", fixtures.generic_string()},
      {"mode", std::string(BackendModeName(mode))},
      {"ner", BackendToJson(ner)},
      {"zsc", BackendToJson(zsc)},
      {"llm", BackendToJson(llm)},
      {"run_zsc", run_zsc},
      {"run_llm", run_llm},
      {"stock_filter", stock_filter},
      {"stock_threshold", stock_threshold},
      {"classes", classes == ClassSet::kThree ? 3 : 4},
      {"context", context},
      {"pairing", pairing == PairingMode::kAll ? "all" : "anchored"},
      {"include_unresolved", include_unresolved},
      {"text", text == TextFields::kHeadline ? "headline" : "headline+summary"},
      {"llm_confidence", llm_confidence},
      {"summaries", summaries},
      {"window", FormatDuration(window)},
      {"stride", FormatDuration(stride)},
      {"tau", tau},
      {"include_isolated", include_isolated},
      {"network_methods", MethodList(network_methods)},
      {"event_date", event_date ? nlohmann::json(FormatRfc3339(*event_date))
                                : nlohmann::json(nullptr)},
      {"on_parse_error", on_parse_error == OnError::kFail ? "fail" : "skip"},
      {"on_failure", on_failure == FailurePolicy::kFailFast ? "fail" : "skip"},
  };
}

std::string RunConfig::Digest() const { return Sha256Hex(CanonicalJson(ToJson())); }

std::vector<std::pair<std::string, std::string>> ParseConfigText(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (TrimWhitespace(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config", "line " + std::to_string(line_no) +
                                     ": expected key = value");
    }
    std::string key(TrimWhitespace(line.substr(0, eq)));
    std::string value(TrimWhitespace(line.substr(eq + 1)));
    if (key.empty()) {
      throw UsageError("config", "line " + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  RunConfig config;
  const auto base = path.parent_path();
  for (const auto& [key, value] : ParseConfigText(ReadFile(path))) {
    config.Set(key, value, base);
  }
  return config;
}

nlohmann::json RunReport::ToJson() const {
  nlohmann::json failure_list = nlohmann::json::array();
  for (const auto& f : failures) {
    failure_list.push_back(
        {{"item_id", f.item_id}, {"stage", f.stage}, {"message", f.message}});
  }
  nlohmann::json stage_ms = nlohmann::json::object();
  for (const auto& t : timings) stage_ms[t.stage] = t.milliseconds;
  return {{"config_digest", config_digest},
          {"mode", std::string(BackendModeName(mode))},
          {"counts", counts},
          {"failures", std::move(failure_list)},
          {"stage_ms", std::move(stage_ms)},
          {"exit_code", exit_code}};
}

RunContext OpenRunContext(const RunConfig& config, const RunEnvironment& env) {
  RunContext context;
  switch (config.mode) {
    case BackendMode::kReplay:
      context.fixtures = FixtureStore::Open(config.fixtures, /*writable=*/false);
      break;
    case BackendMode::kRecord:
      context.fixtures = FixtureStore::Open(config.fixtures, /*writable=*/true);
      break;
    case BackendMode::kLive:
      context.fixtures = config.fixtures.empty()
                             ? FixtureStore::InMemory()
                             : FixtureStore::Open(config.fixtures, /*writable=*/false);
      break;
  }
  std::shared_ptr<Transport> transport = env.transport;
  if (!transport && config.mode != BackendMode::kReplay) {
    transport = MakeHttpTransport();
  }
  auto with_mode = [&](BackendConfig b) {
    b.mode = config.mode;
    return b;
  };
  context.gateway = Gateway::Create(with_mode(config.ner), with_mode(config.zsc),
                                    with_mode(config.llm), std::move(transport),
                                    context.fixtures, env.sleeper);
  return context;
}

std::vector<RelationObservation> NetworkObservations(
    const RunConfig& config, const std::vector<RelationObservation>& all) {
  std::vector<RelationObservation> out;
  for (const auto& o : all) {
    if (std::find(config.network_methods.begin(), config.network_methods.end(),
                  o.method) != config.network_methods.end()) {
      out.push_back(o);
    }
  }
  return out;
}

std::pair<TimeWindow, TimeWindow> EventWindows(Timestamp event, Duration length) {
  return {TimeWindow{event - length, event}, TimeWindow{event, event + length}};
}

RunReport RunPipeline(const RunConfig& config, const RunEnvironment& env,
                      RunArtifacts* artifacts) {
  config.Validate();
  RunArtifacts local;
  RunArtifacts& out = artifacts ? *artifacts : local;
  RunReport report;
  report.config_digest = config.Digest();
  report.mode = config.mode;
  StageClock clock(report.timings);
  auto& counts = report.counts;

  const LoadResult loaded =
      clock.Time("ingest", [&] { return LoadCorpus(config.corpus, config.on_parse_error); });
  out.corpus = loaded.corpus;
  counts["records"] = loaded.records;
  counts["records_skipped"] = loaded.skipped;
  counts["duplicates"] = loaded.duplicates;
  counts["items"] = loaded.corpus.size();
  for (const auto& d : loaded.diagnostics) {
    report.failures.push_back({"line " + std::to_string(d.line), "ingest", d.message});
  }

  const AliasTable table = AliasTable::Load(config.alias_table);
  RunContext context = OpenRunContext(config, env);
  const Gateway& gateway = context.gateway;

  out.filter = clock.Time("filter", [&] {
    if (!config.stock_filter) return FilterResult{loaded.corpus, {}, {}};
    StockFilterOptions options;
    options.threshold = config.stock_threshold;
    options.text = config.text;
    options.workers = config.workers;
    options.on_failure = config.on_failure;
    return FilterStockNews(loaded.corpus, *gateway.zsc, options);
  });
  counts["items_kept"] = out.filter.kept.size();
  counts["items_dropped"] = out.filter.dropped.size();
  for (const auto& f : out.filter.failures) report.failures.push_back(f);

  if (config.run_zsc) {
    const ZscPipelineResult zsc = clock.Time("extract", [&] {
      ZscPipelineOptions options;
      options.filter_stock_news = false;
      options.text = config.text;
      options.classes = config.classes;
      options.context = config.context;
      options.include_unresolved = config.include_unresolved;
      options.pairing = config.pairing;
      options.workers = config.workers;
      options.on_failure = config.on_failure;
      return RunZscPipeline(out.filter.kept, table, *gateway.ner, *gateway.zsc, options);
    });
    counts["mentions"] = zsc.mentions;
    counts["pair_capacity"] = zsc.pair_capacity;
    counts["zsc_observations"] = zsc.observations.size();
    for (const auto& f : zsc.failures) report.failures.push_back(f);
    out.observations = zsc.observations;
  }

  if (config.run_llm) {
    out.llm = clock.Time("explain", [&] {
      LlmPipelineOptions options;
      options.text = config.text;
      options.score.confidence = config.llm_confidence;
      options.summaries = config.summaries;
      options.include_unresolved = config.include_unresolved;
      options.workers = config.workers;
      options.on_failure = config.on_failure;
      return RunLlmPipeline(out.filter.kept, table, *gateway.llm, options);
    });
    counts["llm_explanations"] = out.llm.explanations.size();
    counts["llm_observations"] = out.llm.observations.size();
    counts["llm_diagnostics"] = out.llm.diagnostics.size();
    counts["summaries"] = out.llm.summaries.size();
    for (const auto& f : out.llm.failures) report.failures.push_back(f);
    out.observations.insert(out.observations.end(), out.llm.observations.begin(),
                            out.llm.observations.end());
  }
  counts["observations"] = out.observations.size();

  clock.Time("network", [&] {
    const auto observations = NetworkObservations(config, out.observations);
    const SnapshotOptions options{config.include_isolated};
    TimeWindow covering{Timestamp{}, Timestamp{} + config.window};
    if (auto w = CoveringWindow(observations)) covering = *w;
    out.snapshot = BuildSnapshot(observations, covering, options);
    out.temporal = BuildTemporal(observations, config.window, config.stride, options);
    if (config.event_date) {
      const auto [before, after] = EventWindows(*config.event_date, config.window);
      out.split = std::pair{BuildSnapshot(observations, before, options),
                            BuildSnapshot(observations, after, options)};
      out.diff = DiffSnapshots(out.split->first, out.split->second, config.tau);
    }
    counts["network_observations"] = observations.size();
  });
  counts["nodes"] = out.snapshot.nodes.size();
  counts["edges"] = out.snapshot.edges.size();
  counts["snapshots"] = out.temporal.snapshots.size();
  if (out.diff) {
    counts["diff_added"] = out.diff->added.size();
    counts["diff_removed"] = out.diff->removed.size();
    counts["diff_sign_flips"] = out.diff->sign_flips.size();
  }

  const auto add_stats = [&](const std::string& name, const RequestExecutor& e) {
    const auto s = e.stats();
    counts[name + "_transport_attempts"] = s.transport_attempts;
    counts[name + "_retries"] = s.retries;
    counts[name + "_fixture_hits"] = s.fixture_hits;
  };
  add_stats("ner", gateway.ner->executor());
  add_stats("zsc", gateway.zsc->executor());
  add_stats("llm", gateway.llm->executor());

  clock.Time("write", [&] {
    const auto& dir = config.out_dir;
    std::ostringstream obs, expl, sums;
    WriteObservations(out.observations, obs);
    WriteExplanations(out.llm.explanations, expl);
    WriteSummaries(out.llm.summaries, sums);
    WriteFile(dir / "observations.jsonl", obs.str());
    WriteFile(dir / "explanations.jsonl", expl.str());
    WriteFile(dir / "summaries.jsonl", sums.str());
    std::vector<nlohmann::json> diagnostics;
    for (const auto& d : out.llm.diagnostics) {
      diagnostics.push_back({{"doc_id", d.doc_id}, {"message", d.message}, {"raw", d.raw}});
    }
    WriteFile(dir / "diagnostics.jsonl", JsonLines(diagnostics));
    WriteFile(dir / "snapshot.json", ExportSnapshot(out.snapshot, ExportFormat::kJson));
    WriteFile(dir / "snapshot.dot", ExportSnapshot(out.snapshot, ExportFormat::kDot));
    WriteFile(dir / "snapshot.graphml",
              ExportSnapshot(out.snapshot, ExportFormat::kGraphMl));
    std::vector<nlohmann::json> snapshots;
    for (const auto& s : out.temporal.snapshots) snapshots.push_back(SnapshotToJson(s));
    WriteFile(dir / "snapshots.jsonl", JsonLines(snapshots));
    if (out.split) {
      WriteFile(dir / "before.json", ExportSnapshot(out.split->first, ExportFormat::kJson));
      WriteFile(dir / "after.json", ExportSnapshot(out.split->second, ExportFormat::kJson));
      WriteFile(dir / "diff.json", CanonicalJson(DiffToJson(*out.diff)) + "\n");
    }
  });

  report.exit_code = report.failures.empty() ? 0 : 2;
  WriteFile(config.out_dir / "report.json", report.ToJson().dump(2) + "\n");
  return report;
}

RunReport RecordPipeline(RunConfig config, const RunEnvironment& env,
                         RunArtifacts* artifacts) {
  config.mode = BackendMode::kRecord;
  config.on_failure = FailurePolicy::kFailFast;
  return RunPipeline(config, env, artifacts);
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << content;
  f.flush();
  if (!f) throw IoError("write failed on " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

}  // namespace signet
