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

// signet: build signed business networks from news headlines.
//
// Exit status: 0 on success, 2 when some items failed under the skip policy,
// 1 on any fatal or usage error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "signet/balance.h"
#include "signet/encoding.h"
#include "signet/entities.h"
#include "signet/error.h"
#include "signet/explanation.h"
#include "signet/ingestion.h"
#include "signet/network.h"
#include "signet/pipeline.h"
#include "signet/relations.h"

namespace {

using signet::RunConfig;

struct GlobalFlags {
  std::string config;
  std::string mode;
  std::string out;
  bool quiet = false;
  std::vector<std::string> settings;
};

// Defaults, then the config file, then --set, then explicit flags.
RunConfig BuildConfig(const GlobalFlags& flags,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig config;
  if (!flags.config.empty()) config = signet::LoadRunConfig(flags.config);
  const auto cwd = std::filesystem::current_path();
  for (const auto& s : flags.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw signet::UsageError("--set", "expected key=value");
    config.Set(std::string(signet::TrimWhitespace(s.substr(0, eq))),
               std::string(signet::TrimWhitespace(s.substr(eq + 1))), cwd);
  }
  for (const auto& [key, value] : overrides) {
    if (!value.empty()) config.Set(key, value, cwd);
  }
  if (!flags.mode.empty()) config.Set("mode", flags.mode, cwd);
  if (!flags.out.empty()) config.Set("out", flags.out, cwd);
  return config;
}

// Where a stage command writes: a file under --out when given, else stdout.
void Emit(const GlobalFlags& flags, const std::string& file_name,
          const std::string& content) {
  if (flags.out.empty()) {
    std::cout << content;
    return;
  }
  const auto path = std::filesystem::path(flags.out) / file_name;
  signet::WriteFile(path, content);
  if (!flags.quiet) std::cerr << "wrote " << path.string() << "\n";
}

void RequireBackends(const RunConfig& config, bool ner, bool zsc, bool llm) {
  if (config.mode == signet::BackendMode::kReplay) {
    if (config.fixtures.empty()) {
      throw signet::UsageError("fixtures", "required in replay mode");
    }
    if (!std::filesystem::exists(config.fixtures)) {
      throw signet::UsageError("fixtures", "no such file: " + config.fixtures.string());
    }
  }
  if (config.mode == signet::BackendMode::kRecord && config.fixtures.empty()) {
    throw signet::UsageError("fixtures", "required in record mode");
  }
  auto check = [&](bool needed, signet::Capability cap, signet::BackendConfig b) {
    if (!needed) return;
    b.mode = config.mode;
    b.Validate(cap);
  };
  check(ner, signet::Capability::kNer, config.ner);
  check(zsc, signet::Capability::kZsc, config.zsc);
  check(llm, signet::Capability::kLlm, config.llm);
}

signet::Corpus LoadCorpusFor(const RunConfig& config) {
  if (config.corpus.empty()) throw signet::UsageError("corpus", "must be set");
  return signet::LoadCorpus(config.corpus, config.on_parse_error).corpus;
}

signet::AliasTable LoadTableFor(const RunConfig& config) {
  if (config.alias_table.empty()) throw signet::UsageError("alias_table", "must be set");
  if (!std::filesystem::exists(config.alias_table)) {
    throw signet::UsageError("alias_table",
                             "no such file: " + config.alias_table.string());
  }
  return signet::AliasTable::Load(config.alias_table);
}

// Reads one snapshot from a JSON file, or line `index` of a JSON-lines file.
signet::NetworkSnapshot LoadSnapshot(const std::string& path, std::size_t index) {
  const std::string text = signet::ReadFile(path);
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!signet::TrimWhitespace(line).empty()) lines.push_back(line);
  }
  if (lines.empty()) throw signet::UsageError("snapshot", path + " is empty");
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || lines.size() > 1 && index > 0) {
    if (index >= lines.size()) {
      throw signet::UsageError("index", "snapshot file has " +
                                            std::to_string(lines.size()) + " entries");
    }
    doc = nlohmann::json::parse(lines[index]);
  }
  return signet::SnapshotFromJson(doc);
}

std::string Lines(const std::vector<nlohmann::json>& rows) {
  std::string out;
  for (const auto& r : rows) out += signet::CanonicalJson(r) + "\n";
  return out;
}

void PrintReport(const signet::RunReport& report, const GlobalFlags& flags,
                 const RunConfig& config) {
  if (flags.quiet) return;
  std::cerr << "run " << report.config_digest.substr(0, 12) << " ("
            << signet::BackendModeName(report.mode) << ")";
  for (const char* key : {"items", "items_kept", "zsc_observations",
                          "llm_explanations", "edges"}) {
    auto it = report.counts.find(key);
    if (it != report.counts.end()) std::cerr << " " << key << "=" << it->second;
  }
  std::cerr << " failures=" << report.failures.size() << "\n";
  std::cerr << "outputs in " << config.out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build signed business networks from news headlines."};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config, "key = value configuration file");
  app.add_option("--mode", flags.mode, "live, record or replay")
      ->check(CLI::IsMember({"live", "record", "replay"}));
  app.add_option("--out", flags.out, "output directory");
  app.add_flag("--quiet", flags.quiet, "suppress progress messages");
  app.add_option("--set", flags.settings, "override a configuration key (key=value)");

  std::string corpus, table, fixtures, classes, context, pairing, summaries;
  std::string observations, window, stride, before, after, snapshot, format;
  std::string pair, on_error, event_date, workers, on_failure;
  std::string tau;
  std::size_t index = 0;
  bool include_isolated = false;

  auto* ingest = app.add_subcommand("ingest", "validate, deduplicate and sort a corpus");
  ingest->add_option("--corpus", corpus)->required();
  ingest->add_option("--on-error", on_error)->check(CLI::IsMember({"fail", "skip"}));

  auto* filter = app.add_subcommand("filter", "drop stock-market reports");
  filter->add_option("--corpus", corpus)->required();
  filter->add_option("--fixtures", fixtures);

  auto* extract = app.add_subcommand("extract", "classify entity pairs with the zero-shot model");
  extract->add_option("--corpus", corpus)->required();
  extract->add_option("--table", table)->required();
  extract->add_option("--fixtures", fixtures);
  extract->add_option("--classes", classes)->check(CLI::IsMember({"3", "4"}));
  extract->add_option("--context", context)->check(CLI::IsMember({"on", "off"}));
  extract->add_option("--pairing", pairing)->check(CLI::IsMember({"all", "anchored"}));

  auto* explain = app.add_subcommand("explain", "extract relations and rationales with the LLM");
  explain->add_option("--corpus", corpus)->required();
  explain->add_option("--table", table)->required();
  explain->add_option("--fixtures", fixtures);
  explain->add_option("--summaries", summaries)->check(CLI::IsMember({"on", "off"}));

  auto* build = app.add_subcommand("build", "aggregate observations into windowed snapshots");
  build->add_option("--observations", observations)->required();
  build->add_option("--window", window);
  build->add_option("--stride", stride);
  build->add_flag("--include-isolated", include_isolated);

  auto* diff = app.add_subcommand("diff", "compare two snapshots");
  diff->add_option("--before", before)->required();
  diff->add_option("--after", after)->required();
  diff->add_option("--tau", tau);

  auto* analyze = app.add_subcommand("analyze", "triad census and balance index");
  analyze->add_option("--snapshot", snapshot)->required();
  analyze->add_option("--index", index, "entry of a JSON-lines snapshot file");
  analyze->add_option("--tau", tau);

  auto* predict = app.add_subcommand("predict", "predict the sign of a missing edge");
  predict->add_option("--snapshot", snapshot)->required();
  predict->add_option("--index", index, "entry of a JSON-lines snapshot file");
  predict->add_option("--pair", pair, "a,b")->required();
  predict->add_option("--tau", tau);

  auto* export_cmd = app.add_subcommand("export", "render a snapshot");
  export_cmd->add_option("--snapshot", snapshot)->required();
  export_cmd->add_option("--index", index, "entry of a JSON-lines snapshot file");
  export_cmd->add_option("--format", format)->required()->check(
      CLI::IsMember({"json", "dot", "graphml"}));

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", corpus);
    cmd->add_option("--table", table);
    cmd->add_option("--fixtures", fixtures);
    cmd->add_option("--classes", classes)->check(CLI::IsMember({"3", "4"}));
    cmd->add_option("--event-date", event_date);
    cmd->add_option("--workers", workers);
    cmd->add_option("--on-failure", on_failure)->check(CLI::IsMember({"fail", "skip"}));
  };
  auto* run = app.add_subcommand("run", "end-to-end pipeline");
  add_run_options(run);
  auto* record = app.add_subcommand("record", "run against live backends, recording fixtures");
  add_run_options(record);

  auto* entities = app.add_subcommand("entities", "alias table tools");
  entities->require_subcommand(1);
  auto* validate = entities->add_subcommand("validate", "report alias conflicts");
  validate->add_option("--table", table)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::vector<std::pair<std::string, std::string>> overrides = {
        {"corpus", corpus},       {"alias_table", table},   {"fixtures", fixtures},
        {"classes", classes},     {"context", context},     {"pairing", pairing},
        {"summaries", summaries}, {"window", window},       {"stride", stride},
        {"tau", tau},             {"event_date", event_date}, {"workers", workers},
        {"on_failure", on_failure}, {"on_parse_error", on_error}};

    if (*ingest) {
      RunConfig config = BuildConfig(flags, overrides);
      const auto loaded = signet::LoadCorpus(config.corpus, config.on_parse_error);
      std::ostringstream out;
      signet::WriteCorpus(loaded.corpus, out);
      Emit(flags, "items.jsonl", out.str());
      if (!flags.quiet) {
        std::cerr << loaded.records << " records, " << loaded.corpus.size()
                  << " items, " << loaded.duplicates << " duplicates, "
                  << loaded.skipped << " skipped\n";
        for (const auto& d : loaded.diagnostics) std::cerr << "  " << d.message << "\n";
      }
      return loaded.skipped > 0 ? 2 : 0;
    }

    if (*filter || *extract || *explain) {
      RunConfig config = BuildConfig(flags, overrides);
      RequireBackends(config, /*ner=*/static_cast<bool>(*extract),
                      /*zsc=*/*filter || *extract, /*llm=*/static_cast<bool>(*explain));
      const signet::Corpus items = LoadCorpusFor(config);
      auto context_ = signet::OpenRunContext(config, {});
      const auto& gateway = context_.gateway;
      std::size_t failures = 0;
      if (*filter) {
        signet::StockFilterOptions options;
        options.threshold = config.stock_threshold;
        options.workers = config.workers;
        options.on_failure = config.on_failure;
        const auto result = signet::FilterStockNews(items, *gateway.zsc, options);
        std::ostringstream out;
        signet::WriteCorpus(result.kept, out);
        Emit(flags, "kept.jsonl", out.str());
        failures = result.failures.size();
        if (!flags.quiet) {
          std::cerr << result.kept.size() << " kept, " << result.dropped.size()
                    << " dropped\n";
        }
      } else if (*extract) {
        const auto table_ = LoadTableFor(config);
        signet::ZscPipelineOptions options;
        options.filter_stock_news = config.stock_filter;
        options.filter.threshold = config.stock_threshold;
        options.classes = config.classes;
        options.context = config.context;
        options.pairing = config.pairing;
        options.include_unresolved = config.include_unresolved;
        options.workers = config.workers;
        options.on_failure = config.on_failure;
        const auto result =
            signet::RunZscPipeline(items, table_, *gateway.ner, *gateway.zsc, options);
        std::ostringstream out;
        signet::WriteObservations(result.observations, out);
        Emit(flags, "observations.jsonl", out.str());
        failures = result.failures.size();
        if (!flags.quiet) {
          std::cerr << result.observations.size() << " observations from "
                    << result.filter.kept.size() << " items\n";
        }
      } else {
        const auto table_ = LoadTableFor(config);
        signet::LlmPipelineOptions options;
        options.summaries = config.summaries;
        options.score.confidence = config.llm_confidence;
        options.include_unresolved = config.include_unresolved;
        options.workers = config.workers;
        options.on_failure = config.on_failure;
        const auto result = signet::RunLlmPipeline(items, table_, *gateway.llm, options);
        std::ostringstream expl, sums, obs;
        signet::WriteExplanations(result.explanations, expl);
        Emit(flags, "explanations.jsonl", expl.str());
        if (!flags.out.empty()) {
          signet::WriteSummaries(result.summaries, sums);
          signet::WriteObservations(result.observations, obs);
          Emit(flags, "summaries.jsonl", sums.str());
          Emit(flags, "llm_observations.jsonl", obs.str());
        }
        failures = result.failures.size();
        if (!flags.quiet) {
          std::cerr << result.explanations.size() << " explanations, "
                    << result.diagnostics.size() << " diagnostics\n";
          for (const auto& d : result.diagnostics) {
            std::cerr << "  " << d.doc_id << ": " << d.message << "\n";
          }
        }
      }
      return failures > 0 ? 2 : 0;
    }

    if (*build) {
      RunConfig config = BuildConfig(flags, overrides);
      const auto obs = signet::ReadObservations(observations);
      const auto network = signet::BuildTemporal(obs, config.window, config.stride,
                                                 {include_isolated || config.include_isolated});
      std::vector<nlohmann::json> rows;
      for (const auto& s : network.snapshots) rows.push_back(signet::SnapshotToJson(s));
      Emit(flags, "snapshots.jsonl", Lines(rows));
      return 0;
    }

    if (*diff) {
      RunConfig config = BuildConfig(flags, overrides);
      const auto d = signet::DiffSnapshots(LoadSnapshot(before, 0), LoadSnapshot(after, 0),
                                           config.tau);
      Emit(flags, "diff.json", signet::CanonicalJson(signet::DiffToJson(d)) + "\n");
      return 0;
    }

    if (*analyze || *predict) {
      RunConfig config = BuildConfig(flags, overrides);
      const auto graph = signet::Discretize(LoadSnapshot(snapshot, index), config.tau);
      if (*analyze) {
        Emit(flags, "analysis.json",
             signet::CanonicalJson(signet::CensusToJson(signet::ComputeTriadCensus(graph))) +
                 "\n");
      } else {
        const auto comma = pair.find(',');
        if (comma == std::string::npos) throw signet::UsageError("pair", "expected a,b");
        std::optional<signet::EntityPair> p;
        try {
          p = signet::EntityPair::Of(pair.substr(0, comma), pair.substr(comma + 1));
        } catch (const signet::ArgumentError& e) {
          throw signet::UsageError("pair", e.what());
        }
        Emit(flags, "prediction.json",
             signet::CanonicalJson(
                 signet::PredictionToJson(signet::PredictEdgeSign(graph, *p))) +
                 "\n");
      }
      return 0;
    }

    if (*export_cmd) {
      const auto fmt = signet::ParseExportFormat(format);
      Emit(flags, "snapshot." + format,
           signet::ExportSnapshot(LoadSnapshot(snapshot, index), fmt));
      return 0;
    }

    if (*run || *record) {
      RunConfig config = BuildConfig(flags, overrides);
      const auto report = *record ? signet::RecordPipeline(config) : signet::RunPipeline(config);
      PrintReport(report, flags, config);
      return report.exit_code;
    }

    if (*validate) {
      const auto list = signet::AliasTable::ReadEntities(table);
      const auto conflicts = signet::ValidateAliasTable(list);
      for (const auto& c : conflicts) {
        std::cout << (c.kind == signet::AliasConflict::Kind::kId ? "duplicate id "
                                                                 : "alias conflict ")
                  << "'" << c.key << "': " << c.first_id << " vs " << c.second_id << "\n";
      }
      for (const auto& e : list) {
        if (!signet::IsValidEntityId(e.id)) std::cout << "invalid id '" << e.id << "'\n";
      }
      if (conflicts.empty()) {
        signet::AliasTable::FromEntities(list);  // throws on invalid ids
        if (!flags.quiet) std::cerr << list.size() << " entities, no conflicts\n";
        return 0;
      }
      return 1;
    }
  } catch (const signet::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
