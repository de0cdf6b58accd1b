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

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include <gtest/gtest.h>

#include "signet/error.h"
#include "signet/pipeline.h"
#include "test_util.h"

namespace signet {
namespace {

namespace fs = std::filesystem;
using test::ScratchDir;

// Every output except report.json, which carries wall-clock stage timings.
std::map<std::string, std::string> Outputs(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "report.json") continue;
    files[fs::relative(entry.path(), dir).generic_string()] = ReadFile(entry.path());
  }
  return files;
}

RunConfig RecordConfig(const ScratchDir& scratch) {
  RunConfig config = test::BundleConfig(scratch / "out");
  config.fixtures = scratch / "fixtures.jsonl";
  for (const char* cap : {"ner", "zsc", "llm"}) {
    config.Set(std::string(cap) + ".endpoint", std::string("scripted://") + cap,
               scratch.path());
  }
  return config;
}

TEST(ConfigText, CommentsBlanksAndErrors) {
  const auto pairs = ParseConfigText("# header\n\n  tau = 0.25  # trailing\nwindow=7d\n");
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], std::make_pair(std::string("tau"), std::string("0.25")));
  EXPECT_EQ(pairs[1], std::make_pair(std::string("window"), std::string("7d")));
  try {
    ParseConfigText("tau = 0.1\nno equals sign here\n");
    FAIL() << "expected UsageError";
  } catch (const UsageError& e) {
    EXPECT_EQ(e.field(), "config");
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ConfigText, RelativePathsResolveAgainstConfigFile) {
  const RunConfig config = LoadRunConfig(test::BundleDir() / "run.conf");
  EXPECT_EQ(fs::weakly_canonical(config.corpus),
            fs::weakly_canonical(test::BundleDir() / "corpus.jsonl"));
  EXPECT_EQ(fs::weakly_canonical(config.alias_table),
            fs::weakly_canonical(test::SourceDir() / "data" / "aliases.json"));
  EXPECT_EQ(config.mode, BackendMode::kReplay);
  EXPECT_EQ(config.pairing, PairingMode::kAnchored);
  EXPECT_FALSE(config.include_unresolved);
}

TEST(ConfigText, BadValuesNameTheKey) {
  RunConfig config;
  auto field_of = [&](const std::string& key, const std::string& value) {
    try {
      config.Set(key, value, ".");
    } catch (const UsageError& e) {
      return e.field();
    }
    return std::string("<accepted>");
  };
  EXPECT_EQ(field_of("colour", "blue"), "colour");
  EXPECT_EQ(field_of("classes", "5"), "classes");
  EXPECT_EQ(field_of("mode", "dry-run"), "mode");
  EXPECT_EQ(field_of("network_methods", "zsc,oracle"), "network_methods");
  EXPECT_EQ(field_of("event_date", "last tuesday"), "event_date");
  EXPECT_EQ(field_of("llm.colour", "x"), "llm.colour");
  EXPECT_EQ(field_of("tau", "0.3"), "<accepted>");
}

TEST(ConfigValidate, NamesTheFirstBadField) {
  ScratchDir scratch;
  auto field_of = [](const RunConfig& c) {
    try {
      c.Validate();
    } catch (const UsageError& e) {
      return e.field();
    }
    return std::string("<valid>");
  };
  RunConfig config = test::BundleConfig(scratch / "out");
  EXPECT_EQ(field_of(config), "<valid>");

  RunConfig missing = config;
  missing.alias_table = scratch / "nope.json";
  EXPECT_EQ(field_of(missing), "alias_table");
  missing = config;
  missing.fixtures = scratch / "nope.jsonl";
  EXPECT_EQ(field_of(missing), "fixtures");
  missing = config;
  missing.tau = 1.5;
  EXPECT_EQ(field_of(missing), "tau");
  missing = config;
  missing.workers = 0;
  EXPECT_EQ(field_of(missing), "workers");
  missing = config;
  missing.out_dir.clear();
  EXPECT_EQ(field_of(missing), "out");
}

TEST(ConfigDigest, StableAndSensitiveToOutputSettingsOnly) {
  const RunConfig a = test::BundleConfig("/tmp/a");
  const RunConfig b = test::BundleConfig("/tmp/b");
  EXPECT_EQ(a.Digest(), b.Digest());
  EXPECT_EQ(a.Digest().size(), 64u);
  RunConfig c = a;
  c.tau = 0.2;
  EXPECT_NE(a.Digest(), c.Digest());
  c = a;
  c.classes = ClassSet::kFour;
  EXPECT_NE(a.Digest(), c.Digest());
}

TEST(ConfigEnv, FileSettingsOverrideEnvironment) {
  ::setenv("SIGNET_LLM_MODEL", "env-model", 1);
  ::setenv("SIGNET_NER_ENDPOINT", "http://env.example:9/ner", 1);
  RunConfig config;
  EXPECT_EQ(config.llm.model_id, "env-model");
  EXPECT_EQ(config.ner.endpoint, "http://env.example:9/ner");
  config.Set("llm.model", "file-model", ".");
  EXPECT_EQ(config.llm.model_id, "file-model");
  ::unsetenv("SIGNET_LLM_MODEL");
  ::unsetenv("SIGNET_NER_ENDPOINT");
  EXPECT_NE(RunConfig().llm.model_id, "env-model");
}

TEST(Pipeline, ReplayBundle) {
  ScratchDir scratch;
  RunArtifacts artifacts;
  const RunReport report = RunPipeline(test::BundleConfig(scratch / "out"), {}, &artifacts);
  EXPECT_EQ(report.exit_code, 0);
  EXPECT_TRUE(report.failures.empty());
  EXPECT_EQ(report.counts.at("items"), 4u);
  EXPECT_EQ(report.counts.at("zsc_observations"), 8u);
  EXPECT_EQ(report.counts.at("llm_explanations"), 10u);
  EXPECT_EQ(report.counts.at("edges"), 5u);
  EXPECT_EQ(report.counts.at("zsc_transport_attempts"), 0u);
  for (const char* name : {"observations.jsonl", "explanations.jsonl", "summaries.jsonl",
                           "snapshot.json", "snapshot.dot", "snapshot.graphml",
                           "snapshots.jsonl", "diff.json", "report.json"}) {
    EXPECT_TRUE(fs::exists(scratch / "out" / name)) << name;
  }
  const auto report_json = nlohmann::json::parse(ReadFile(scratch / "out" / "report.json"));
  EXPECT_EQ(report_json["config_digest"], report.config_digest);
  EXPECT_EQ(report_json["exit_code"], 0);
  EXPECT_EQ(ReadFile(scratch / "out" / "snapshot.json"),
            ReadFile(test::GoldenDir() / "headlines.json"));
}

TEST(Pipeline, ReplayIsRepeatableAndWorkerInvariant) {
  ScratchDir scratch;
  RunConfig config = test::BundleConfig(scratch / "one");
  RunPipeline(config);
  config.out_dir = scratch / "two";
  config.workers = 4;
  RunPipeline(config);
  EXPECT_EQ(Outputs(scratch / "one"), Outputs(scratch / "two"));
}

TEST(Pipeline, RecordThenReplayIsByteIdentical) {
  ScratchDir scratch;
  RunConfig config = RecordConfig(scratch);
  RunEnvironment env;
  env.transport = test::BundleScript();
  const RunReport recorded = RecordPipeline(config, env);
  EXPECT_EQ(recorded.exit_code, 0);
  EXPECT_GT(recorded.counts.at("zsc_transport_attempts"), 0u);
  const std::string fixtures = ReadFile(config.fixtures);

  RunConfig replay = config;
  replay.mode = BackendMode::kReplay;
  replay.out_dir = scratch / "replayed";
  const RunReport replayed = RunPipeline(replay);
  EXPECT_EQ(replayed.exit_code, 0);
  EXPECT_EQ(replayed.counts.at("zsc_transport_attempts"), 0u);
  EXPECT_EQ(Outputs(scratch / "out"), Outputs(scratch / "replayed"));
  // Replay never writes to the store.
  EXPECT_EQ(ReadFile(config.fixtures), fixtures);
  // The freshly recorded bundle reproduces the shipped one.
  ScratchDir shipped;
  RunPipeline(test::BundleConfig(shipped / "out"));
  EXPECT_EQ(Outputs(scratch / "replayed"), Outputs(shipped / "out"));
}

TEST(Pipeline, RecordingAgainIsAppendOnly) {
  ScratchDir scratch;
  RunConfig config = RecordConfig(scratch);
  RunEnvironment env;
  env.transport = test::BundleScript();
  RecordPipeline(config, env);
  const std::string first = ReadFile(config.fixtures);
  auto transport = test::BundleScript();
  env.transport = transport;
  RecordPipeline(config, env);
  EXPECT_EQ(transport->calls(), 0u);
  EXPECT_EQ(ReadFile(config.fixtures), first);
}

TEST(Pipeline, ReplayMissIsFatal) {
  ScratchDir scratch;
  RunConfig config = test::BundleConfig(scratch / "out");
  WriteFile(scratch / "corpus.jsonl",
            ReadFile(config.corpus) +
                R"({"headline":"Oracle sues Amazon over cloud contract","summary":null,"published_at":)"
                R"("2021-04-20T09:00:00Z","source":"test","url":"https://example.test/x","tickers":[]})"
                "\n");
  config.corpus = scratch / "corpus.jsonl";
  EXPECT_THROW(RunPipeline(config), DeterminismError);
  config.on_failure = FailurePolicy::kSkip;
  EXPECT_THROW(RunPipeline(config), DeterminismError);
}

TEST(Pipeline, SkippedFailuresExitTwo) {
  ScratchDir scratch;
  RunConfig config = RecordConfig(scratch);
  config.mode = BackendMode::kLive;
  config.fixtures.clear();
  config.on_failure = FailurePolicy::kSkip;
  config.ner.max_retries = 0;
  config.zsc.max_retries = 0;
  config.llm.max_retries = 0;
  auto transport = test::BundleScript();
  // The first call (a stock-filter request) fails permanently.
  transport->InjectFailures(1, /*retriable=*/false, 400);
  RunEnvironment env;
  env.transport = transport;
  env.sleeper = [](std::chrono::milliseconds) {};
  const RunReport report = RunPipeline(config, env);
  EXPECT_EQ(report.exit_code, 2);
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.counts.at("items_kept"), 3u);
  const auto json = nlohmann::json::parse(ReadFile(scratch / "out" / "report.json"));
  EXPECT_EQ(json["exit_code"], 2);
  EXPECT_EQ(json["failures"].size(), 1u);
}

TEST(Pipeline, UnreachableEndpointNamesCapability) {
  ScratchDir scratch;
  RunConfig config = test::BundleConfig(scratch / "out");
  config.mode = BackendMode::kLive;
  config.fixtures.clear();
  config.stock_filter = false;
  for (BackendConfig* backend : {&config.ner, &config.zsc, &config.llm}) {
    backend->endpoint = "http://127.0.0.1:1/infer";
    backend->max_retries = 1;
    backend->timeout = std::chrono::milliseconds(500);
  }
  RunEnvironment env;
  env.sleeper = [](std::chrono::milliseconds) {};
  try {
    RunPipeline(config, env);
    FAIL() << "expected a fatal error";
  } catch (const PipelineError& e) {
    EXPECT_NE(std::string(e.what()).find("ner backend"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace signet
