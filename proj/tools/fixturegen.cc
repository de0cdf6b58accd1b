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

// Records a fixture bundle from a hand-written response script, exactly as
// `signet record` would against live servers.
//
//   signet_fixturegen --config data/fixtures/headlines/run.conf \
//       --script data/fixtures/headlines/script.json --out /tmp/headlines

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "signet/pipeline.h"
#include "testing/scripted_transport.h"

int main(int argc, char** argv) {
  CLI::App app{"Record replay fixtures from a response script."};
  std::string config_path, script_path, out, fixtures;
  app.add_option("--config", config_path)->required();
  app.add_option("--script", script_path)->required();
  app.add_option("--out", out, "output directory for the recording run");
  app.add_option("--fixtures", fixtures, "fixture file to append to");
  CLI11_PARSE(app, argc, argv);

  try {
    signet::RunConfig config = signet::LoadRunConfig(config_path);
    const auto cwd = std::filesystem::current_path();
    if (!out.empty()) config.Set("out", out, cwd);
    if (!fixtures.empty()) config.Set("fixtures", fixtures, cwd);
    for (const char* cap : {"ner", "zsc", "llm"}) {
      config.Set(std::string(cap) + ".endpoint", std::string("scripted://") + cap, cwd);
    }
    signet::RunEnvironment env;
    auto transport = signet::testing::ScriptedTransport::FromFile(script_path);
    env.transport = transport;
    env.sleeper = [](std::chrono::milliseconds) {};
    const auto report = signet::RecordPipeline(config, env);
    std::cerr << "recorded " << transport->calls() << " responses into "
              << config.fixtures.string() << "\n";
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
