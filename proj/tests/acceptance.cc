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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   signet_acceptance        run all criteria
//   signet_acceptance 4      run criterion 4 only

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "balance_oracle.h"
#include "signet/balance.h"
#include "signet/encoding.h"
#include "signet/error.h"
#include "signet/explanation.h"
#include "signet/network.h"
#include "signet/pipeline.h"
#include "test_util.h"

namespace signet {
namespace {

namespace fs = std::filesystem;
using test::ScratchDir;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

using Tuple = std::tuple<std::string, std::string, std::string, double>;

std::string Show(const Tuple& t) {
  std::ostringstream out;
  out << std::get<0>(t) << "-" << std::get<1>(t) << " " << std::get<2>(t) << " "
      << std::get<3>(t);
  return out.str();
}

// The published relation tuples for the four sample headlines.
std::vector<std::pair<std::string, Tuple>> PublishedZscTuples() {
  return {
      {test::kRow1, {"facebook", "tiktok", "negative", 0.98}},
      {test::kRow2, {"apple", "facebook", "negative", 0.95}},
      {test::kRow3, {"apple", "snap", "negative", 0.97}},
      {test::kRow3, {"apple", "facebook", "negative", 0.96}},
      {test::kRow3, {"apple", "google", "positive", 0.54}},
      {test::kRow4, {"apple", "google", "neutral", 0.46}},
      {test::kRow4, {"apple", "facebook", "negative", 0.70}},
      {test::kRow4, {"facebook", "google", "negative", 0.64}},
  };
}

Outcome HeadlineRun() {
  constexpr std::size_t kRequired = 9;
  ScratchDir scratch;
  RunConfig config = test::BundleConfig(scratch / "out");
  config.classes = ClassSet::kThree;
  RunArtifacts artifacts;
  RunPipeline(config, {}, &artifacts);

  std::map<std::string, std::string> headline_of;
  for (const auto& item : artifacts.corpus.items) headline_of[item.id] = item.headline;
  std::vector<std::pair<std::string, Tuple>> got;
  for (const auto& o : artifacts.observations) {
    if (o.method != ExtractionMethod::kZsc) continue;
    got.push_back({headline_of[o.doc_id],
                   {o.pair.a(), o.pair.b(), std::string(LabelName(o.label)), o.score}});
  }
  auto want = PublishedZscTuples();
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  std::vector<std::pair<std::string, Tuple>> missing, extra;
  std::set_difference(want.begin(), want.end(), got.begin(), got.end(),
                      std::back_inserter(missing));
  std::set_difference(got.begin(), got.end(), want.begin(), want.end(),
                      std::back_inserter(extra));

  std::ostringstream detail;
  detail << "observations=" << got.size() << " required=" << kRequired
         << " matching_published=" << (got.size() - extra.size()) << "/" << want.size()
         << " missing=" << missing.size() << " extra=" << extra.size();
  for (const auto& m : missing) detail << " [missing " << Show(m.second) << "]";
  for (const auto& e : extra) detail << " [extra " << Show(e.second) << "]";
  if (got.size() != kRequired && missing.empty() && extra.empty()) {
    detail << "; the published rows list 1+1+3+3=" << want.size()
           << " relation tuples, so a count of " << kRequired
           << " cannot also match them exactly";
  }
  return {got.size() == kRequired && missing.empty() && extra.empty(), detail.str()};
}

Outcome ExplanationParse() {
  const AliasTable table = AliasTable::Load(test::SourceDir() / "data" / "aliases.json");
  const auto script = nlohmann::json::parse(std::ifstream(test::BundleDir() / "script.json"));
  std::vector<Tuple> tuples;
  std::size_t diagnostics = 0;
  for (const char* headline : {test::kRow1, test::kRow2, test::kRow3, test::kRow4}) {
    std::string completion;
    for (const auto& e : script["llm"]) {
      if (e["contains"] == "News: " + std::string(headline) + "\n") completion = e["text"];
    }
    if (completion.empty()) return {false, std::string("no recorded text for ") + headline};
    const NewsItem item = test::MakeItem(headline, "2021-04-27T00:00:00Z");
    const auto parsed = ParseLlmRelations(completion, item, table);
    diagnostics += parsed.diagnostics.size();
    for (const auto& e : parsed.explanations) {
      tuples.push_back({e.pair.a(), e.pair.b(), std::string(LabelName(e.label)), 0.0});
    }
  }
  const std::vector<Tuple> want = {
      {"facebook", "gop-firm", "positive", 0.0}, {"facebook", "tiktok", "negative", 0.0},
      {"gop-firm", "tiktok", "negative", 0.0},   {"apple", "facebook", "negative", 0.0},
      {"apple", "snap", "negative", 0.0},        {"apple", "facebook", "negative", 0.0},
      {"apple", "google", "positive", 0.0},      {"apple", "facebook", "negative", 0.0},
      {"facebook", "google", "negative", 0.0},   {"apple", "google", "unknown", 0.0},
  };
  auto has = [&](const Tuple& t) {
    return std::find(tuples.begin(), tuples.end(), t) != tuples.end();
  };
  const bool pass = tuples == want && has({"apple", "google", "unknown", 0.0}) &&
                    has({"facebook", "gop-firm", "positive", 0.0});
  std::ostringstream detail;
  detail << "tuples=" << tuples.size() << " diagnostics=" << diagnostics
         << (pass ? " (apple-google unknown and facebook-gop-firm positive present)"
                  : " (tuple list differs from the published explanations)");
  return {pass, detail.str()};
}

Outcome AggregationProperties() {
  constexpr int kCases = 2000;
  std::mt19937_64 rng(20260415);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::array labels = {RelationLabel::kPositive, RelationLabel::kNegative,
                             RelationLabel::kNeutral, RelationLabel::kUnknown};
  int range = 0, antisymmetry = 0, permutation = 0, unknown_only = 0;
  for (int c = 0; c < kCases; ++c) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const bool force_unknown = c % 10 == 0;
    std::vector<RelationObservation> obs;
    for (int i = 0; i < n; ++i) {
      RelationObservation o{EntityPair::Of("x", "y")};
      o.label = force_unknown ? RelationLabel::kUnknown : labels[rng() % 4];
      o.score = Quantize6(unit(rng));
      o.doc_id = "d" + std::to_string(i);
      o.published_at = Timestamp{std::chrono::seconds(1617000000 + 3600 * i)};
      obs.push_back(std::move(o));
    }
    const auto edge = AggregateEdge(obs);
    const bool any_known = std::any_of(obs.begin(), obs.end(), [](const auto& o) {
      return o.label != RelationLabel::kUnknown;
    });
    if (edge.has_value() != any_known) ++unknown_only;
    if (!edge) continue;
    if (!(edge->weight >= -1.0 && edge->weight <= 1.0)) ++range;
    auto flipped = obs;
    for (auto& o : flipped) {
      if (o.label == RelationLabel::kPositive) {
        o.label = RelationLabel::kNegative;
      } else if (o.label == RelationLabel::kNegative) {
        o.label = RelationLabel::kPositive;
      }
    }
    const auto mirrored = AggregateEdge(flipped);
    if (!mirrored || mirrored->weight != -edge->weight) ++antisymmetry;
    auto shuffled = obs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    if (AggregateEdge(shuffled) != edge) ++permutation;
  }
  std::ostringstream detail;
  detail << "cases=" << kCases << " violations: range=" << range
         << " antisymmetry=" << antisymmetry << " permutation=" << permutation
         << " unknown_only=" << unknown_only;
  return {range + antisymmetry + permutation + unknown_only == 0, detail.str()};
}

Outcome BalanceOracle() {
  std::size_t graphs = 0, predictions = 0, mismatches = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    mismatches += test::ExhaustiveMismatches(n, &graphs, &predictions);
  }
  std::ostringstream detail;
  detail << "exhaustive n<=5: graphs=" << graphs << " predictions=" << predictions
         << " mismatches=" << mismatches;
  return {mismatches == 0, detail.str()};
}

Outcome EventDiff() {
  ScratchDir scratch;
  RunConfig config = test::BundleConfig(scratch / "out");
  RunArtifacts artifacts;
  RunPipeline(config, {}, &artifacts);
  if (!artifacts.diff || !artifacts.split) return {false, "run produced no diff"};
  const SnapshotDiff& diff = *artifacts.diff;
  const auto& [before, after] = *artifacts.split;

  auto added_sign = [&](const char* a, const char* b) {
    for (const auto& e : diff.added) {
      if (e.pair == EntityPair::Of(a, b)) return DiscretizeWeight(e.weight, diff.tau);
    }
    return 0;
  };
  const bool signs = added_sign("apple", "facebook") < 0 && added_sign("apple", "snap") < 0 &&
                     added_sign("apple", "google") > 0;
  const bool identity = DiffSnapshots(after, after, diff.tau).empty() &&
                        DiffSnapshots(before, before, diff.tau).empty();
  const bool lossless = ApplyDiff(before, diff) == after.edges;
  std::ostringstream detail;
  detail << "event=" << FormatRfc3339(*config.event_date) << " added=" << diff.added.size()
         << " removed=" << diff.removed.size() << " added_signs(apple-facebook,apple-snap,"
         << "apple-google)=" << added_sign("apple", "facebook") << ","
         << added_sign("apple", "snap") << "," << added_sign("apple", "google")
         << " self_diff_empty=" << identity << " round_trip=" << lossless;
  return {signs && identity && lossless, detail.str()};
}

Outcome Determinism() {
  ScratchDir scratch;
  RunArtifacts first;
  RunPipeline(test::BundleConfig(scratch / "one"), {}, &first);
  RunPipeline(test::BundleConfig(scratch / "two"));
  std::vector<std::string> differing;
  std::size_t compared = 0;
  for (const char* name :
       {"observations.jsonl", "explanations.jsonl", "summaries.jsonl", "snapshot.json",
        "snapshot.dot", "snapshot.graphml", "snapshots.jsonl", "diff.json"}) {
    ++compared;
    if (ReadFile(scratch / "one" / name) != ReadFile(scratch / "two" / name)) {
      differing.push_back(name);
    }
  }
  std::size_t round_trips = 0, round_trip_failures = 0;
  std::vector<NetworkSnapshot> snapshots = first.temporal.snapshots;
  snapshots.push_back(first.snapshot);
  if (first.split) {
    snapshots.push_back(first.split->first);
    snapshots.push_back(first.split->second);
  }
  snapshots.push_back(NetworkSnapshot{first.snapshot.window, {}, {}});
  for (const auto& s : snapshots) {
    ++round_trips;
    const auto back =
        SnapshotFromJson(nlohmann::json::parse(ExportSnapshot(s, ExportFormat::kJson)));
    if (!StructurallyEqual(s, back)) ++round_trip_failures;
  }
  const bool dot = ReadFile(scratch / "one" / "snapshot.dot") ==
                   ReadFile(test::GoldenDir() / "headlines.dot");
  const bool graphml = ReadFile(scratch / "one" / "snapshot.graphml") ==
                       ReadFile(test::GoldenDir() / "headlines.graphml");
  std::ostringstream detail;
  detail << "files_compared=" << compared << " differing=" << differing.size()
         << " json_round_trips=" << round_trips - round_trip_failures << "/" << round_trips
         << " dot_golden=" << dot << " graphml_golden=" << graphml;
  for (const auto& d : differing) detail << " [" << d << "]";
  return {differing.empty() && round_trip_failures == 0 && dot && graphml, detail.str()};
}

Outcome GatewayContract() {
  ScratchDir scratch;
  auto instrumented = std::make_shared<testing::ScriptedTransport>(nlohmann::json::object());
  RunEnvironment env;
  env.transport = instrumented;
  const RunReport report = RunPipeline(test::BundleConfig(scratch / "out"), env);
  const std::size_t replay_calls = instrumented->calls();

  std::mt19937 rng(7);
  std::size_t trials = 0, violations = 0;
  for (int max_retries = 0; max_retries <= 5; ++max_retries) {
    for (int injected = 0; injected <= 8; ++injected) {
      for (const bool retriable : {true, false}) {
        auto transport = test::BundleScript();
        transport->InjectFailures(injected, retriable);
        BackendConfig config = DefaultBackendConfig(Capability::kNer);
        config.endpoint = "scripted://ner";
        config.mode = BackendMode::kLive;
        config.max_retries = max_retries;
        config.jitter_seed = rng();
        RequestExecutor exec(Capability::kNer, config, transport, nullptr,
                             [](std::chrono::milliseconds) {});
        try {
          exec.Execute(NerRequestBody(test::kRow4));
        } catch (const BackendError&) {
        }
        ++trials;
        if (exec.stats().retries > static_cast<std::size_t>(max_retries) ||
            transport->calls() > static_cast<std::size_t>(max_retries) + 1) {
          ++violations;
        }
      }
    }
  }
  std::ostringstream detail;
  detail << "replay_transport_calls=" << replay_calls
         << " replay_fixture_hits=" << report.counts.at("zsc_fixture_hits") +
                                           report.counts.at("ner_fixture_hits") +
                                           report.counts.at("llm_fixture_hits")
         << " retry_trials=" << trials << " retry_violations=" << violations;
  return {replay_calls == 0 && violations == 0, detail.str()};
}

}  // namespace
}  // namespace signet

int main(int argc, char** argv) {
  using namespace signet;
  const std::vector<Criterion> criteria = {
      {1, "headline golden run", 5, HeadlineRun},
      {2, "explanation golden parse", 1, ExplanationParse},
      {3, "aggregation properties", 10, AggregationProperties},
      {4, "balance oracle equivalence", 60, BalanceOracle},
      {5, "event split diff", 5, EventDiff},
      {6, "determinism and round trips", 10, Determinism},
      {7, "gateway contract", 5, GatewayContract},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all_pass = true;
  bool ran = false;
  for (const auto& c : criteria) {
    if (only != 0 && c.number != only) continue;
    ran = true;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    all_pass = all_pass && pass;
    std::printf("criterion %d %s: %s (%.3fs, budget %.0fs) %s%s\n", c.number, c.name,
                pass ? "PASS" : "FAIL", seconds, c.budget_seconds, outcome.detail.c_str(),
                in_budget ? "" : " [over time budget]");
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %s\n", argv[1]);
    return 2;
  }
  return all_pass ? 0 : 1;
}
