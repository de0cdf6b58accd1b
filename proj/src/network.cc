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

#include "signet/network.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "signet/encoding.h"
#include "signet/error.h"

namespace signet {
namespace {

double SortedSum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

std::string Fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", Quantize6(value));
  return buf;
}

std::string_view SignName(double weight) {
  if (weight > 0) return "positive";
  if (weight < 0) return "negative";
  return "neutral";
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string DotQuote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

const nlohmann::json& Member(const nlohmann::json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) throw ParseError(0, field, "missing");
  return j[field];
}

std::string StringMember(const nlohmann::json& j, const char* field) {
  const auto& v = Member(j, field);
  if (!v.is_string()) throw ParseError(0, field, "not a string");
  return v.get<std::string>();
}

double NumberMember(const nlohmann::json& j, const char* field) {
  const auto& v = Member(j, field);
  if (!v.is_number()) throw ParseError(0, field, "not a number");
  return v.get<double>();
}

Timestamp TimeMember(const nlohmann::json& j, const char* field) {
  const auto ts = ParseRfc3339(StringMember(j, field));
  if (!ts) throw ParseError(0, field, "not RFC-3339");
  return *ts;
}

nlohmann::json EdgeToJson(const SignedEdge& e) {
  return {{"a", e.pair.a()},
          {"b", e.pair.b()},
          {"weight", e.weight},
          {"score_sum", e.score_sum},
          {"tallies",
           {{"positive", e.tallies.positive},
            {"negative", e.tallies.negative},
            {"neutral", e.tallies.neutral},
            {"unknown", e.tallies.unknown}}},
          {"observations", e.observation_ids}};
}

SignedEdge EdgeFromJson(const nlohmann::json& j) {
  std::optional<EntityPair> pair;
  try {
    pair = EntityPair::Of(StringMember(j, "a"), StringMember(j, "b"));
  } catch (const ArgumentError& e) {
    throw ParseError(0, "edges", e.what());
  }
  SignedEdge edge{*pair};
  edge.weight = NumberMember(j, "weight");
  if (!(edge.weight >= -1.0 && edge.weight <= 1.0)) {
    throw ParseError(0, "weight", "outside [-1,1]");
  }
  edge.score_sum = NumberMember(j, "score_sum");
  if (!(edge.score_sum >= 0.0)) throw ParseError(0, "score_sum", "negative");
  const auto& tallies = Member(j, "tallies");
  for (RelationLabel label : ClassLabels(ClassSet::kFour)) {
    const std::string name(LabelName(label));
    const auto& v = Member(tallies, name.c_str());
    if (!v.is_number_unsigned()) throw ParseError(0, "tallies", "not a count");
    edge.tallies[label] = v.get<std::size_t>();
  }
  const auto& ids = Member(j, "observations");
  if (!ids.is_array()) throw ParseError(0, "observations", "not an array");
  for (const auto& id : ids) {
    if (!id.is_string()) throw ParseError(0, "observations", "non-string id");
    edge.observation_ids.push_back(id.get<std::string>());
  }
  return edge;
}

}  // namespace

std::size_t& LabelTallies::operator[](RelationLabel label) {
  switch (label) {
    case RelationLabel::kPositive: return positive;
    case RelationLabel::kNegative: return negative;
    case RelationLabel::kNeutral: return neutral;
    case RelationLabel::kUnknown: return unknown;
  }
  return unknown;
}

std::size_t LabelTallies::operator[](RelationLabel label) const {
  return const_cast<LabelTallies&>(*this)[label];
}

int LabelSign(RelationLabel label) {
  switch (label) {
    case RelationLabel::kPositive: return 1;
    case RelationLabel::kNegative: return -1;
    default: return 0;
  }
}

std::optional<SignedEdge> AggregateEdge(
    const std::vector<RelationObservation>& observations) {
  if (observations.empty()) return std::nullopt;
  const EntityPair& pair = observations.front().pair;
  LabelTallies tallies;
  std::vector<double> pos_sq, neg_sq, pos, neg, neutral;
  std::vector<std::string> ids;
  for (const auto& o : observations) {
    if (o.pair != pair) {
      throw ArgumentError("cannot aggregate " + o.pair.ToString() + " with " +
                          pair.ToString());
    }
    if (!(o.score >= 0.0 && o.score <= 1.0)) {
      throw ArgumentError("observation score outside [0,1]");
    }
    ++tallies[o.label];
    ids.push_back(ObservationId(o));
    switch (o.label) {
      case RelationLabel::kPositive:
        pos.push_back(o.score);
        pos_sq.push_back(o.score * o.score);
        break;
      case RelationLabel::kNegative:
        neg.push_back(o.score);
        neg_sq.push_back(o.score * o.score);
        break;
      case RelationLabel::kNeutral:
        neutral.push_back(o.score);
        break;
      case RelationLabel::kUnknown:
        break;
    }
  }
  if (tallies.unknown == tallies.total()) return std::nullopt;

  // Positive and negative sums are formed the same way so that swapping
  // labels negates the weight exactly.
  const double p2 = SortedSum(pos_sq);
  const double n2 = SortedSum(neg_sq);
  const double signed_total = SortedSum(pos) + SortedSum(neg);
  const double denominator = signed_total + SortedSum(neutral);

  SignedEdge edge{pair};
  edge.tallies = tallies;
  edge.score_sum = Quantize6(denominator);
  edge.weight =
      denominator > 0.0 ? std::clamp(Quantize6((p2 - n2) / denominator), -1.0, 1.0)
                        : 0.0;
  std::sort(ids.begin(), ids.end());
  edge.observation_ids = std::move(ids);
  return edge;
}

const SignedEdge* NetworkSnapshot::Find(const EntityPair& pair) const {
  auto it = std::lower_bound(
      edges.begin(), edges.end(), pair,
      [](const SignedEdge& e, const EntityPair& p) { return e.pair < p; });
  return it != edges.end() && it->pair == pair ? &*it : nullptr;
}

NetworkSnapshot BuildSnapshot(const std::vector<RelationObservation>& observations,
                              const TimeWindow& window,
                              const SnapshotOptions& options) {
  if (window.end <= window.start) {
    throw ArgumentError("window end must be after its start");
  }
  std::map<EntityPair, std::vector<RelationObservation>> by_pair;
  for (const auto& o : observations) {
    if (window.Contains(o.published_at)) by_pair[o.pair].push_back(o);
  }
  NetworkSnapshot snapshot;
  snapshot.window = window;
  std::set<std::string> nodes;
  for (const auto& [pair, group] : by_pair) {
    if (auto edge = AggregateEdge(group)) {
      snapshot.edges.push_back(std::move(*edge));
    } else if (!options.include_isolated) {
      continue;
    }
    nodes.insert(pair.a());
    nodes.insert(pair.b());
  }
  snapshot.nodes.assign(nodes.begin(), nodes.end());
  return snapshot;
}

std::optional<TimeWindow> CoveringWindow(
    const std::vector<RelationObservation>& observations) {
  if (observations.empty()) return std::nullopt;
  auto [lo, hi] = std::minmax_element(
      observations.begin(), observations.end(),
      [](const auto& x, const auto& y) { return x.published_at < y.published_at; });
  return TimeWindow{lo->published_at, hi->published_at + Duration(1)};
}

TemporalNetwork BuildTemporal(const std::vector<RelationObservation>& observations,
                              Duration window_length, Duration stride,
                              const SnapshotOptions& options) {
  if (window_length <= Duration::zero()) {
    throw ArgumentError("window length must be positive");
  }
  if (stride <= Duration::zero()) throw ArgumentError("stride must be positive");
  TemporalNetwork network;
  network.window_length = window_length;
  network.stride = stride;
  const auto span = CoveringWindow(observations);
  if (!span) return network;

  const auto earliest = span->start.time_since_epoch();
  const Timestamp latest = span->end - Duration(1);
  // Floor toward negative infinity so pre-epoch times align too.
  auto first = (earliest / stride) * stride;
  if (first > earliest) first -= stride;
  for (Timestamp start{first}; start <= latest; start += stride) {
    network.snapshots.push_back(
        BuildSnapshot(observations, {start, start + window_length}, options));
  }
  return network;
}

int DiscretizeWeight(double weight, double tau) {
  if (weight == 0.0 || std::fabs(weight) < tau) return 0;
  return weight > 0 ? 1 : -1;
}

SnapshotDiff DiffSnapshots(const NetworkSnapshot& before,
                           const NetworkSnapshot& after, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ArgumentError("tau must lie in [0,1]");
  SnapshotDiff diff;
  diff.tau = tau;
  auto b = before.edges.begin();
  auto a = after.edges.begin();
  // Both edge lists are sorted by pair; walk them together.
  while (b != before.edges.end() || a != after.edges.end()) {
    if (a == after.edges.end() || (b != before.edges.end() && b->pair < a->pair)) {
      diff.removed.push_back(*b++);
    } else if (b == before.edges.end() || a->pair < b->pair) {
      diff.added.push_back(*a++);
    } else {
      const int sb = DiscretizeWeight(b->weight, tau);
      const int sa = DiscretizeWeight(a->weight, tau);
      if (sb != sa) diff.sign_flips.push_back({a->pair, sb, sa});
      if (b->weight != a->weight) {
        diff.weight_deltas.push_back({a->pair, b->weight, a->weight});
      }
      if (!(*b == *a)) diff.updated.push_back(*a);
      ++a;
      ++b;
    }
  }
  return diff;
}

std::vector<SignedEdge> ApplyDiff(const NetworkSnapshot& before,
                                  const SnapshotDiff& diff) {
  std::map<EntityPair, SignedEdge> edges;
  for (const auto& e : before.edges) edges.emplace(e.pair, e);
  for (const auto& e : diff.removed) edges.erase(e.pair);
  for (const auto& d : diff.weight_deltas) {
    auto it = edges.find(d.pair);
    if (it == edges.end()) {
      throw ArgumentError("weight delta for absent pair " + d.pair.ToString());
    }
    it->second.weight = d.after;
  }
  for (const auto& e : diff.updated) edges.insert_or_assign(e.pair, e);
  for (const auto& e : diff.added) edges.insert_or_assign(e.pair, e);
  std::vector<SignedEdge> out;
  for (auto& [pair, edge] : edges) out.push_back(std::move(edge));
  return out;
}

nlohmann::json DiffToJson(const SnapshotDiff& diff) {
  nlohmann::json j = {{"tau", diff.tau},
                      {"added", nlohmann::json::array()},
                      {"removed", nlohmann::json::array()},
                      {"sign_flips", nlohmann::json::array()},
                      {"weight_deltas", nlohmann::json::array()},
                      {"updated", nlohmann::json::array()}};
  for (const auto& e : diff.added) j["added"].push_back(EdgeToJson(e));
  for (const auto& e : diff.removed) j["removed"].push_back(EdgeToJson(e));
  for (const auto& e : diff.updated) j["updated"].push_back(EdgeToJson(e));
  for (const auto& f : diff.sign_flips) {
    j["sign_flips"].push_back(
        {{"a", f.pair.a()}, {"b", f.pair.b()}, {"before", f.before}, {"after", f.after}});
  }
  for (const auto& d : diff.weight_deltas) {
    j["weight_deltas"].push_back(
        {{"a", d.pair.a()}, {"b", d.pair.b()}, {"before", d.before}, {"after", d.after}});
  }
  return j;
}

ExportFormat ParseExportFormat(std::string_view name) {
  if (name == "json") return ExportFormat::kJson;
  if (name == "dot") return ExportFormat::kDot;
  if (name == "graphml") return ExportFormat::kGraphMl;
  throw ArgumentError("unknown export format '" + std::string(name) +
                      "' (expected json, dot or graphml)");
}

nlohmann::json SnapshotToJson(const NetworkSnapshot& snapshot) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : snapshot.edges) edges.push_back(EdgeToJson(e));
  return {{"window",
           {{"start", FormatRfc3339(snapshot.window.start)},
            {"end", FormatRfc3339(snapshot.window.end)}}},
          {"nodes", snapshot.nodes},
          {"edges", std::move(edges)}};
}

NetworkSnapshot SnapshotFromJson(const nlohmann::json& j) {
  NetworkSnapshot snapshot;
  const auto& window = Member(j, "window");
  snapshot.window = {TimeMember(window, "start"), TimeMember(window, "end")};
  if (snapshot.window.end <= snapshot.window.start) {
    throw ParseError(0, "window", "end must be after start");
  }
  const auto& nodes = Member(j, "nodes");
  if (!nodes.is_array()) throw ParseError(0, "nodes", "not an array");
  for (const auto& n : nodes) {
    if (!n.is_string()) throw ParseError(0, "nodes", "non-string id");
    snapshot.nodes.push_back(n.get<std::string>());
  }
  if (!std::is_sorted(snapshot.nodes.begin(), snapshot.nodes.end()) ||
      std::adjacent_find(snapshot.nodes.begin(), snapshot.nodes.end()) !=
          snapshot.nodes.end()) {
    throw ParseError(0, "nodes", "not sorted and unique");
  }
  const auto& edges = Member(j, "edges");
  if (!edges.is_array()) throw ParseError(0, "edges", "not an array");
  for (const auto& e : edges) {
    SignedEdge edge = EdgeFromJson(e);
    if (!snapshot.edges.empty() && !(snapshot.edges.back().pair < edge.pair)) {
      throw ParseError(0, "edges", "not sorted and unique by pair");
    }
    for (const auto* id : {&edge.pair.a(), &edge.pair.b()}) {
      if (!std::binary_search(snapshot.nodes.begin(), snapshot.nodes.end(), *id)) {
        throw ParseError(0, "edges", "endpoint '" + *id + "' is not a node");
      }
    }
    snapshot.edges.push_back(std::move(edge));
  }
  return snapshot;
}

std::string ExportSnapshot(const NetworkSnapshot& snapshot, ExportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ExportFormat::kJson:
      out << CanonicalJson(SnapshotToJson(snapshot)) << '\n';
      break;

    case ExportFormat::kDot:
      out << "graph signet {\n";
      out << "  graph [window_start=" << DotQuote(FormatRfc3339(snapshot.window.start))
          << ", window_end=" << DotQuote(FormatRfc3339(snapshot.window.end)) << "];\n";
      for (const auto& n : snapshot.nodes) out << "  " << DotQuote(n) << ";\n";
      for (const auto& e : snapshot.edges) {
        const auto sign = SignName(e.weight);
        const char* color = sign == "positive"   ? "forestgreen"
                            : sign == "negative" ? "firebrick"
                                                 : "gray50";
        const char* style = sign == "positive"   ? "solid"
                            : sign == "negative" ? "dashed"
                                                 : "dotted";
        out << "  " << DotQuote(e.pair.a()) << " -- " << DotQuote(e.pair.b())
            << " [signed_weight=" << Fixed6(e.weight) << ", sign=" << sign
            << ", color=" << color << ", style=" << style << ", label=\""
            << Fixed6(e.weight) << "\", observations=" << e.observation_ids.size()
            << "];\n";
      }
      out << "}\n";
      break;

    case ExportFormat::kGraphMl:
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
             "  <key id=\"window_start\" for=\"graph\" attr.name=\"window_start\" "
             "attr.type=\"string\"/>\n"
             "  <key id=\"window_end\" for=\"graph\" attr.name=\"window_end\" "
             "attr.type=\"string\"/>\n"
             "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" "
             "attr.type=\"double\"/>\n"
             "  <key id=\"sign\" for=\"edge\" attr.name=\"sign\" "
             "attr.type=\"string\"/>\n"
             "  <key id=\"observations\" for=\"edge\" attr.name=\"observations\" "
             "attr.type=\"int\"/>\n"
             "  <graph id=\"signet\" edgedefault=\"undirected\">\n";
      out << "    <data key=\"window_start\">"
          << FormatRfc3339(snapshot.window.start) << "</data>\n";
      out << "    <data key=\"window_end\">" << FormatRfc3339(snapshot.window.end)
          << "</data>\n";
      for (const auto& n : snapshot.nodes) {
        out << "    <node id=\"" << XmlEscape(n) << "\"/>\n";
      }
      for (const auto& e : snapshot.edges) {
        out << "    <edge source=\"" << XmlEscape(e.pair.a()) << "\" target=\""
            << XmlEscape(e.pair.b()) << "\">\n"
            << "      <data key=\"weight\">" << Fixed6(e.weight) << "</data>\n"
            << "      <data key=\"sign\">" << SignName(e.weight) << "</data>\n"
            << "      <data key=\"observations\">" << e.observation_ids.size()
            << "</data>\n"
            << "    </edge>\n";
      }
      out << "  </graph>\n</graphml>\n";
      break;
  }
  return out.str();
}

bool StructurallyEqual(const NetworkSnapshot& x, const NetworkSnapshot& y) {
  return x == y;
}

}  // namespace signet
