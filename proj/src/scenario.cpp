// Copyright 2026 The PBN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pbn/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pbn/error.hpp"

namespace pbn {

using nlohmann::json;

void ConfigOverrides::apply(SimConfig& config) const {
  if (latency_ticks) config.latency_ticks = *latency_ticks;
  if (ttl) config.ttl = *ttl;
  if (split_horizon) config.split_horizon = *split_horizon;
  if (faithful_routing) config.faithful_routing = *faithful_routing;
  if (strict_updates) config.strict_updates = *strict_updates;
  if (seed) config.seed = *seed;
  if (auto_save_ticks) config.auto_save_ticks = *auto_save_ticks;
  if (max_ticks) config.max_ticks = *max_ticks;
}

namespace {

class Validator {
 public:
  explicit Validator(ValidationReport& report) : report_(report) {}

  void issue(const std::string& pointer, const std::string& message) {
    report_.issues.push_back({pointer, message});
  }

  bool require_string(const json& j, const std::string& pointer,
                      const char* key, std::string& out) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      issue(pointer + "/" + key, "expected a string");
      return false;
    }
    out = j.at(key).get<std::string>();
    return true;
  }

  bool require_uint(const json& j, const std::string& pointer, const char* key,
                    std::uint64_t& out) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
      issue(pointer + "/" + key, "expected a non-negative integer");
      return false;
    }
    out = j.at(key).get<std::uint64_t>();
    return true;
  }

 private:
  ValidationReport& report_;
};

struct NameTable {
  std::map<std::string, DeviceId> by_social;

  const DeviceId* find(const std::string& social) const {
    auto it = by_social.find(social);
    return it == by_social.end() ? nullptr : &it->second;
  }
};

bool resolve_node(Validator& v, const NameTable& names, const json& j,
                  const std::string& pointer, const char* key, DeviceId& out) {
  std::string name;
  if (!v.require_string(j, pointer, key, name)) {
    return false;
  }
  const DeviceId* id = names.find(name);
  if (id == nullptr) {
    v.issue(pointer + "/" + key, "undeclared node: " + name);
    return false;
  }
  out = *id;
  return true;
}

void parse_config(Validator& v, const json& j, ConfigOverrides& out) {
  const std::string pointer = "/config";
  static const char* known[] = {"latency",        "ttl",
                                "split_horizon",  "faithful_routing",
                                "strict_updates", "seed",
                                "auto_save_ticks", "max_ticks"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return it.key() == k;
        }) == std::end(known)) {
      v.issue(pointer + "/" + it.key(), "unknown config key");
    }
  }
  auto uint_field = [&](const char* key, auto& slot) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_unsigned()) {
      v.issue(pointer + "/" + key, "expected a non-negative integer");
      return;
    }
    slot = j.at(key).get<std::decay_t<decltype(*slot)>>();
  };
  auto bool_field = [&](const char* key, std::optional<bool>& slot) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) {
      v.issue(pointer + "/" + key, "expected a boolean");
      return;
    }
    slot = j.at(key).get<bool>();
  };
  uint_field("latency", out.latency_ticks);
  uint_field("ttl", out.ttl);
  bool_field("split_horizon", out.split_horizon);
  bool_field("faithful_routing", out.faithful_routing);
  bool_field("strict_updates", out.strict_updates);
  uint_field("seed", out.seed);
  uint_field("auto_save_ticks", out.auto_save_ticks);
  uint_field("max_ticks", out.max_ticks);
  if (out.latency_ticks && *out.latency_ticks == 0) {
    v.issue(pointer + "/latency", "latency must be positive");
  }
  if (out.auto_save_ticks && *out.auto_save_ticks == 0) {
    v.issue(pointer + "/auto_save_ticks", "auto_save_ticks must be positive");
  }
}

std::optional<SimEventBody> parse_event(Validator& v, const NameTable& names,
                                        const json& j,
                                        const std::string& pointer) {
  std::string action;
  if (!v.require_string(j, pointer, "action", action)) {
    return std::nullopt;
  }
  DeviceId a, b;
  if (action == "add_node") {
    if (!resolve_node(v, names, j, pointer, "node", a)) return std::nullopt;
    return SimEventBody{AddNodeEvent{a}};
  }
  if (action == "remove_node") {
    if (!resolve_node(v, names, j, pointer, "node", a)) return std::nullopt;
    return SimEventBody{RemoveNodeEvent{a}};
  }
  if (action == "add_edge" || action == "remove_edge") {
    bool ok = resolve_node(v, names, j, pointer, "a", a);
    ok = resolve_node(v, names, j, pointer, "b", b) && ok;
    if (!ok) return std::nullopt;
    if (a == b) {
      v.issue(pointer, "edge endpoints must differ");
      return std::nullopt;
    }
    if (action == "add_edge") return SimEventBody{AddEdgeEvent{a, b}};
    return SimEventBody{RemoveEdgeEvent{a, b}};
  }
  if (action == "host") {
    if (!resolve_node(v, names, j, pointer, "node", a)) return std::nullopt;
    std::string base = "mom";
    if (j.contains("session")) {
      if (!v.require_string(j, pointer, "session", base)) return std::nullopt;
    }
    return SimEventBody{UserAction{HostAction{a, base}}};
  }
  if (action == "join") {
    bool ok = resolve_node(v, names, j, pointer, "node", a);
    ok = resolve_node(v, names, j, pointer, "host", b) && ok;
    if (!ok) return std::nullopt;
    if (a == b) {
      v.issue(pointer, "a node cannot join itself; use a host action");
      return std::nullopt;
    }
    return SimEventBody{UserAction{JoinAction{a, b}}};
  }
  if (action == "leave") {
    if (!resolve_node(v, names, j, pointer, "node", a)) return std::nullopt;
    return SimEventBody{UserAction{LeaveAction{a}}};
  }
  if (action == "create") {
    std::string title;
    if (!resolve_node(v, names, j, pointer, "node", a) ||
        !v.require_string(j, pointer, "title", title)) {
      return std::nullopt;
    }
    return SimEventBody{UserAction{CreateAction{a, title}}};
  }
  if (action == "edit" || action == "type") {
    std::string title, content;
    if (!resolve_node(v, names, j, pointer, "node", a) ||
        !v.require_string(j, pointer, "title", title) ||
        !v.require_string(j, pointer, "content", content)) {
      return std::nullopt;
    }
    if (action == "edit") {
      return SimEventBody{UserAction{EditAction{a, title, content}}};
    }
    return SimEventBody{UserAction{TypeAction{a, title, content}}};
  }
  if (action == "share") {
    std::string title;
    if (!resolve_node(v, names, j, pointer, "node", a) ||
        !v.require_string(j, pointer, "title", title)) {
      return std::nullopt;
    }
    if (!j.contains("recipients") || !j.at("recipients").is_array()) {
      v.issue(pointer + "/recipients", "expected an array of node names");
      return std::nullopt;
    }
    std::vector<DeviceId> recipients;
    const json& list = j.at("recipients");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string item_ptr =
          pointer + "/recipients/" + std::to_string(i);
      if (!list[i].is_string()) {
        v.issue(item_ptr, "expected a node name");
        return std::nullopt;
      }
      const DeviceId* id = names.find(list[i].get<std::string>());
      if (id == nullptr) {
        v.issue(item_ptr, "undeclared node: " + list[i].get<std::string>());
        return std::nullopt;
      }
      recipients.push_back(*id);
    }
    return SimEventBody{UserAction{ShareAction{a, title, recipients}}};
  }
  if (action == "rename") {
    std::string from, to;
    if (!resolve_node(v, names, j, pointer, "node", a) ||
        !v.require_string(j, pointer, "from", from) ||
        !v.require_string(j, pointer, "to", to)) {
      return std::nullopt;
    }
    return SimEventBody{UserAction{RenameAction{a, from, to}}};
  }
  if (action == "delete") {
    std::string title;
    if (!resolve_node(v, names, j, pointer, "node", a) ||
        !v.require_string(j, pointer, "title", title)) {
      return std::nullopt;
    }
    return SimEventBody{UserAction{DeleteAction{a, title}}};
  }
  if (action == "offer_policy") {
    std::string policy;
    if (!resolve_node(v, names, j, pointer, "node", a) ||
        !v.require_string(j, pointer, "policy", policy)) {
      return std::nullopt;
    }
    OfferPolicy p;
    if (policy == "accept") {
      p = OfferPolicy::Accept;
    } else if (policy == "reject") {
      p = OfferPolicy::Reject;
    } else if (policy == "hold") {
      p = OfferPolicy::Hold;
    } else {
      v.issue(pointer + "/policy", "expected accept, reject or hold");
      return std::nullopt;
    }
    return SimEventBody{UserAction{OfferPolicyAction{a, p}}};
  }
  if (action == "respond") {
    std::string decision;
    if (!resolve_node(v, names, j, pointer, "node", a) ||
        !v.require_string(j, pointer, "decision", decision)) {
      return std::nullopt;
    }
    if (decision != "accept" && decision != "reject") {
      v.issue(pointer + "/decision", "expected accept or reject");
      return std::nullopt;
    }
    return SimEventBody{UserAction{RespondAction{
        a, decision == "accept" ? OfferDecision::Accept
                                : OfferDecision::Reject}}};
  }
  if (action == "send") {
    std::string payload;
    if (!resolve_node(v, names, j, pointer, "from", a) ||
        !resolve_node(v, names, j, pointer, "to", b) ||
        !v.require_string(j, pointer, "payload", payload)) {
      return std::nullopt;
    }
    if (a == b) {
      v.issue(pointer, "send endpoints must differ");
      return std::nullopt;
    }
    return SimEventBody{UserAction{SendAction{a, b, payload}}};
  }
  v.issue(pointer + "/action", "unknown action: " + action);
  return std::nullopt;
}

std::optional<AssertionSpec> parse_assertion(Validator& v,
                                             const NameTable& names,
                                             const json& j,
                                             const std::string& pointer) {
  std::string check;
  if (!v.require_string(j, pointer, "check", check)) {
    return std::nullopt;
  }
  AssertionSpec spec;
  if (check == "table_equals") {
    spec.kind = AssertionSpec::Kind::TableEquals;
    if (!resolve_node(v, names, j, pointer, "node", spec.node)) {
      return std::nullopt;
    }
    if (!j.contains("table") || !j.at("table").is_object()) {
      v.issue(pointer + "/table", "expected an object of peer:via names");
      return std::nullopt;
    }
    for (auto it = j.at("table").begin(); it != j.at("table").end(); ++it) {
      const DeviceId* peer = names.find(it.key());
      if (peer == nullptr) {
        v.issue(pointer + "/table/" + it.key(), "undeclared node");
        return std::nullopt;
      }
      if (!it.value().is_string() ||
          names.find(it.value().get<std::string>()) == nullptr) {
        v.issue(pointer + "/table/" + it.key(), "undeclared via node");
        return std::nullopt;
      }
      spec.table[*peer] = *names.find(it.value().get<std::string>());
    }
    spec.description =
        "table_equals node=" + social_view(spec.node);
    return spec;
  }
  if (check == "delivered_within") {
    spec.kind = AssertionSpec::Kind::DeliveredWithin;
    std::uint64_t hops = 0;
    if (!resolve_node(v, names, j, pointer, "src", spec.src) ||
        !resolve_node(v, names, j, pointer, "dst", spec.dst) ||
        !v.require_uint(j, pointer, "hops", hops)) {
      return std::nullopt;
    }
    spec.hops = static_cast<std::uint32_t>(hops);
    spec.description = "delivered_within src=" + social_view(spec.src) +
                       " dst=" + social_view(spec.dst) +
                       " hops=" + std::to_string(spec.hops);
    return spec;
  }
  if (check == "content_converged") {
    spec.kind = AssertionSpec::Kind::ContentConverged;
    if (!resolve_node(v, names, j, pointer, "owner", spec.owner) ||
        !v.require_string(j, pointer, "title", spec.title)) {
      return std::nullopt;
    }
    spec.description = "content_converged owner=" + social_view(spec.owner) +
                       " title=" + spec.title;
    return spec;
  }
  if (check == "role_is") {
    spec.kind = AssertionSpec::Kind::RoleIs;
    if (!resolve_node(v, names, j, pointer, "node", spec.node) ||
        !v.require_string(j, pointer, "role", spec.role)) {
      return std::nullopt;
    }
    if (spec.role != "scribe" && spec.role != "member" && spec.role != "idle") {
      v.issue(pointer + "/role", "expected scribe, member or idle");
      return std::nullopt;
    }
    spec.description = "role_is node=" + social_view(spec.node) + " role=" +
                       spec.role;
    return spec;
  }
  if (check == "unreachable") {
    spec.kind = AssertionSpec::Kind::Unreachable;
    if (!resolve_node(v, names, j, pointer, "node", spec.node) ||
        !resolve_node(v, names, j, pointer, "peer", spec.peer)) {
      return std::nullopt;
    }
    spec.description = "unreachable node=" + social_view(spec.node) +
                       " peer=" + social_view(spec.peer);
    return spec;
  }
  v.issue(pointer + "/check", "unknown check: " + check);
  return std::nullopt;
}

}  // namespace

ScenarioParse parse_scenario(const std::string& text) {
  ScenarioParse result;
  Validator v(result.report);

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    v.issue("", std::string("parse error: ") + e.what());
    return result;
  }
  if (!root.is_object()) {
    v.issue("", "scenario must be a JSON object");
    return result;
  }
  if (!root.contains("schema_version") ||
      !root.at("schema_version").is_number_unsigned() ||
      root.at("schema_version").get<std::uint64_t>() != 1) {
    v.issue("/schema_version", "expected schema_version 1");
    return result;
  }

  Scenario scenario;
  if (!v.require_string(root, "", "name", scenario.name)) {
    return result;
  }
  if (root.contains("config")) {
    if (!root.at("config").is_object()) {
      v.issue("/config", "expected an object");
    } else {
      parse_config(v, root.at("config"), scenario.config);
    }
  }

  if (!root.contains("nodes") || !root.at("nodes").is_array() ||
      root.at("nodes").empty()) {
    v.issue("/nodes", "expected a non-empty array of {name, sim}");
    return result;
  }
  NameTable names;
  const json& nodes = root.at("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string pointer = "/nodes/" + std::to_string(i);
    std::string name, sim;
    if (!v.require_string(nodes[i], pointer, "name", name) ||
        !v.require_string(nodes[i], pointer, "sim", sim)) {
      continue;
    }
    if (names.find(name) != nullptr) {
      v.issue(pointer + "/name", "duplicate node name: " + name);
      continue;
    }
    try {
      DeviceId id = make_device_id(name, sim);
      names.by_social.emplace(name, id);
      scenario.nodes.push_back({name, sim, id});
    } catch (const Error& e) {
      v.issue(pointer, e.what());
    }
  }

  if (root.contains("events")) {
    if (!root.at("events").is_array()) {
      v.issue("/events", "expected an array");
    } else {
      const json& events = root.at("events");
      Tick previous = 0;
      for (std::size_t i = 0; i < events.size(); ++i) {
        const std::string pointer = "/events/" + std::to_string(i);
        std::uint64_t t = 0;
        if (!v.require_uint(events[i], pointer, "t", t)) {
          continue;
        }
        if (i > 0 && t < previous) {
          v.issue(pointer + "/t", "event times must be non-decreasing");
        }
        previous = t;
        std::optional<SimEventBody> body =
            parse_event(v, names, events[i], pointer);
        if (body) {
          scenario.events.push_back({t, std::move(*body)});
        }
      }
    }
  }

  if (root.contains("assertions")) {
    if (!root.at("assertions").is_array()) {
      v.issue("/assertions", "expected an array");
    } else {
      const json& assertions = root.at("assertions");
      for (std::size_t i = 0; i < assertions.size(); ++i) {
        const std::string pointer = "/assertions/" + std::to_string(i);
        std::optional<AssertionSpec> spec =
            parse_assertion(v, names, assertions[i], pointer);
        if (spec) {
          scenario.assertions.push_back(std::move(*spec));
        }
      }
    }
  }

  if (result.report.ok()) {
    result.scenario = std::move(scenario);
  }
  return result;
}

ScenarioParse load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ScenarioParse result;
    result.report.issues.push_back({"", "cannot open file: " + path});
    return result;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

namespace {

AssertionResult evaluate_assertion(const World& world,
                                   const std::vector<std::string>& trace_lines,
                                   const AssertionSpec& spec) {
  AssertionResult result;
  result.description = spec.description;
  switch (spec.kind) {
    case AssertionSpec::Kind::TableEquals: {
      const RoutingTable& table = world.table_of(spec.node);
      if (table.entries == spec.table) {
        result.passed = true;
      } else {
        std::string actual = "{";
        for (const auto& [peer, via] : table.entries) {
          actual += peer.canonical() + ":" + via.canonical() + ",";
        }
        actual += "}";
        result.detail = "actual " + actual;
      }
      return result;
    }
    case AssertionSpec::Kind::DeliveredWithin: {
      bool delivered = false;
      std::uint64_t best_hops = 0;
      bool dropped = false;
      for (const std::string& line : trace_lines) {
        TraceRecord record = parse_trace_line(line);
        const std::string* recv = record.field("recv");
        if (recv != nullptr && *recv == "data" &&
            record.node == spec.dst.canonical()) {
          const std::string* src = record.field("src");
          const std::string* hops = record.field("hops");
          if (src != nullptr && *src == spec.src.canonical() &&
              hops != nullptr) {
            std::uint64_t h = std::stoull(*hops);
            if (!delivered || h < best_hops) {
              best_hops = h;
            }
            delivered = true;
          }
        }
        const std::string* drop = record.field("drop");
        const std::string* kind = record.field("kind");
        const std::string* dst = record.field("dst");
        if (drop != nullptr && kind != nullptr && *kind == "data" &&
            dst != nullptr && *dst == spec.dst.canonical()) {
          dropped = true;
        }
      }
      if (!delivered) {
        result.detail = "no delivery recorded";
      } else if (dropped) {
        result.detail = "a data packet for this destination was dropped";
      } else if (best_hops > spec.hops) {
        result.detail = "delivered in " + std::to_string(best_hops) +
                        " hops, budget " + std::to_string(spec.hops);
      } else {
        result.passed = true;
        result.detail = "delivered in " + std::to_string(best_hops) + " hops";
      }
      return result;
    }
    case AssertionSpec::Kind::ContentConverged: {
      const Session* session = world.sessions().hosted_by(spec.owner);
      if (session == nullptr) {
        result.detail = "owner is not hosting a session";
        return result;
      }
      const MoMDocument* doc = world.store_of(spec.owner).find_my(spec.title);
      if (doc == nullptr) {
        result.detail = "owner has no document titled " + spec.title;
        return result;
      }
      for (const DeviceId& member : session->members) {
        const auto& pads = world.store_of(member).pads();
        auto pad = pads.find(doc->doc_id);
        if (pad == pads.end()) {
          result.detail = social_view(member) + " has no pad for the document";
          return result;
        }
        if (pad->second.content != doc->content ||
            pad->second.revision != doc->revision) {
          result.detail = social_view(member) + " is at revision " +
                          std::to_string(pad->second.revision) +
                          ", scribe at " + std::to_string(doc->revision);
          return result;
        }
      }
      result.passed = true;
      result.detail = std::to_string(session->members.size()) +
                      " member(s) at revision " + std::to_string(doc->revision);
      return result;
    }
    case AssertionSpec::Kind::RoleIs: {
      const char* actual = role_name(world.sessions().role_of(spec.node));
      result.passed = spec.role == actual;
      if (!result.passed) {
        result.detail = std::string("actual role ") + actual;
      }
      return result;
    }
    case AssertionSpec::Kind::Unreachable: {
      const RoutingTable& table = world.table_of(spec.node);
      result.passed = table.entries.count(spec.peer) == 0;
      if (!result.passed) {
        result.detail = "a route exists via " +
                        table.entries.at(spec.peer).canonical();
      }
      return result;
    }
  }
  result.detail = "unknown assertion kind";
  return result;
}

json document_to_json(const MoMDocument& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["title"] = doc.title;
  j["revision"] = doc.revision;
  j["owned_by"] = social_view(doc.owned_by);
  json shared = json::array();
  for (const DeviceId& id : doc.shared_with) {
    shared.push_back(social_view(id));
  }
  j["shared_with"] = shared;
  j["content"] = doc.content;
  return j;
}

json build_summary(const Scenario& scenario, const World& world,
                   const QuiescenceReport& report,
                   const std::vector<AssertionResult>& assertions,
                   int exit_code) {
  const SimConfig& config = world.config();
  json summary;
  summary["schema_version"] = 1;
  summary["scenario"] = scenario.name;
  summary["config"] = {{"latency", config.latency_ticks},
                       {"ttl", world.effective_ttl()},
                       {"split_horizon", config.split_horizon},
                       {"faithful_routing", config.faithful_routing},
                       {"strict_updates", config.strict_updates},
                       {"seed", config.seed},
                       {"auto_save_ticks", config.auto_save_ticks},
                       {"max_ticks", config.max_ticks}};
  summary["quiescent"] = report.quiescent;
  summary["ticks"] = report.ticks_elapsed;
  summary["events_processed"] = report.events_processed;
  summary["in_flight"] = report.in_flight;
  summary["counters"] = {
      {"messages_sent", report.counters.messages_sent},
      {"messages_delivered", report.counters.messages_delivered},
      {"dropped_link_down", report.counters.dropped_link_down},
      {"dropped_not_adjacent", report.counters.dropped_not_adjacent},
      {"dropped_ttl_expired", report.counters.dropped_ttl_expired},
      {"dropped_loop_detected", report.counters.dropped_loop_detected},
      {"dropped_no_route", report.counters.dropped_no_route},
      {"routing_updates_sent", report.counters.routing_updates_sent},
      {"packets_delivered", report.counters.packets_delivered}};

  json nodes = json::object();
  for (const DeviceId& id : world.known_nodes()) {
    json entry;
    entry["present"] = world.present(id);
    entry["role"] = role_name(world.sessions().role_of(id));
    const Session* session = world.sessions().session_of(id);
    entry["session"] = session != nullptr ? session->name : "";
    json table = json::object();
    for (const auto& [peer, via] : world.table_of(id).entries) {
      table[peer.canonical()] = via.canonical();
    }
    entry["table"] = table;
    const MomStore& store = world.store_of(id);
    json my = json::array();
    for (const auto& [doc_id, doc] : store.my_moms()) {
      my.push_back(document_to_json(doc));
    }
    json shared = json::array();
    for (const auto& [doc_id, doc] : store.shared_moms()) {
      shared.push_back(document_to_json(doc));
    }
    json pads = json::array();
    for (const auto& [doc_id, pad] : store.pads()) {
      pads.push_back(document_to_json(pad));
    }
    entry["my_moms"] = my;
    entry["shared_moms"] = shared;
    entry["pads"] = pads;
    nodes[id.canonical()] = entry;
  }
  summary["nodes"] = nodes;

  json sessions = json::object();
  for (const auto& [name, session] : world.sessions().sessions()) {
    json entry;
    entry["host"] = session.host.canonical();
    json members = json::array();
    for (const DeviceId& member : session.members) {
      members.push_back(member.canonical());
    }
    entry["members"] = members;
    entry["active_doc"] = session.active_doc;
    sessions[name] = entry;
  }
  summary["sessions"] = sessions;

  json checks = json::array();
  for (const AssertionResult& result : assertions) {
    checks.push_back({{"description", result.description},
                      {"passed", result.passed},
                      {"detail", result.detail}});
  }
  summary["assertions"] = checks;
  summary["exit_code"] = exit_code;
  return summary;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario,
                       const ConfigOverrides& cli_overrides) {
  SimConfig config;
  scenario.config.apply(config);
  cli_overrides.apply(config);

  World world(config);
  for (const ScenarioNodeDecl& node : scenario.nodes) {
    world.schedule(0, AddNodeEvent{node.id});
  }
  for (const TimedEvent& event : scenario.events) {
    world.schedule(event.time, event.body);
  }

  RunResult result;
  result.report = world.run_until_quiescent(config.max_ticks);
  result.trace_lines = world.trace().lines();

  bool all_passed = true;
  for (const AssertionSpec& spec : scenario.assertions) {
    AssertionResult assertion =
        evaluate_assertion(world, result.trace_lines, spec);
    all_passed = all_passed && assertion.passed;
    result.assertions.push_back(std::move(assertion));
  }

  if (!all_passed) {
    result.exit_code = kExitAssertionFailed;
  } else if (!result.report.quiescent) {
    result.exit_code = kExitNonQuiescent;
  } else {
    result.exit_code = kExitOk;
  }
  result.summary_json =
      build_summary(scenario, world, result.report, result.assertions,
                    result.exit_code)
          .dump(2);
  return result;
}

int export_documents(const RunResult& result, const std::string& dir) {
  json summary = json::parse(result.summary_json);
  int written = 0;
  for (const auto& [canonical, entry] : summary.at("nodes").items()) {
    const std::string social = canonical.substr(0, canonical.find('#'));
    for (const char* list : {"my_moms", "shared_moms"}) {
      for (const json& doc : entry.at(list)) {
        const std::string title = doc.at("title").get<std::string>();
        if (title.find('/') != std::string::npos ||
            title.find('\\') != std::string::npos) {
          continue;
        }
        std::filesystem::path folder =
            std::filesystem::path(dir) / social /
            (std::string(list) == "my_moms" ? "MyMoMs" : "SharedMoMs");
        std::filesystem::create_directories(folder);
        std::ofstream out(folder / title, std::ios::binary);
        if (out) {
          out << doc.at("content").get<std::string>();
          ++written;
        }
      }
    }
  }
  return written;
}

std::vector<std::string> inspect_trace(const std::vector<std::string>& lines,
                                       const InspectQuery& query) {
  if (query.from && query.to && *query.from > *query.to) {
    throw Error(ErrorCode::BadQuery, "time range is inverted");
  }
  std::vector<std::string> out;
  for (const std::string& line : lines) {
    TraceRecord record;
    try {
      record = parse_trace_line(line);
    } catch (const Error&) {
      throw Error(ErrorCode::BadQuery, "not a trace produced by run: " + line);
    }
    if (query.from && record.time < *query.from) continue;
    if (query.to && record.time > *query.to) continue;
    if (query.node) {
      const std::string& canonical = record.node;
      std::string social = canonical.substr(0, canonical.find('#'));
      if (canonical != *query.node && social != *query.node) continue;
    }
    if (query.kind) {
      if (record.field(*query.kind) == nullptr) continue;
    }
    out.push_back(line);
  }
  return out;
}

}  // namespace pbn
