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

#include "pbn/simulator.hpp"

#include <algorithm>

#include "pbn/error.hpp"

namespace pbn {

namespace {

std::string join_canonicals(const std::vector<DeviceId>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ",";
    out += ids[i].canonical();
  }
  out += "]";
  return out;
}

std::string table_snapshot(const RoutingTable& table) {
  std::string out = "{";
  bool first = true;
  for (const auto& [peer, via] : table.entries) {
    if (!first) out += ",";
    first = false;
    out += peer.canonical();
    out += ":";
    out += via.canonical();
  }
  out += "}";
  return out;
}

const char* offer_policy_name(OfferPolicy policy) {
  switch (policy) {
    case OfferPolicy::Accept: return "accept";
    case OfferPolicy::Reject: return "reject";
    case OfferPolicy::Hold: return "hold";
  }
  return "unknown";
}

}  // namespace

World::World(SimConfig config) : config_(config) {
  if (config_.latency_ticks == 0) {
    throw Error(ErrorCode::SchemaViolation, "latency_ticks must be positive");
  }
  if (config_.auto_save_ticks == 0) {
    throw Error(ErrorCode::SchemaViolation, "auto_save_ticks must be positive");
  }
}

std::uint32_t World::effective_ttl() const {
  if (config_.ttl != 0) {
    return config_.ttl;
  }
  return static_cast<std::uint32_t>(states_.size());
}

RoutingOptions World::routing_options() const {
  RoutingOptions options;
  options.cascade_on_loss = !config_.faithful_routing;
  options.split_horizon = config_.split_horizon;
  options.strict_update_sender = config_.strict_updates;
  return options;
}

void World::schedule(Tick time, SimEventBody body) {
  SimEvent event;
  event.time = time;
  event.seq = next_event_seq_++;
  event.body = std::move(body);
  queue_.push(std::move(event));
}

bool World::present(const DeviceId& id) const {
  auto it = states_.find(id);
  return it != states_.end() && it->second.present;
}

World::NodeState& World::state(const DeviceId& id) {
  auto it = states_.find(id);
  if (it == states_.end()) {
    throw Error(ErrorCode::UnknownNode, "unknown node: " + id.canonical());
  }
  return it->second;
}

const World::NodeState& World::state(const DeviceId& id) const {
  auto it = states_.find(id);
  if (it == states_.end()) {
    throw Error(ErrorCode::UnknownNode, "unknown node: " + id.canonical());
  }
  return it->second;
}

const RoutingTable& World::table_of(const DeviceId& id) const {
  return state(id).table;
}

const MomStore& World::store_of(const DeviceId& id) const {
  return state(id).store;
}

const Advertisement& World::advertisement_of(const DeviceId& id) const {
  return state(id).ad;
}

std::vector<DeviceId> World::known_nodes() const {
  std::vector<DeviceId> ids;
  ids.reserve(states_.size());
  for (const auto& [id, st] : states_) {
    ids.push_back(id);
  }
  return ids;
}

QuiescenceReport World::run_until_quiescent(Tick max_ticks) {
  QuiescenceReport report;
  while (!queue_.empty() && queue_.top().time <= max_ticks) {
    SimEvent event = queue_.top();
    queue_.pop();
    now_ = event.time;
    dispatch(event);
    report.events_processed += 1;
  }
  report.quiescent = queue_.empty();
  report.ticks_elapsed = now_;
  report.in_flight = pending_messages_;
  report.counters = counters_;
  return report;
}

void World::dispatch(const SimEvent& event) {
  std::visit(
      [this](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, AddNodeEvent>) {
          on_add_node(body);
        } else if constexpr (std::is_same_v<T, RemoveNodeEvent>) {
          on_remove_node(body);
        } else if constexpr (std::is_same_v<T, AddEdgeEvent>) {
          on_add_edge(body);
        } else if constexpr (std::is_same_v<T, RemoveEdgeEvent>) {
          on_remove_edge(body);
        } else if constexpr (std::is_same_v<T, MessageArrival>) {
          on_message(body);
        } else if constexpr (std::is_same_v<T, AutoSaveEvent>) {
          on_auto_save(body);
        } else if constexpr (std::is_same_v<T, RouteOfferEvent>) {
          on_route_offer(body);
        } else {
          on_action(body);
        }
      },
      event.body);
}

void World::trace_error(const DeviceId& node, const Error& error) {
  trace_.record(now_, node,
                {{"error", error_code_name(error.code())},
                 {"msg", error.what()}});
}

// ---------------------------------------------------------------------------
// topology events
// ---------------------------------------------------------------------------

void World::on_add_node(const AddNodeEvent& ev) {
  if (topology_.has_node(ev.id)) {
    trace_error(ev.id, Error(ErrorCode::DuplicateNode,
                             "node already present: " + ev.id.canonical()));
    return;
  }
  topology_.add_node(ev.id);
  auto it = states_.find(ev.id);
  if (it == states_.end()) {
    NodeState st;
    st.id = ev.id;
    st.table.owner = ev.id;
    st.store = MomStore(ev.id);
    st.ad = make_advertisement(ev.id, "/pbn/mom", 9955, {});
    it = states_.emplace(ev.id, std::move(st)).first;
  }
  it->second.present = true;
  trace_.record(now_, ev.id, {{"node_event", "added"}});
}

void World::on_remove_node(const RemoveNodeEvent& ev) {
  if (!present(ev.id)) {
    trace_error(ev.id, Error(ErrorCode::UnknownNode,
                             "node not present: " + ev.id.canonical()));
    return;
  }
  NodeState& node = state(ev.id);

  SessionManager::DepartResult depart = sessions_.node_departed(ev.id);
  for (const DeviceId& member : depart.orphaned) {
    trace_.record(now_, member,
                  {{"session_event", "orphaned"},
                   {"session", *depart.dissolved_session}});
  }
  if (depart.left_session) {
    trace_.record(now_, ev.id,
                  {{"session_event", "leave"}, {"session", *depart.left_session}});
  }
  node.ad.metadata.erase("hosts_session");

  std::set<DeviceId> former = topology_.neighbors(ev.id);
  std::map<DeviceId, std::set<DeviceId>> before;
  for (const DeviceId& peer : former) {
    before[peer] = topology_.neighbors(peer);
  }
  topology_.remove_node(ev.id);

  // The departed device starts from a clean radio slate if it returns.
  node.table = RoutingTable{};
  node.table.owner = ev.id;
  node.neighbor_advertised.clear();
  node.route_offer_armed.clear();
  node.present = false;
  trace_table(node);
  trace_.record(now_, ev.id, {{"node_event", "removed"}});

  for (const DeviceId& peer : former) {
    std::set<DeviceId> after = before[peer];
    after.erase(ev.id);
    apply_discovery(peer, before[peer], after);
  }
}

void World::on_add_edge(const AddEdgeEvent& ev) {
  try {
    if (!present(ev.a) || !present(ev.b)) {
      throw Error(ErrorCode::UnknownNode, "edge endpoint not present");
    }
    std::set<DeviceId> old_a = topology_.neighbors(ev.a);
    std::set<DeviceId> old_b = topology_.neighbors(ev.b);
    if (!topology_.add_edge(ev.a, ev.b)) {
      trace_.record(now_, std::min(ev.a, ev.b),
                    {{"link", "duplicate"},
                     {"peer", std::max(ev.a, ev.b).canonical()}});
      return;
    }
    const DeviceId& first = std::min(ev.a, ev.b);
    const DeviceId& second = std::max(ev.a, ev.b);
    trace_.record(now_, first, {{"link", "up"}, {"peer", second.canonical()}});
    trace_.record(now_, second, {{"link", "up"}, {"peer", first.canonical()}});

    std::set<DeviceId> new_a = old_a;
    new_a.insert(ev.b);
    std::set<DeviceId> new_b = old_b;
    new_b.insert(ev.a);
    if (first == ev.a) {
      apply_discovery(ev.a, old_a, new_a);
      apply_discovery(ev.b, old_b, new_b);
    } else {
      apply_discovery(ev.b, old_b, new_b);
      apply_discovery(ev.a, old_a, new_a);
    }
  } catch (const Error& e) {
    trace_error(ev.a, e);
  }
}

void World::on_remove_edge(const RemoveEdgeEvent& ev) {
  try {
    if (!present(ev.a) || !present(ev.b)) {
      throw Error(ErrorCode::UnknownNode, "edge endpoint not present");
    }
    std::set<DeviceId> old_a = topology_.neighbors(ev.a);
    std::set<DeviceId> old_b = topology_.neighbors(ev.b);
    if (!topology_.remove_edge(ev.a, ev.b)) {
      trace_.record(now_, std::min(ev.a, ev.b),
                    {{"link", "absent"},
                     {"peer", std::max(ev.a, ev.b).canonical()}});
      return;
    }
    const DeviceId& first = std::min(ev.a, ev.b);
    const DeviceId& second = std::max(ev.a, ev.b);
    trace_.record(now_, first, {{"link", "down"}, {"peer", second.canonical()}});
    trace_.record(now_, second, {{"link", "down"}, {"peer", first.canonical()}});

    std::set<DeviceId> new_a = old_a;
    new_a.erase(ev.b);
    std::set<DeviceId> new_b = old_b;
    new_b.erase(ev.a);
    if (first == ev.a) {
      apply_discovery(ev.a, old_a, new_a);
      apply_discovery(ev.b, old_b, new_b);
    } else {
      apply_discovery(ev.b, old_b, new_b);
      apply_discovery(ev.a, old_a, new_a);
    }
  } catch (const Error& e) {
    trace_error(ev.a, e);
  }
}

void World::apply_discovery(const DeviceId& observer,
                            const std::set<DeviceId>& old_neighbors,
                            const std::set<DeviceId>& new_neighbors) {
  NodeState& node = state(observer);
  for (const DiscoveryEvent& ev :
       emit_discovery_events(old_neighbors, new_neighbors, observer, now_)) {
    if (ev.kind == DiscoveryKind::PeerFound) {
      trace_.record(now_, observer, {{"peer_found", ev.subject.canonical()}});
      RouteChange change = handle_peer_found(node.table, ev.subject);
      apply_route_change(node, change);
      if (!change.broadcast_required) {
        // Rediscovery of an already-known peer: the key set is unchanged,
        // so no broadcast fires and the new direct link would carry no
        // table exchange at all. Without one, a peer whose prior route ran
        // through us can be left unreachable for good once split-horizon
        // pruning has done its work. Introduce ourselves over the new link
        // instead; one unicast per discovery keeps traffic finite.
        send_introduction(node, ev.subject);
      }
    } else {
      trace_.record(now_, observer, {{"peer_lost", ev.subject.canonical()}});
      node.neighbor_advertised.erase(ev.subject);
      node.route_offer_armed.erase(ev.subject);
      apply_route_change(
          node, handle_peer_lost(node.table, ev.subject, routing_options()));
    }
  }
}

void World::send_introduction(NodeState& node, const DeviceId& peer) {
  if (!topology_.adjacent(node.id, peer)) {
    return;
  }
  RoutingOptions options = routing_options();
  std::optional<DeviceId> target;
  if (options.split_horizon) {
    target = peer;
  }
  RoutingUpdate update = build_update(node.table, target, options);
  trace_.record(now_, node.id,
                {{"update_intro", peer.canonical()},
                 {"seq", std::to_string(update.seq)},
                 {"reachable", join_canonicals(update.reachable)}});
  counters_.routing_updates_sent += 1;
  Envelope envelope;
  envelope.kind = "update";
  envelope.advisory = true;
  envelope.body = std::move(update);
  send_link(node.id, peer, std::move(envelope));
}

void World::trace_table(const NodeState& node) {
  trace_.record(now_, node.id, {{"table", table_snapshot(node.table)}});
}

void World::apply_route_change(NodeState& node, const RouteChange& change) {
  if (change.table_changed) {
    trace_table(node);
  }
  if (change.broadcast_required) {
    broadcast_updates(node);
  }
}

void World::broadcast_updates(NodeState& node) {
  RoutingOptions options = routing_options();
  for (const DeviceId& neighbor : topology_.neighbors(node.id)) {
    std::optional<DeviceId> target;
    if (options.split_horizon) {
      target = neighbor;
    }
    RoutingUpdate update = build_update(node.table, target, options);
    trace_.record(now_, node.id,
                  {{"update_sent", neighbor.canonical()},
                   {"seq", std::to_string(update.seq)},
                   {"reachable", join_canonicals(update.reachable)}});
    counters_.routing_updates_sent += 1;
    Envelope envelope;
    envelope.kind = "update";
    envelope.body = std::move(update);
    send_link(node.id, neighbor, std::move(envelope));
  }
}

// ---------------------------------------------------------------------------
// link layer
// ---------------------------------------------------------------------------

void World::send_link(const DeviceId& from, const DeviceId& to,
                      Envelope envelope) {
  if (!topology_.adjacent(from, to)) {
    throw Error(ErrorCode::NotAdjacent,
                from.canonical() + " is not adjacent to " + to.canonical());
  }
  envelope.msg_id = ++next_msg_id_;
  envelope.link_from = from;
  envelope.link_to = to;
  envelope.edge_generation = topology_.edge_generation(from, to);
  counters_.messages_sent += 1;
  pending_messages_ += 1;
  schedule(now_ + config_.latency_ticks, MessageArrival{std::move(envelope)});
}

void World::on_message(const MessageArrival& ev) {
  pending_messages_ -= 1;
  const Envelope& env = ev.envelope;
  const bool link_alive =
      present(env.link_to) && present(env.link_from) &&
      topology_.adjacent(env.link_from, env.link_to) &&
      topology_.edge_generation(env.link_from, env.link_to) ==
          env.edge_generation;
  if (!link_alive) {
    counters_.dropped_link_down += 1;
    std::vector<std::pair<std::string, std::string>> fields = {
        {"drop", "link_down"},
        {"kind", env.kind},
        {"msg", std::to_string(env.msg_id)}};
    if (env.pkt_id != 0) {
      fields.emplace_back("pkt", std::to_string(env.pkt_id));
    }
    trace_.record(now_, env.link_to, std::move(fields));
    return;
  }
  counters_.messages_delivered += 1;
  NodeState& node = state(env.link_to);

  if (const auto* update = std::get_if<RoutingUpdate>(&env.body)) {
    RouteChange change;
    try {
      change = handle_routing_update(node.table, *update, routing_options(),
                                     env.advisory ? UpdateMode::Advisory
                                                  : UpdateMode::Signal);
    } catch (const Error& e) {
      trace_error(node.id, e);
      return;
    }
    trace_.record(now_, node.id,
                  {{"update_recv", update->sender.canonical()},
                   {"seq", std::to_string(update->seq)},
                   {"stale", change.stale ? "1" : "0"}});
    if (!change.stale) {
      std::set<DeviceId> advertised(update->reachable.begin(),
                                    update->reachable.end());
      advertised.insert(update->poisoned.begin(), update->poisoned.end());
      node.neighbor_advertised[update->sender] = std::move(advertised);
    }
    apply_route_change(node, change);
    // The sender may demonstrably lack peers we reach elsewhere — the gaps
    // split-horizon's mutual pruning leaves behind — and its broadcast
    // discipline gives it no way to ask. Queue one deferred offer,
    // re-checked against the sender's latest word before anything is sent,
    // so gaps the storm heals by itself cost no traffic.
    if (!change.stale && !update_deficit(node.table, *update).empty() &&
        node.route_offer_armed.insert(update->sender).second) {
      schedule(now_ + 2 * config_.latency_ticks,
               RouteOfferEvent{node.id, update->sender});
    }
    return;
  }

  const DataPacket& packet = std::get<DataPacket>(env.body);
  if (packet.dst == node.id) {
    dispatch_app(node, packet, env.link_from, env.pkt_id, env.kind);
  } else {
    forward_packet(node, packet, env.pkt_id, env.kind, false);
  }
}

void World::originate(const DeviceId& origin, const DeviceId& dst,
                      const AppMessage& message) {
  if (dst == origin) {
    return;
  }
  DataPacket packet;
  packet.src = origin;
  packet.dst = dst;
  packet.ttl = effective_ttl();
  packet.payload = encode_message(message);
  forward_packet(state(origin), packet, ++next_pkt_id_,
                 app_message_kind(message), true);
}

void World::forward_packet(NodeState& node, const DataPacket& packet,
                           std::uint64_t pkt_id, const std::string& kind,
                           bool at_origin) {
  ForwardDecision decision = forward(node.table, packet);
  if (std::holds_alternative<DeliverLocally>(decision)) {
    dispatch_app(node, packet, node.id, pkt_id, kind);
    return;
  }
  if (const auto* drop = std::get_if<Drop>(&decision)) {
    switch (drop->reason) {
      case DropReason::TtlExpired: counters_.dropped_ttl_expired += 1; break;
      case DropReason::LoopDetected:
        counters_.dropped_loop_detected += 1;
        break;
      case DropReason::NoRoute: counters_.dropped_no_route += 1; break;
    }
    trace_.record(now_, node.id,
                  {{"drop", drop_reason_name(drop->reason)},
                   {"kind", kind},
                   {"dst", packet.dst.canonical()},
                   {"pkt", std::to_string(pkt_id)}});
    return;
  }
  const auto& send = std::get<SendTo>(decision);
  if (!topology_.adjacent(node.id, send.via)) {
    // A stale via (possible in faithful mode) points at a peer that is no
    // longer in range.
    counters_.dropped_not_adjacent += 1;
    trace_.record(now_, node.id,
                  {{"drop", "not_adjacent"},
                   {"kind", kind},
                   {"dst", packet.dst.canonical()},
                   {"via", send.via.canonical()},
                   {"pkt", std::to_string(pkt_id)}});
    return;
  }
  trace_.record(now_, node.id,
                {{at_origin ? "send" : "relay", kind},
                 {"dst", packet.dst.canonical()},
                 {"via", send.via.canonical()},
                 {"pkt", std::to_string(pkt_id)},
                 {"ttl", std::to_string(send.packet.ttl)}});
  Envelope envelope;
  envelope.pkt_id = pkt_id;
  envelope.kind = kind;
  envelope.body = send.packet;
  send_link(node.id, send.via, std::move(envelope));
}

// ---------------------------------------------------------------------------
// application layer
// ---------------------------------------------------------------------------

void World::dispatch_app(NodeState& node, const DataPacket& packet,
                         const DeviceId& link_from, std::uint64_t pkt_id,
                         const std::string& kind) {
  counters_.packets_delivered += 1;
  trace_.record(now_, node.id,
                {{"recv", kind},
                 {"src", packet.src.canonical()},
                 {"from", link_from.canonical()},
                 {"pkt", std::to_string(pkt_id)},
                 {"hops", std::to_string(packet.visited.size())}});
  AppMessage message;
  try {
    message = decode_message(packet.payload);
  } catch (const Error& e) {
    trace_error(node.id, e);
    return;
  }
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, JoinRequest>) {
          on_join_request(node, packet.src);
        } else if constexpr (std::is_same_v<T, PadSnapshot>) {
          node.store.open_pad(body);
          trace_.record(now_, node.id,
                        {{"pad", "open"},
                         {"doc", body.doc_id},
                         {"rev", std::to_string(body.revision)},
                         {"content", body.content}});
        } else if constexpr (std::is_same_v<T, RealTimeUpdate>) {
          on_realtime_update(node, body);
        } else if constexpr (std::is_same_v<T, FileOffer>) {
          on_file_offer(node, body);
        } else if constexpr (std::is_same_v<T, OfferResponse>) {
          on_offer_response(node, body);
        } else {
          // RawData: the recv record is the delivery evidence.
        }
      },
      message);
}

void World::on_join_request(NodeState& host, const DeviceId& joiner) {
  try {
    SessionManager::JoinResult result = sessions_.join(joiner, host.id);
    if (result.already_member) {
      trace_.record(now_, joiner,
                    {{"session_noop", "already_member"},
                     {"session", result.session}});
      return;
    }
    for (const DeviceId& member : result.orphaned) {
      trace_.record(now_, member, {{"session_event", "orphaned"}});
    }
    if (!result.orphaned.empty() && knows(joiner)) {
      state(joiner).ad.metadata.erase("hosts_session");
    }
    if (result.left_session) {
      trace_.record(now_, joiner,
                    {{"session_event", "leave"},
                     {"session", *result.left_session}});
    }
    trace_.record(now_, joiner,
                  {{"session_event", "join"}, {"session", result.session}});
    const Session* session = sessions_.find(result.session);
    if (session != nullptr && !session->active_doc.empty()) {
      const MoMDocument* doc = host.store.find_by_doc_id(session->active_doc);
      if (doc != nullptr) {
        PadSnapshot snapshot;
        snapshot.doc_id = doc->doc_id;
        snapshot.title = doc->title;
        snapshot.revision = doc->revision;
        snapshot.content = doc->content;
        snapshot.owner = doc->owned_by;
        originate(host.id, joiner, snapshot);
      }
    }
  } catch (const Error& e) {
    trace_error(host.id, e);
  }
}

void World::on_realtime_update(NodeState& node, const RealTimeUpdate& update) {
  try {
    ApplyResult result = node.store.apply_realtime_update(update);
    if (result == ApplyResult::Applied) {
      trace_.record(now_, node.id,
                    {{"rt", "apply"},
                     {"doc", update.doc_id},
                     {"rev", std::to_string(update.base_revision)},
                     {"content", update.content}});
    } else {
      trace_.record(now_, node.id,
                    {{"rt", "stale"},
                     {"doc", update.doc_id},
                     {"rev", std::to_string(update.base_revision)}});
    }
  } catch (const Error& e) {
    trace_error(node.id, e);
  }
}

void World::on_file_offer(NodeState& node, const FileOffer& offer) {
  if (node.policy == OfferPolicy::Hold) {
    node.held_offers.push_back(offer);
    trace_.record(now_, node.id,
                  {{"offer", "held"},
                   {"id", offer.offer_id},
                   {"doc", offer.doc_id}});
    return;
  }
  respond_to_offer(node, offer,
                   node.policy == OfferPolicy::Accept ? OfferDecision::Accept
                                                      : OfferDecision::Reject);
}

void World::respond_to_offer(NodeState& node, const FileOffer& offer,
                             OfferDecision decision) {
  try {
    OfferResponse response = node.store.respond(offer, decision);
    trace_.record(now_, node.id,
                  {{"offer", response.accepted ? "accept" : "reject"},
                   {"id", offer.offer_id},
                   {"doc", offer.doc_id}});
    originate(node.id, offer.owner, response);
  } catch (const Error& e) {
    trace_error(node.id, e);
  }
}

void World::on_offer_response(NodeState& node, const OfferResponse& response) {
  try {
    node.store.record_response(response);
    trace_.record(now_, node.id,
                  {{"share_ack", response.recipient.canonical()},
                   {"doc", response.doc_id},
                   {"accepted", response.accepted ? "1" : "0"}});
  } catch (const Error& e) {
    trace_error(node.id, e);
  }
}

// ---------------------------------------------------------------------------
// user actions
// ---------------------------------------------------------------------------

void World::on_action(const UserAction& action) {
  std::visit(
      [this](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, HostAction>) {
          do_host(body);
        } else if constexpr (std::is_same_v<T, JoinAction>) {
          do_join(body);
        } else if constexpr (std::is_same_v<T, LeaveAction>) {
          do_leave(body);
        } else if constexpr (std::is_same_v<T, CreateAction>) {
          do_create(body);
        } else if constexpr (std::is_same_v<T, EditAction>) {
          do_edit(body);
        } else if constexpr (std::is_same_v<T, TypeAction>) {
          do_type(body);
        } else if constexpr (std::is_same_v<T, ShareAction>) {
          do_share(body);
        } else if constexpr (std::is_same_v<T, RenameAction>) {
          do_rename(body);
        } else if constexpr (std::is_same_v<T, DeleteAction>) {
          do_delete(body);
        } else if constexpr (std::is_same_v<T, OfferPolicyAction>) {
          do_offer_policy(body);
        } else if constexpr (std::is_same_v<T, RespondAction>) {
          do_respond_held(body);
        } else {
          do_send(body);
        }
      },
      action);
}

bool World::require_present(const DeviceId& id) {
  if (!present(id)) {
    trace_error(id, Error(ErrorCode::UnknownNode,
                          "node not present: " + id.canonical()));
    return false;
  }
  return true;
}

void World::do_host(const HostAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    SessionManager::HostResult result =
        sessions_.host_session(action.node, action.session_base);
    if (result.already_hosting) {
      trace_.record(now_, action.node,
                    {{"session_noop", "already_hosting"},
                     {"session", result.session}});
      return;
    }
    if (result.left_session) {
      trace_.record(now_, action.node,
                    {{"session_event", "leave"},
                     {"session", *result.left_session}});
    }
    node.ad.metadata["hosts_session"] = result.session;
    trace_.record(now_, action.node,
                  {{"session_event", "host"}, {"session", result.session}});
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::do_join(const JoinAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    std::set<DeviceId> visible;
    visible.insert(action.node);
    for (const auto& [peer, via] : node.table.entries) {
      visible.insert(peer);
    }
    RoleDecision decision =
        SessionManager::choose_role(action.node, action.host, visible);
    if (decision.become_scribe) {
      throw Error(ErrorCode::SchemaViolation,
                  "join target is the node itself; use a host action");
    }
    originate(action.node, action.host, JoinRequest{});
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::do_leave(const LeaveAction& action) {
  if (!require_present(action.node)) return;
  try {
    std::string session = sessions_.leave(action.node);
    trace_.record(now_, action.node,
                  {{"session_event", "leave"}, {"session", session}});
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::do_create(const CreateAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    const MoMDocument& doc = node.store.create(action.title);
    trace_.record(now_, action.node,
                  {{"mom_event", "create"},
                   {"doc", doc.doc_id},
                   {"title", doc.title}});
    const Session* session = sessions_.hosted_by(action.node);
    if (session != nullptr) {
      sessions_.find_mutable(session->name)->active_doc = doc.doc_id;
      fan_out_snapshot(node, *sessions_.find(session->name), doc.doc_id);
    }
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::commit_edit(NodeState& node, const std::string& title,
                        const std::string& content, const char* how) {
  RealTimeUpdate update = node.store.edit(title, content);
  trace_.record(now_, node.id,
                {{"mom_event", how},
                 {"doc", update.doc_id},
                 {"rev", std::to_string(update.base_revision)},
                 {"content", update.content}});
  const Session* session = sessions_.hosted_by(node.id);
  if (session == nullptr) {
    return;
  }
  if (session->active_doc != update.doc_id) {
    // The scribe switched documents: members need a fresh pad, not a delta
    // against one they never opened.
    sessions_.find_mutable(session->name)->active_doc = update.doc_id;
    fan_out_snapshot(node, *sessions_.find(session->name), update.doc_id);
    return;
  }
  for (const DeviceId& member : session->members) {
    originate(node.id, member, update);
  }
}

void World::do_edit(const EditAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    commit_edit(node, action.title, action.content, "edit");
    node.pending_text.erase(action.title);
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::do_type(const TypeAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    if (node.store.find_my(action.title) == nullptr) {
      if (node.store.find_shared(action.title) != nullptr) {
        throw Error(ErrorCode::NotOwner, "Only Scribe Can Edit");
      }
      throw Error(ErrorCode::NotFound, "no such document: " + action.title);
    }
    node.pending_text[action.title] = action.content;
    trace_.record(now_, action.node,
                  {{"mom_event", "type"}, {"title", action.title}});
    if (node.autosave_armed.insert(action.title).second) {
      schedule(now_ + config_.auto_save_ticks,
               AutoSaveEvent{action.node, action.title});
    }
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::on_route_offer(const RouteOfferEvent& ev) {
  if (!present(ev.node)) {
    return;
  }
  NodeState& node = state(ev.node);
  node.route_offer_armed.erase(ev.peer);
  if (!present(ev.peer) || !topology_.adjacent(node.id, ev.peer)) {
    return;
  }
  auto advertised = node.neighbor_advertised.find(ev.peer);
  if (advertised == node.neighbor_advertised.end()) {
    return;
  }
  RoutingUpdate latest_word;
  latest_word.sender = ev.peer;
  latest_word.reachable.assign(advertised->second.begin(),
                               advertised->second.end());
  if (!update_deficit(node.table, latest_word).empty()) {
    send_introduction(node, ev.peer);
  }
}

void World::on_auto_save(const AutoSaveEvent& ev) {
  if (!present(ev.node)) {
    return;
  }
  NodeState& node = state(ev.node);
  node.autosave_armed.erase(ev.title);
  auto pending = node.pending_text.find(ev.title);
  if (pending == node.pending_text.end()) {
    return;  // an explicit edit already committed the draft
  }
  std::string content = pending->second;
  node.pending_text.erase(pending);
  try {
    commit_edit(node, ev.title, content, "autosave");
  } catch (const Error& e) {
    trace_error(ev.node, e);
  }
}

void World::do_share(const ShareAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    std::vector<FileOffer> offers =
        node.store.share(action.title, action.recipients);
    const MoMDocument* doc = node.store.find_my(action.title);
    trace_.record(now_, action.node,
                  {{"mom_event", "share"},
                   {"doc", doc != nullptr ? doc->doc_id : ""},
                   {"offers", std::to_string(offers.size())}});
    for (const FileOffer& offer : offers) {
      originate(action.node, offer.recipient, offer);
    }
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::do_rename(const RenameAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    node.store.rename(action.from, action.to);
    trace_.record(now_, action.node,
                  {{"mom_event", "rename"},
                   {"from", action.from},
                   {"to", action.to}});
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::do_delete(const DeleteAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  try {
    node.store.remove(action.title);
    trace_.record(now_, action.node,
                  {{"mom_event", "delete"}, {"title", action.title}});
  } catch (const Error& e) {
    trace_error(action.node, e);
  }
}

void World::do_offer_policy(const OfferPolicyAction& action) {
  if (!require_present(action.node)) return;
  state(action.node).policy = action.policy;
  trace_.record(now_, action.node,
                {{"offer_policy", offer_policy_name(action.policy)}});
}

void World::do_respond_held(const RespondAction& action) {
  if (!require_present(action.node)) return;
  NodeState& node = state(action.node);
  if (node.held_offers.empty()) {
    trace_error(action.node,
                Error(ErrorCode::NotFound, "no held offer to respond to"));
    return;
  }
  FileOffer offer = node.held_offers.front();
  node.held_offers.pop_front();
  respond_to_offer(node, offer, action.decision);
}

void World::do_send(const SendAction& action) {
  if (!require_present(action.from)) return;
  try {
    originate(action.from, action.to, RawData{action.payload});
  } catch (const Error& e) {
    trace_error(action.from, e);
  }
}

void World::fan_out_snapshot(NodeState& host, const Session& session,
                             const std::string& doc_id) {
  const MoMDocument* doc = host.store.find_by_doc_id(doc_id);
  if (doc == nullptr) {
    return;
  }
  PadSnapshot snapshot;
  snapshot.doc_id = doc->doc_id;
  snapshot.title = doc->title;
  snapshot.revision = doc->revision;
  snapshot.content = doc->content;
  snapshot.owner = doc->owned_by;
  for (const DeviceId& member : session.members) {
    originate(host.id, member, snapshot);
  }
}

}  // namespace pbn
