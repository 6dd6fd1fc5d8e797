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

#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pbn/device_id.hpp"
#include "pbn/discovery.hpp"
#include "pbn/error.hpp"
#include "pbn/message.hpp"
#include "pbn/mom.hpp"
#include "pbn/routing.hpp"
#include "pbn/session.hpp"
#include "pbn/topology.hpp"
#include "pbn/trace.hpp"

namespace pbn {

struct SimConfig {
  std::uint32_t latency_ticks = 1;  // link message delay, >= 1
  std::uint32_t ttl = 0;            // 0 = node count of the scenario
  bool split_horizon = true;
  bool faithful_routing = false;  // literal delete-one-key rule, no cascade
  bool strict_updates = false;    // reject updates from non-neighbors
  std::uint64_t seed = 0;         // consumed by scenario generators only
  std::uint32_t auto_save_ticks = 5;
  Tick max_ticks = 10000;
};

enum class OfferPolicy { Accept, Reject, Hold };

// Scenario-level user actions, dispatched at their scheduled tick.
struct HostAction { DeviceId node; std::string session_base; };
struct JoinAction { DeviceId node; DeviceId host; };
struct LeaveAction { DeviceId node; };
struct CreateAction { DeviceId node; std::string title; };
struct EditAction { DeviceId node; std::string title; std::string content; };
struct TypeAction { DeviceId node; std::string title; std::string content; };
struct ShareAction {
  DeviceId node;
  std::string title;
  std::vector<DeviceId> recipients;
};
struct RenameAction { DeviceId node; std::string from; std::string to; };
struct DeleteAction { DeviceId node; std::string title; };
struct OfferPolicyAction { DeviceId node; OfferPolicy policy; };
struct RespondAction { DeviceId node; OfferDecision decision; };
struct SendAction { DeviceId from; DeviceId to; std::string payload; };

using UserAction =
    std::variant<HostAction, JoinAction, LeaveAction, CreateAction, EditAction,
                 TypeAction, ShareAction, RenameAction, DeleteAction,
                 OfferPolicyAction, RespondAction, SendAction>;

/// One hop of transit: either a neighbor-broadcast routing update or a
/// multi-hop data packet. The edge generation stamps which incarnation of
/// the link the message was sent on; if the link flaps before arrival the
/// message is lost.
struct Envelope {
  std::uint64_t msg_id = 0;  // link-level message id
  std::uint64_t pkt_id = 0;  // end-to-end packet id (0 for updates)
  std::string kind;          // update, join, pad, rtupdate, offer,
                             // response, data
  bool advisory = false;     // link-local table offer, not a broadcast
  DeviceId link_from;
  DeviceId link_to;
  std::uint64_t edge_generation = 0;
  std::variant<RoutingUpdate, DataPacket> body;
};

struct AddNodeEvent { DeviceId id; };
struct RemoveNodeEvent { DeviceId id; };
struct AddEdgeEvent { DeviceId a; DeviceId b; };
struct RemoveEdgeEvent { DeviceId a; DeviceId b; };
struct MessageArrival { Envelope envelope; };
struct AutoSaveEvent { DeviceId node; std::string title; };
// Deferred route offer: re-check an observed routing deficit at `peer`
// once the update storm has had time to settle, and send one unicast
// table offer if the gap is still there.
struct RouteOfferEvent { DeviceId node; DeviceId peer; };

using SimEventBody = std::variant<AddNodeEvent, RemoveNodeEvent, AddEdgeEvent,
                                  RemoveEdgeEvent, UserAction, MessageArrival,
                                  AutoSaveEvent, RouteOfferEvent>;

struct SimEvent {
  Tick time = 0;
  std::uint64_t seq = 0;  // enqueue order; FIFO tie-break within a tick
  SimEventBody body;
};

struct Counters {
  std::uint64_t messages_sent = 0;       // link-level sends
  std::uint64_t messages_delivered = 0;  // link-level arrivals processed
  std::uint64_t dropped_link_down = 0;
  std::uint64_t dropped_not_adjacent = 0;
  std::uint64_t dropped_ttl_expired = 0;
  std::uint64_t dropped_loop_detected = 0;
  std::uint64_t dropped_no_route = 0;
  std::uint64_t routing_updates_sent = 0;
  std::uint64_t packets_delivered = 0;  // packets that reached their dst

  std::uint64_t dropped_total() const {
    return dropped_link_down + dropped_not_adjacent + dropped_ttl_expired +
           dropped_loop_detected + dropped_no_route;
  }
};

struct QuiescenceReport {
  bool quiescent = false;
  Tick ticks_elapsed = 0;
  std::uint64_t events_processed = 0;
  std::uint64_t in_flight = 0;  // queued messages left at stop
  Counters counters;
};

/// Deterministic discrete-event world: the proximity graph, one routing
/// table / document store per device, the session registry, and a
/// (time, seq)-ordered event queue. Discovery notifications fire
/// synchronously at the tick a topology change is applied; messages travel
/// with the configured latency. Single logical thread; identical inputs
/// give byte-identical traces.
class World {
 public:
  explicit World(SimConfig config);

  const SimConfig& config() const { return config_; }
  std::uint32_t effective_ttl() const;

  // -- schedule ------------------------------------------------------------
  void schedule(Tick time, SimEventBody body);

  // -- run -----------------------------------------------------------------
  QuiescenceReport run_until_quiescent(Tick max_ticks);
  QuiescenceReport run_until_quiescent() {
    return run_until_quiescent(config_.max_ticks);
  }

  // -- state ---------------------------------------------------------------
  const Topology& topology() const { return topology_; }
  const SessionManager& sessions() const { return sessions_; }
  SessionManager& sessions() { return sessions_; }
  const TraceLog& trace() const { return trace_; }
  const Counters& counters() const { return counters_; }
  Tick now() const { return now_; }

  bool knows(const DeviceId& id) const { return states_.count(id) != 0; }
  bool present(const DeviceId& id) const;
  const RoutingTable& table_of(const DeviceId& id) const;
  const MomStore& store_of(const DeviceId& id) const;
  const Advertisement& advertisement_of(const DeviceId& id) const;
  std::vector<DeviceId> known_nodes() const;

 private:
  struct NodeState {
    DeviceId id;
    bool present = false;
    RoutingTable table;
    Advertisement ad;
    MomStore store;
    OfferPolicy policy = OfferPolicy::Accept;
    std::deque<FileOffer> held_offers;
    std::map<std::string, std::string> pending_text;  // title -> draft
    std::set<std::string> autosave_armed;             // titles with a commit queued
    // Last reachable-plus-poisoned set each neighbor advertised, and
    // neighbors with a deferred route offer already queued.
    std::map<DeviceId, std::set<DeviceId>> neighbor_advertised;
    std::set<DeviceId> route_offer_armed;
  };

  struct EventOrder {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  NodeState& state(const DeviceId& id);
  const NodeState& state(const DeviceId& id) const;
  RoutingOptions routing_options() const;

  void dispatch(const SimEvent& event);
  void on_add_node(const AddNodeEvent& ev);
  void on_remove_node(const RemoveNodeEvent& ev);
  void on_add_edge(const AddEdgeEvent& ev);
  void on_remove_edge(const RemoveEdgeEvent& ev);
  void on_message(const MessageArrival& ev);
  void on_auto_save(const AutoSaveEvent& ev);
  void on_route_offer(const RouteOfferEvent& ev);
  void on_action(const UserAction& action);

  void apply_discovery(const DeviceId& observer,
                       const std::set<DeviceId>& old_neighbors,
                       const std::set<DeviceId>& new_neighbors);
  void apply_route_change(NodeState& node, const RouteChange& change);
  void trace_table(const NodeState& node);
  void broadcast_updates(NodeState& node);
  void send_introduction(NodeState& node, const DeviceId& peer);

  void send_link(const DeviceId& from, const DeviceId& to, Envelope envelope);
  void originate(const DeviceId& origin, const DeviceId& dst,
                 const AppMessage& message);
  void forward_packet(NodeState& node, const DataPacket& packet,
                      std::uint64_t pkt_id, const std::string& kind,
                      bool at_origin);
  void dispatch_app(NodeState& node, const DataPacket& packet,
                    const DeviceId& link_from, std::uint64_t pkt_id,
                    const std::string& kind);

  // application-message handlers
  void on_join_request(NodeState& host, const DeviceId& joiner);
  void on_realtime_update(NodeState& node, const RealTimeUpdate& update);
  void on_file_offer(NodeState& node, const FileOffer& offer);
  void on_offer_response(NodeState& node, const OfferResponse& response);

  // user-action handlers
  bool require_present(const DeviceId& id);
  void do_host(const HostAction& action);
  void do_join(const JoinAction& action);
  void do_leave(const LeaveAction& action);
  void do_create(const CreateAction& action);
  void commit_edit(NodeState& node, const std::string& title,
                   const std::string& content, const char* how);
  void do_edit(const EditAction& action);
  void do_type(const TypeAction& action);
  void do_share(const ShareAction& action);
  void do_rename(const RenameAction& action);
  void do_delete(const DeleteAction& action);
  void do_offer_policy(const OfferPolicyAction& action);
  void do_respond_held(const RespondAction& action);
  void do_send(const SendAction& action);
  void respond_to_offer(NodeState& node, const FileOffer& offer,
                        OfferDecision decision);
  void fan_out_snapshot(NodeState& host, const Session& session,
                        const std::string& doc_id);
  void trace_error(const DeviceId& node, const Error& error);

  SimConfig config_;
  Topology topology_;
  SessionManager sessions_;
  TraceLog trace_;
  Counters counters_;
  std::map<DeviceId, NodeState> states_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, EventOrder> queue_;
  Tick now_ = 0;
  std::uint64_t next_event_seq_ = 0;
  std::uint64_t next_msg_id_ = 0;
  std::uint64_t next_pkt_id_ = 0;
  std::uint64_t pending_messages_ = 0;
};

}  // namespace pbn
