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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pbn/device_id.hpp"

namespace pbn {

/// Per-node routing state. `entries` maps a reachable peer to the immediate
/// neighbor it is reached through; an entry <P,P> means P is a direct
/// neighbor, <P,V> with V != P a multi-hop route via V.
///
/// Structural invariants (default options):
///   - the owner never appears as a key
///   - every Reachable_Via value has its own <V,V> entry
struct RoutingTable {
  DeviceId owner;
  std::map<DeviceId, DeviceId> entries;

  // Update bookkeeping: stale-update suppression per sender, and the
  // monotonically increasing sequence stamped onto outgoing updates.
  std::map<DeviceId, std::uint64_t> last_seq_seen;
  std::uint64_t update_seq = 0;
};

/// The sessionless-signal payload: the sender's reachable-peer key list.
/// Via values stay local to each node; receivers only consult key presence.
///
/// `poisoned` carries the keys split horizon removed from `reachable` for
/// this target — peers the sender reaches *through the recipient*. Receivers
/// never install routes from it; it exists so a recipient can tell "the
/// sender lacks this peer" apart from "the sender routes this peer through
/// me", which is what makes deficit-triggered table offers terminate.
struct RoutingUpdate {
  DeviceId sender;
  std::vector<DeviceId> reachable;  // sorted by canonical id, no duplicates
  std::vector<DeviceId> poisoned;   // sorted, disjoint from reachable
  std::vector<DeviceId> direct;     // subset of reachable: the sender's own
                                    // immediate neighbors among those keys
  std::uint64_t seq = 0;
};

/// Outcome of a table mutation. A broadcast is required exactly when the
/// key set changed; via-only rewrites stay local.
struct RouteChange {
  bool table_changed = false;
  bool broadcast_required = false;
  bool stale = false;  // update ignored: sequence not newer than last seen
  std::set<DeviceId> added;
  std::set<DeviceId> removed;
};

struct RoutingOptions {
  // Deleting a direct neighbor also drops every route through it. Off in
  // faithful mode, which reproduces the literal delete-one-key rule and its
  // dangling multi-hop entries.
  bool cascade_on_loss = true;
  // Omit, from an update addressed to neighbor N, keys routed via N
  // (the entry for N itself is kept).
  bool split_horizon = true;
  // Reject updates from non-neighbors instead of synthesizing the missed
  // discovery notification first.
  bool strict_update_sender = false;
};

/// Discovery notification: `peer` arrived in the owner's proximity.
/// Absent key -> insert <peer,peer> and request a broadcast. Present with a
/// multi-hop via -> overwrite to <peer,peer> (direct discovery supersedes a
/// relayed route) without a broadcast, since the key set is unchanged.
/// Throws SelfDiscovery if peer equals the owner.
RouteChange handle_peer_found(RoutingTable& table, const DeviceId& peer);

/// Discovery notification: `peer` left the owner's proximity. Deletes the
/// peer's key and, unless cascade is disabled, every route via the peer.
/// Unknown peers are a no-op.
RouteChange handle_peer_lost(RoutingTable& table, const DeviceId& peer,
                             const RoutingOptions& options = {});

/// How an incoming update is allowed to act on the table. A broadcast
/// signal carries the full rule set, including last-received-wins route
/// rewrites. An advisory exchange (the link-local offers the simulator uses
/// to seal split-horizon gaps) may insert missing routes and prune routes
/// the sender's poison list disowns, but never rewrites a live via —
/// otherwise two chatty neighbors can keep flipping a route between
/// themselves forever.
enum class UpdateMode { Signal, Advisory };

/// Processes a neighbor's reachable-peer list:
///   - absent peers are adopted with the sender as via;
///   - in Signal mode an existing multi-hop route is rewritten to the last
///     sender that reports the peer as its own immediate neighbor (the
///     discovery-information rule); relayed mentions never rewrite a live
///     route, which is what keeps two relays from endlessly flipping a
///     route onto each other. Advisory mode never rewrites;
///   - every existing route via the sender whose key is missing from
///     `reachable` is deleted (a poisoned key deletes too: the sender
///     routes it through us, so a route back through the sender is a
///     two-node cycle).
/// Updates whose sequence is not newer than the last seen from this sender
/// are ignored (`stale` set in the result). Updates from non-neighbors
/// throw UnknownSender in strict mode; otherwise the sender is first
/// inserted as if a discovery notification had been delivered.
RouteChange handle_routing_update(RoutingTable& table,
                                  const RoutingUpdate& update,
                                  const RoutingOptions& options = {},
                                  UpdateMode mode = UpdateMode::Signal);

/// Builds the outgoing update: the sorted key list, with split-horizon
/// filtering applied when enabled and a target neighbor is given.
/// Increments the table's update sequence.
RoutingUpdate build_update(RoutingTable& table,
                           const std::optional<DeviceId>& split_horizon_target
                           = std::nullopt,
                           const RoutingOptions& options = {});

/// Peers this table can reach (not through the sender) that the sender's
/// update mentions in neither list — i.e. routes the sender genuinely lacks
/// and cannot learn from us through split horizon's omissions.
std::set<DeviceId> update_deficit(const RoutingTable& table,
                                  const RoutingUpdate& update);

/// Returns the immediate neighbor through which dst is reached.
/// Throws Unreachable if dst has no entry.
DeviceId next_hop(const RoutingTable& table, const DeviceId& dst);

/// True when the structural invariants hold (owner not a key, every via has
/// a self-entry). Faithful mode deliberately violates the second one.
bool routing_invariants_hold(const RoutingTable& table);

/// Unit of multi-hop delivery. `visited` records each node that forwarded
/// the packet; a repeat visit is a routing loop and is reported, never
/// silently tolerated.
struct DataPacket {
  DeviceId src;
  DeviceId dst;
  std::uint32_t ttl = 0;
  std::string payload;
  std::vector<DeviceId> visited;
};

enum class DropReason { TtlExpired, LoopDetected, NoRoute };

const char* drop_reason_name(DropReason reason);

struct DeliverLocally {};
struct SendTo {
  DeviceId via;
  DataPacket packet;  // ttl decremented, owner appended to visited
};
struct Drop {
  DropReason reason = DropReason::NoRoute;
};

using ForwardDecision = std::variant<DeliverLocally, SendTo, Drop>;

/// Per-hop forwarding decision, checked in order: local delivery, TTL
/// exhaustion, loop detection, then next-hop lookup.
ForwardDecision forward(const RoutingTable& table, const DataPacket& packet);

}  // namespace pbn
