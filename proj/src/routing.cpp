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

#include "pbn/routing.hpp"

#include <algorithm>

#include "pbn/error.hpp"

namespace pbn {

RouteChange handle_peer_found(RoutingTable& table, const DeviceId& peer) {
  if (peer == table.owner) {
    throw Error(ErrorCode::SelfDiscovery,
                "node discovered itself: " + peer.canonical());
  }
  RouteChange change;
  auto it = table.entries.find(peer);
  if (it == table.entries.end()) {
    table.entries.emplace(peer, peer);
    change.table_changed = true;
    change.broadcast_required = true;
    change.added.insert(peer);
  } else if (it->second != peer) {
    // Direct discovery supersedes a relayed route; key set is unchanged,
    // so neighbors have nothing new to learn.
    it->second = peer;
    change.table_changed = true;
  }
  return change;
}

RouteChange handle_peer_lost(RoutingTable& table, const DeviceId& peer,
                             const RoutingOptions& options) {
  RouteChange change;
  if (table.entries.erase(peer) > 0) {
    change.removed.insert(peer);
  }
  if (options.cascade_on_loss) {
    for (auto it = table.entries.begin(); it != table.entries.end();) {
      if (it->second == peer) {
        change.removed.insert(it->first);
        it = table.entries.erase(it);
      } else {
        ++it;
      }
    }
  }
  if (!change.removed.empty()) {
    change.table_changed = true;
    change.broadcast_required = true;
  }
  // A vanished peer will never send another update; forget its sequence so
  // a rediscovered peer starts fresh.
  table.last_seq_seen.erase(peer);
  return change;
}

RouteChange handle_routing_update(RoutingTable& table,
                                  const RoutingUpdate& update,
                                  const RoutingOptions& options,
                                  UpdateMode mode) {
  RouteChange change;

  auto seen = table.last_seq_seen.find(update.sender);
  if (seen != table.last_seq_seen.end() && update.seq <= seen->second) {
    change.stale = true;
    return change;
  }

  auto sender_entry = table.entries.find(update.sender);
  const bool sender_is_neighbor =
      sender_entry != table.entries.end() && sender_entry->second == update.sender;
  if (!sender_is_neighbor) {
    if (options.strict_update_sender) {
      throw Error(ErrorCode::UnknownSender,
                  "update from non-neighbor: " + update.sender.canonical());
    }
    // Discovery notifications and broadcast signals race; treat the update
    // itself as proof the sender is adjacent.
    RouteChange found = handle_peer_found(table, update.sender);
    change.table_changed |= found.table_changed;
    change.broadcast_required |= found.broadcast_required;
    change.added.insert(found.added.begin(), found.added.end());
  }

  for (const DeviceId& peer : update.reachable) {
    if (peer == table.owner) {
      continue;
    }
    auto it = table.entries.find(peer);
    if (it == table.entries.end()) {
      table.entries.emplace(peer, update.sender);
      change.table_changed = true;
      change.broadcast_required = true;
      change.added.insert(peer);
    } else if (mode == UpdateMode::Signal && it->second != peer &&
               it->second != update.sender &&
               std::binary_search(update.direct.begin(), update.direct.end(),
                                  peer)) {
      // The sender reports this peer in its own proximity: the latest such
      // discovery information wins. An immediate neighbor entry is never
      // demoted, and a merely relayed mention never rewrites a live route.
      it->second = update.sender;
      change.table_changed = true;
    }
  }

  // Routes via the sender that the sender no longer advertises are gone.
  for (auto it = table.entries.begin(); it != table.entries.end();) {
    if (it->second == update.sender && it->first != update.sender &&
        !std::binary_search(update.reachable.begin(), update.reachable.end(),
                            it->first)) {
      change.removed.insert(it->first);
      change.table_changed = true;
      change.broadcast_required = true;
      it = table.entries.erase(it);
    } else {
      ++it;
    }
  }

  table.last_seq_seen[update.sender] = update.seq;
  return change;
}

RoutingUpdate build_update(RoutingTable& table,
                           const std::optional<DeviceId>& split_horizon_target,
                           const RoutingOptions& options) {
  RoutingUpdate update;
  update.sender = table.owner;
  update.seq = ++table.update_seq;
  for (const auto& [peer, via] : table.entries) {
    if (options.split_horizon && split_horizon_target.has_value() &&
        via == *split_horizon_target && peer != *split_horizon_target) {
      update.poisoned.push_back(peer);
      continue;
    }
    update.reachable.push_back(peer);
    if (via == peer) {
      update.direct.push_back(peer);
    }
  }
  return update;  // map iteration keeps every list sorted
}

std::set<DeviceId> update_deficit(const RoutingTable& table,
                                  const RoutingUpdate& update) {
  std::set<DeviceId> deficit;
  for (const auto& [peer, via] : table.entries) {
    if (peer == update.sender || via == update.sender) {
      continue;
    }
    if (!std::binary_search(update.reachable.begin(), update.reachable.end(),
                            peer) &&
        !std::binary_search(update.poisoned.begin(), update.poisoned.end(),
                            peer)) {
      deficit.insert(peer);
    }
  }
  return deficit;
}

DeviceId next_hop(const RoutingTable& table, const DeviceId& dst) {
  auto it = table.entries.find(dst);
  if (it == table.entries.end()) {
    throw Error(ErrorCode::Unreachable,
                "no route from " + table.owner.canonical() + " to " +
                    dst.canonical());
  }
  return it->second;
}

bool routing_invariants_hold(const RoutingTable& table) {
  if (table.entries.count(table.owner) != 0) {
    return false;
  }
  for (const auto& [peer, via] : table.entries) {
    auto self = table.entries.find(via);
    if (self == table.entries.end() || self->second != via) {
      return false;
    }
  }
  return true;
}

const char* drop_reason_name(DropReason reason) {
  switch (reason) {
    case DropReason::TtlExpired: return "ttl_expired";
    case DropReason::LoopDetected: return "loop_detected";
    case DropReason::NoRoute: return "no_route";
  }
  return "unknown";
}

ForwardDecision forward(const RoutingTable& table, const DataPacket& packet) {
  if (packet.dst == table.owner) {
    return DeliverLocally{};
  }
  if (packet.ttl == 0) {
    return Drop{DropReason::TtlExpired};
  }
  if (std::find(packet.visited.begin(), packet.visited.end(), table.owner) !=
      packet.visited.end()) {
    return Drop{DropReason::LoopDetected};
  }
  auto it = table.entries.find(packet.dst);
  if (it == table.entries.end()) {
    return Drop{DropReason::NoRoute};
  }
  SendTo out;
  out.via = it->second;
  out.packet = packet;
  out.packet.ttl -= 1;
  out.packet.visited.push_back(table.owner);
  return out;
}

}  // namespace pbn
