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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pbn/device_id.hpp"

namespace pbn {

/// A producer-service advertisement: where a peer's service can be reached
/// and what it offers. Metadata keys are unique by construction.
struct Advertisement {
  DeviceId device;
  std::string object_path;  // begins with '/'
  int contact_port = 0;     // 1..65535
  std::map<std::string, std::string> metadata;
};

/// Validating constructor for Advertisement.
/// Throws BadObjectPath, BadContactPort.
Advertisement make_advertisement(DeviceId device, std::string object_path,
                                 int contact_port,
                                 std::map<std::string, std::string> metadata);

enum class DiscoveryKind { PeerLost, PeerFound };

/// Router-to-application notification: a peer appeared in or vanished from
/// the observer's immediate proximity.
struct DiscoveryEvent {
  DiscoveryKind kind = DiscoveryKind::PeerFound;
  DeviceId subject;
  DeviceId observer;
  Tick time = 0;
};

/// Turns a neighbor-set delta into an ordered notification list:
/// one PeerLost per departed peer, one PeerFound per arrival, losses first,
/// each group sorted by canonical id so identical deltas always produce
/// identical event sequences.
/// Throws ObserverInNeighborSet if the observer appears in either set.
std::vector<DiscoveryEvent> emit_discovery_events(
    const std::set<DeviceId>& old_neighbors,
    const std::set<DeviceId>& new_neighbors, const DeviceId& observer,
    Tick time);

}  // namespace pbn
