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

#include "pbn/discovery.hpp"

#include <algorithm>

#include "pbn/error.hpp"

namespace pbn {

Advertisement make_advertisement(DeviceId device, std::string object_path,
                                 int contact_port,
                                 std::map<std::string, std::string> metadata) {
  if (object_path.empty() || object_path.front() != '/') {
    throw Error(ErrorCode::BadObjectPath,
                "object path must begin with '/': " + object_path);
  }
  if (contact_port < 1 || contact_port > 65535) {
    throw Error(ErrorCode::BadContactPort,
                "contact port out of range: " + std::to_string(contact_port));
  }
  Advertisement ad;
  ad.device = std::move(device);
  ad.object_path = std::move(object_path);
  ad.contact_port = contact_port;
  ad.metadata = std::move(metadata);
  return ad;
}

std::vector<DiscoveryEvent> emit_discovery_events(
    const std::set<DeviceId>& old_neighbors,
    const std::set<DeviceId>& new_neighbors, const DeviceId& observer,
    Tick time) {
  if (old_neighbors.count(observer) != 0 || new_neighbors.count(observer) != 0) {
    throw Error(ErrorCode::ObserverInNeighborSet,
                "observer must not appear in its own neighbor set: " +
                    observer.canonical());
  }
  std::vector<DiscoveryEvent> events;
  // std::set iterates in canonical order, which fixes the order within each
  // group; losses are reported before arrivals.
  for (const DeviceId& gone : old_neighbors) {
    if (new_neighbors.count(gone) == 0) {
      events.push_back({DiscoveryKind::PeerLost, gone, observer, time});
    }
  }
  for (const DeviceId& found : new_neighbors) {
    if (old_neighbors.count(found) == 0) {
      events.push_back({DiscoveryKind::PeerFound, found, observer, time});
    }
  }
  return events;
}

}  // namespace pbn
