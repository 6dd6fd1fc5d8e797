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

#include "pbn/topology.hpp"

#include "pbn/error.hpp"

namespace pbn {

Topology::Edge Topology::make_edge(const DeviceId& a, const DeviceId& b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

void Topology::require_node(const DeviceId& id) const {
  if (nodes_.count(id) == 0) {
    throw Error(ErrorCode::UnknownNode, "unknown node: " + id.canonical());
  }
}

void Topology::add_node(const DeviceId& id) {
  if (!nodes_.insert(id).second) {
    throw Error(ErrorCode::DuplicateNode,
                "node already present: " + id.canonical());
  }
}

std::set<DeviceId> Topology::remove_node(const DeviceId& id) {
  require_node(id);
  std::set<DeviceId> former = neighbors(id);
  for (const DeviceId& peer : former) {
    edges_.erase(make_edge(id, peer));
  }
  nodes_.erase(id);
  return former;
}

bool Topology::add_edge(const DeviceId& a, const DeviceId& b) {
  if (a == b) {
    throw Error(ErrorCode::SelfEdge, "self edge at " + a.canonical());
  }
  require_node(a);
  require_node(b);
  Edge edge = make_edge(a, b);
  if (edges_.count(edge) != 0) {
    return false;
  }
  edges_.emplace(edge, ++next_generation_);
  return true;
}

bool Topology::remove_edge(const DeviceId& a, const DeviceId& b) {
  if (a == b) {
    throw Error(ErrorCode::SelfEdge, "self edge at " + a.canonical());
  }
  require_node(a);
  require_node(b);
  return edges_.erase(make_edge(a, b)) > 0;
}

bool Topology::adjacent(const DeviceId& a, const DeviceId& b) const {
  if (a == b) {
    return false;
  }
  return edges_.count(make_edge(a, b)) != 0;
}

std::set<DeviceId> Topology::neighbors(const DeviceId& id) const {
  std::set<DeviceId> result;
  for (const auto& [edge, gen] : edges_) {
    if (edge.first == id) {
      result.insert(edge.second);
    } else if (edge.second == id) {
      result.insert(edge.first);
    }
  }
  return result;
}

std::uint64_t Topology::edge_generation(const DeviceId& a,
                                        const DeviceId& b) const {
  auto it = edges_.find(make_edge(a, b));
  return it == edges_.end() ? 0 : it->second;
}

}  // namespace pbn
