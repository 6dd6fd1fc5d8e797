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
#include <set>
#include <utility>

#include "pbn/device_id.hpp"

namespace pbn {

/// Undirected proximity graph. An edge means the two devices are in radio
/// range of each other. No self-loops; edges only between present nodes.
/// Each edge carries a generation counter so in-flight messages can detect
/// that their link went down (and possibly came back) while they traveled.
class Topology {
 public:
  using Edge = std::pair<DeviceId, DeviceId>;  // normalized: first < second

  static Edge make_edge(const DeviceId& a, const DeviceId& b);

  /// Throws DuplicateNode.
  void add_node(const DeviceId& id);
  /// Removes the node and all its edges; returns the former neighbors.
  /// Throws UnknownNode.
  std::set<DeviceId> remove_node(const DeviceId& id);

  /// Returns false (signal, not failure) when the edge already exists.
  /// Throws UnknownNode, SelfEdge.
  bool add_edge(const DeviceId& a, const DeviceId& b);
  /// Returns false when the edge was absent. Throws UnknownNode, SelfEdge.
  bool remove_edge(const DeviceId& a, const DeviceId& b);

  bool has_node(const DeviceId& id) const { return nodes_.count(id) != 0; }
  bool adjacent(const DeviceId& a, const DeviceId& b) const;
  std::set<DeviceId> neighbors(const DeviceId& id) const;

  /// Generation of the current live edge, 0 if the edge is down.
  std::uint64_t edge_generation(const DeviceId& a, const DeviceId& b) const;

  const std::set<DeviceId>& nodes() const { return nodes_; }
  const std::map<Edge, std::uint64_t>& edges() const { return edges_; }

 private:
  void require_node(const DeviceId& id) const;

  std::set<DeviceId> nodes_;
  std::map<Edge, std::uint64_t> edges_;  // live edges -> generation
  std::uint64_t next_generation_ = 0;
};

}  // namespace pbn
