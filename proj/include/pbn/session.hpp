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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pbn/device_id.hpp"

namespace pbn {

enum class Role { Idle, Scribe, Member };

const char* role_name(Role role);

/// Which role a node picked from the peer list: its own name means it hosts
/// and scribes, any other name means it joins that peer's session.
struct RoleDecision {
  bool become_scribe = false;
  DeviceId host;  // set when joining as member
};

struct Session {
  std::string name;
  DeviceId host;                 // the Scribe; never appears in `members`
  std::set<DeviceId> members;
  std::string active_doc;        // doc id currently being scribed, "" if none
};

/// Membership registry for every session in the network. Transitions are
/// atomic: joining a new session removes the node from its previous one in
/// the same step, so a node is a member of at most one session at any tick.
/// The simulator loop owns all sequencing.
class SessionManager {
 public:
  /// Resolves a peer-list selection into a role. `visible` is the node's
  /// peer list, which includes the node itself.
  /// Throws PeerNotVisible.
  static RoleDecision choose_role(const DeviceId& node,
                                  const DeviceId& selected_peer,
                                  const std::set<DeviceId>& visible);

  struct HostResult {
    std::string session;
    bool already_hosting = false;
    std::optional<std::string> left_session;      // membership given up
    std::vector<DeviceId> orphaned;               // members of a dissolved session
  };

  /// Starts a session hosted (and scribed) by `node`. The session name is
  /// `<base>@<canonical host id>`, which makes it unique per host. A node
  /// already hosting keeps its session (signalled, not an error); a node
  /// that was a member elsewhere leaves that session first.
  HostResult host_session(const DeviceId& node, const std::string& base_name);

  struct JoinResult {
    std::string session;
    bool already_member = false;
    std::optional<std::string> left_session;
    std::vector<DeviceId> orphaned;  // set if the joiner had been hosting
  };

  /// Joins the session hosted by `host`. Throws HostNotHosting. Joining the
  /// session the node is already in is a no-op signal. A joiner that was
  /// hosting dissolves its own session first (its members go idle), the
  /// same way a departing scribe does.
  JoinResult join(const DeviceId& node, const DeviceId& host);

  /// Leaves the current session. Throws NotInSession. Returns the session
  /// name left.
  std::string leave(const DeviceId& node);

  /// Dissolves every session hosted by `host` (scribe device departed) and
  /// removes `host` from any session it was a member of. Returns the members
  /// that were orphaned; their role becomes Idle.
  struct DepartResult {
    std::vector<DeviceId> orphaned;
    std::optional<std::string> dissolved_session;
    std::optional<std::string> left_session;
  };
  DepartResult node_departed(const DeviceId& node);

  Role role_of(const DeviceId& node) const;
  /// Session the node currently scribes or is a member of, if any.
  const Session* session_of(const DeviceId& node) const;
  const Session* hosted_by(const DeviceId& host) const;
  const Session* find(const std::string& name) const;
  Session* find_mutable(const std::string& name);

  const std::map<std::string, Session>& sessions() const { return sessions_; }

  /// Invariant sweep used by tests: at most one membership per node, hosts
  /// never members, member sets never contain their host.
  bool invariants_hold() const;

 private:
  std::string session_name_for(const DeviceId& host,
                               const std::string& base) const;
  void erase_membership(const DeviceId& node);

  std::map<std::string, Session> sessions_;
  std::map<DeviceId, std::string> membership_;  // member -> session name
  std::map<DeviceId, std::string> hosting_;     // host -> session name
};

}  // namespace pbn
