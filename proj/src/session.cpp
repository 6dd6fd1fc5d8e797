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

#include "pbn/session.hpp"

#include "pbn/error.hpp"

namespace pbn {

const char* role_name(Role role) {
  switch (role) {
    case Role::Idle: return "idle";
    case Role::Scribe: return "scribe";
    case Role::Member: return "member";
  }
  return "unknown";
}

RoleDecision SessionManager::choose_role(const DeviceId& node,
                                         const DeviceId& selected_peer,
                                         const std::set<DeviceId>& visible) {
  if (visible.count(selected_peer) == 0) {
    throw Error(ErrorCode::PeerNotVisible,
                "peer not in visible list: " + selected_peer.canonical());
  }
  RoleDecision decision;
  if (selected_peer == node) {
    decision.become_scribe = true;
  } else {
    decision.host = selected_peer;
  }
  return decision;
}

std::string SessionManager::session_name_for(const DeviceId& host,
                                             const std::string& base) const {
  return base + "@" + host.canonical();
}

void SessionManager::erase_membership(const DeviceId& node) {
  auto it = membership_.find(node);
  if (it == membership_.end()) {
    return;
  }
  auto session = sessions_.find(it->second);
  if (session != sessions_.end()) {
    session->second.members.erase(node);
  }
  membership_.erase(it);
}

SessionManager::HostResult SessionManager::host_session(
    const DeviceId& node, const std::string& base_name) {
  HostResult result;
  auto hosting = hosting_.find(node);
  if (hosting != hosting_.end()) {
    result.session = hosting->second;
    result.already_hosting = true;
    return result;
  }
  auto member = membership_.find(node);
  if (member != membership_.end()) {
    result.left_session = member->second;
    erase_membership(node);
  }
  Session session;
  session.name = session_name_for(node, base_name);
  session.host = node;
  sessions_.emplace(session.name, session);
  hosting_.emplace(node, session.name);
  result.session = session.name;
  return result;
}

SessionManager::JoinResult SessionManager::join(const DeviceId& node,
                                                const DeviceId& host) {
  auto hosting = hosting_.find(host);
  if (hosting == hosting_.end()) {
    throw Error(ErrorCode::HostNotHosting,
                "peer is not hosting a session: " + host.canonical());
  }
  JoinResult result;
  result.session = hosting->second;

  auto member = membership_.find(node);
  if (member != membership_.end() && member->second == result.session) {
    result.already_member = true;
    return result;
  }
  if (member != membership_.end()) {
    result.left_session = member->second;
    erase_membership(node);
  }
  // A hosting node that joins elsewhere abandons its own session.
  auto own = hosting_.find(node);
  if (own != hosting_.end()) {
    DepartResult gone = node_departed(node);
    result.orphaned = std::move(gone.orphaned);
  }
  sessions_.at(result.session).members.insert(node);
  membership_[node] = result.session;
  return result;
}

std::string SessionManager::leave(const DeviceId& node) {
  auto member = membership_.find(node);
  if (member == membership_.end()) {
    throw Error(ErrorCode::NotInSession,
                "node is not in a session: " + node.canonical());
  }
  std::string session = member->second;
  erase_membership(node);
  return session;
}

SessionManager::DepartResult SessionManager::node_departed(
    const DeviceId& node) {
  DepartResult result;
  auto hosting = hosting_.find(node);
  if (hosting != hosting_.end()) {
    auto session = sessions_.find(hosting->second);
    if (session != sessions_.end()) {
      for (const DeviceId& member : session->second.members) {
        membership_.erase(member);
        result.orphaned.push_back(member);
      }
      result.dissolved_session = session->first;
      sessions_.erase(session);
    }
    hosting_.erase(hosting);
  }
  auto member = membership_.find(node);
  if (member != membership_.end()) {
    result.left_session = member->second;
    erase_membership(node);
  }
  return result;
}

Role SessionManager::role_of(const DeviceId& node) const {
  if (hosting_.count(node) != 0) {
    return Role::Scribe;
  }
  if (membership_.count(node) != 0) {
    return Role::Member;
  }
  return Role::Idle;
}

const Session* SessionManager::session_of(const DeviceId& node) const {
  auto hosting = hosting_.find(node);
  if (hosting != hosting_.end()) {
    return find(hosting->second);
  }
  auto member = membership_.find(node);
  if (member != membership_.end()) {
    return find(member->second);
  }
  return nullptr;
}

const Session* SessionManager::hosted_by(const DeviceId& host) const {
  auto hosting = hosting_.find(host);
  return hosting == hosting_.end() ? nullptr : find(hosting->second);
}

const Session* SessionManager::find(const std::string& name) const {
  auto it = sessions_.find(name);
  return it == sessions_.end() ? nullptr : &it->second;
}

Session* SessionManager::find_mutable(const std::string& name) {
  auto it = sessions_.find(name);
  return it == sessions_.end() ? nullptr : &it->second;
}

bool SessionManager::invariants_hold() const {
  for (const auto& [name, session] : sessions_) {
    if (session.members.count(session.host) != 0) {
      return false;
    }
    if (membership_.count(session.host) != 0) {
      return false;
    }
    for (const DeviceId& member : session.members) {
      auto it = membership_.find(member);
      if (it == membership_.end() || it->second != name) {
        return false;
      }
    }
  }
  for (const auto& [node, name] : membership_) {
    auto session = sessions_.find(name);
    if (session == sessions_.end() ||
        session->second.members.count(node) == 0) {
      return false;
    }
  }
  return true;
}

}  // namespace pbn
