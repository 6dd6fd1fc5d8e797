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

#include <doctest.h>

#include "helpers.hpp"
#include "pbn/error.hpp"
#include "pbn/session.hpp"

using namespace pbn;
using testutil::id;
using testutil::thrown_code;

namespace {
const DeviceId A = id("A");
const DeviceId B = id("B");
const DeviceId C = id("C");
const DeviceId Z = id("Z");
}  // namespace

TEST_CASE("choosing your own name makes you the scribe") {
  std::set<DeviceId> visible = {A, B, C};
  RoleDecision decision = SessionManager::choose_role(A, A, visible);
  CHECK(decision.become_scribe);
}

TEST_CASE("choosing another name joins that peer's session") {
  std::set<DeviceId> visible = {A, B, C};
  RoleDecision decision = SessionManager::choose_role(A, B, visible);
  CHECK_FALSE(decision.become_scribe);
  CHECK(decision.host == B);
}

TEST_CASE("a peer outside the visible list cannot be selected") {
  std::set<DeviceId> visible = {A, B};
  CHECK(thrown_code([&] { SessionManager::choose_role(A, Z, visible); }) ==
        ErrorCode::PeerNotVisible);
}

TEST_CASE("session names are unique per host") {
  SessionManager sm;
  auto b = sm.host_session(B, "standup");
  auto c = sm.host_session(C, "standup");
  CHECK(b.session == "standup@" + B.canonical());
  CHECK(c.session == "standup@" + C.canonical());
  CHECK(b.session != c.session);
  CHECK(sm.role_of(B) == Role::Scribe);
  CHECK(sm.role_of(C) == Role::Scribe);
  CHECK(sm.invariants_hold());
}

TEST_CASE("joining a second session leaves the first automatically") {
  SessionManager sm;
  std::string s1 = sm.host_session(B, "s1").session;
  std::string s2 = sm.host_session(C, "s2").session;

  auto join1 = sm.join(A, B);
  CHECK(join1.session == s1);
  CHECK_FALSE(join1.left_session.has_value());
  CHECK(sm.find(s1)->members.count(A) == 1);

  auto join2 = sm.join(A, C);
  CHECK(join2.session == s2);
  REQUIRE(join2.left_session.has_value());
  CHECK(*join2.left_session == s1);
  CHECK(sm.find(s1)->members.count(A) == 0);  // departure visible to old host
  CHECK(sm.find(s2)->members.count(A) == 1);
  CHECK(sm.invariants_hold());
}

TEST_CASE("joining the same session twice is a signalled no-op") {
  SessionManager sm;
  sm.host_session(B, "s");
  sm.join(A, B);
  auto again = sm.join(A, B);
  CHECK(again.already_member);
  CHECK(sm.find(again.session)->members.size() == 1);
}

TEST_CASE("joining a non-hosting peer fails") {
  SessionManager sm;
  CHECK(thrown_code([&] { sm.join(A, B); }) == ErrorCode::HostNotHosting);
}

TEST_CASE("leaving returns to idle; leaving twice is an error") {
  SessionManager sm;
  std::string s = sm.host_session(B, "s").session;
  sm.join(A, B);
  CHECK(sm.leave(A) == s);
  CHECK(sm.role_of(A) == Role::Idle);
  CHECK(sm.find(s)->members.empty());
  CHECK(thrown_code([&] { sm.leave(A); }) == ErrorCode::NotInSession);
}

TEST_CASE("a scribe is not a member and cannot leave as one") {
  SessionManager sm;
  sm.host_session(B, "s");
  CHECK(thrown_code([&] { sm.leave(B); }) == ErrorCode::NotInSession);
}

TEST_CASE("a departing scribe orphans its members") {
  SessionManager sm;
  sm.host_session(B, "s");
  sm.join(A, B);
  sm.join(C, B);
  auto depart = sm.node_departed(B);
  CHECK(depart.orphaned == std::vector<DeviceId>{A, C});
  CHECK(sm.role_of(A) == Role::Idle);
  CHECK(sm.role_of(C) == Role::Idle);
  CHECK(sm.sessions().empty());
  CHECK(sm.invariants_hold());
}

TEST_CASE("a hosting node that joins elsewhere dissolves its own session") {
  SessionManager sm;
  sm.host_session(B, "s1");
  sm.host_session(C, "s2");
  sm.join(A, B);
  auto join = sm.join(B, C);
  CHECK(join.orphaned == std::vector<DeviceId>{A});
  CHECK(sm.role_of(B) == Role::Member);
  CHECK(sm.role_of(A) == Role::Idle);
  CHECK(sm.hosted_by(B) == nullptr);
  CHECK(sm.invariants_hold());
}

// Exhaustive walk of the three-node session state machine: from every
// reachable state, every operation keeps the one-membership and
// host-self-containment invariants.
TEST_CASE("invariants hold over the whole reachable 3-node state space") {
  const std::vector<DeviceId> nodes = {A, B, C};

  struct StateKey {
    std::string repr;
    bool operator<(const StateKey& other) const { return repr < other.repr; }
  };
  auto key_of = [&](const SessionManager& sm) {
    std::string repr;
    for (const DeviceId& n : nodes) {
      repr += role_name(sm.role_of(n));
      const Session* s = sm.session_of(n);
      repr += s != nullptr ? s->name : "-";
      repr += "|";
    }
    return StateKey{repr};
  };

  // Operations are replayed from scratch to clone a state (SessionManager
  // is cheap and deterministic).
  using OpList = std::vector<int>;
  auto build = [&](const OpList& ops) {
    SessionManager sm;
    for (int op : ops) {
      int actor = op / 4;
      int what = op % 4;
      try {
        switch (what) {
          case 0: sm.host_session(nodes[actor], "s"); break;
          case 1: sm.join(nodes[actor], nodes[(actor + 1) % 3]); break;
          case 2: sm.join(nodes[actor], nodes[(actor + 2) % 3]); break;
          default: sm.leave(nodes[actor]); break;
        }
      } catch (const Error&) {
        // illegal transitions are rejected without corrupting state
      }
    }
    return sm;
  };

  std::set<StateKey> seen;
  std::vector<OpList> frontier = {{}};
  seen.insert(key_of(SessionManager{}));
  int explored = 0;
  while (!frontier.empty()) {
    OpList ops = frontier.back();
    frontier.pop_back();
    if (ops.size() >= 5) {
      continue;
    }
    for (int op = 0; op < 12; ++op) {
      OpList next = ops;
      next.push_back(op);
      SessionManager sm = build(next);
      ++explored;
      REQUIRE(sm.invariants_hold());
      // at most one membership per node, scribes never members
      for (const DeviceId& n : nodes) {
        int memberships = 0;
        for (const auto& [name, session] : sm.sessions()) {
          memberships += session.members.count(n);
          CHECK(session.members.count(session.host) == 0);
        }
        CHECK(memberships <= 1);
        if (sm.role_of(n) == Role::Scribe) {
          CHECK(memberships == 0);
        }
      }
      if (seen.insert(key_of(sm)).second) {
        frontier.push_back(next);
      }
    }
  }
  CHECK(explored > 100);  // the walk actually covered the space
}
