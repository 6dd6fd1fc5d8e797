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

#include <random>
#include <set>

#include "helpers.hpp"
#include "pbn/discovery.hpp"
#include "pbn/error.hpp"

using namespace pbn;
using testutil::id;
using testutil::thrown_code;

TEST_CASE("device id canonical form is name, separator, sim") {
  DeviceId bruce = make_device_id("BRUCE", "8991000012345678");
  CHECK(bruce.canonical() == "BRUCE#8991000012345678");
  CHECK(bruce.social_name() == "BRUCE");
  CHECK(bruce.sim_number() == "8991000012345678");

  DeviceId minimal = make_device_id("A", "0000000000");
  CHECK(minimal.canonical() == "A#0000000000");
}

TEST_CASE("device id construction rejects bad input") {
  CHECK(thrown_code([] { make_device_id("Bob#1", "1234567890"); }) ==
        ErrorCode::ReservedCharacter);
  CHECK(thrown_code([] { make_device_id("", "1234567890"); }) ==
        ErrorCode::EmptyName);
  CHECK(thrown_code([] { make_device_id("Bob", "123456789"); }) ==
        ErrorCode::InvalidSim);  // 9 digits
  CHECK(thrown_code([] { make_device_id("Bob", "123456789012345678901"); }) ==
        ErrorCode::InvalidSim);  // 21 digits
  CHECK(thrown_code([] { make_device_id("Bob", "12345abcde"); }) ==
        ErrorCode::InvalidSim);
}

TEST_CASE("members only see the social component") {
  CHECK(social_view(make_device_id("BRUCE", "8991000012345678")) == "BRUCE");
  CHECK(social_view(make_device_id("A", "0000000000")) == "A");
}

namespace {

std::string random_name(std::mt19937_64& rng) {
  static const char alphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 .-";
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<std::size_t> pick(0, sizeof(alphabet) - 2);
  std::string out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    out += alphabet[pick(rng)];
  }
  return out;
}

std::string random_sim(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(10, 20);
  std::uniform_int_distribution<int> digit(0, 9);
  std::string out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    out += static_cast<char>('0' + digit(rng));
  }
  return out;
}

}  // namespace

TEST_CASE("social_view round-trips construction for any valid input") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 300; ++i) {
    std::string name = random_name(rng);
    std::string sim = random_sim(rng);
    DeviceId made = make_device_id(name, sim);
    CHECK(social_view(made) == name);
    CHECK(made.sim_number() == sim);
  }
}

TEST_CASE("canonical ids are injective over distinct inputs") {
  std::mt19937_64 rng(43);
  std::set<std::pair<std::string, std::string>> inputs;
  std::set<std::string> canonicals;
  for (int i = 0; i < 500; ++i) {
    std::string name = random_name(rng);
    std::string sim = random_sim(rng);
    if (inputs.emplace(name, sim).second) {
      CHECK(canonicals.insert(make_device_id(name, sim).canonical()).second);
    }
  }
  // The adversarial shape: a name ending in digits must not collide with a
  // shorter name whose sim absorbs them.
  CHECK(make_device_id("AB1", "0000000000").canonical() !=
        make_device_id("AB", "1000000000").canonical());
}

TEST_CASE("discovery events from a single arrival") {
  DeviceId a = id("A"), b = id("B");
  auto events = emit_discovery_events({}, {b}, a, 5);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == DiscoveryKind::PeerFound);
  CHECK(events[0].subject == b);
  CHECK(events[0].observer == a);
  CHECK(events[0].time == 5);
}

TEST_CASE("discovery events from a mixed delta, losses first") {
  DeviceId a = id("A"), b = id("B"), c = id("C"), d = id("D");
  auto events = emit_discovery_events({b, c}, {c, d}, a, 0);
  REQUIRE(events.size() == 2);
  CHECK(events[0].kind == DiscoveryKind::PeerLost);
  CHECK(events[0].subject == b);
  CHECK(events[1].kind == DiscoveryKind::PeerFound);
  CHECK(events[1].subject == d);
}

TEST_CASE("no delta, no events") {
  DeviceId a = id("A"), b = id("B");
  CHECK(emit_discovery_events({b}, {b}, a, 0).empty());
  CHECK(emit_discovery_events({}, {}, a, 0).empty());
}

TEST_CASE("the observer may not appear in its own neighbor sets") {
  DeviceId a = id("A"), b = id("B");
  CHECK(thrown_code([&] { emit_discovery_events({a}, {b}, a, 0); }) ==
        ErrorCode::ObserverInNeighborSet);
  CHECK(thrown_code([&] { emit_discovery_events({}, {a}, a, 0); }) ==
        ErrorCode::ObserverInNeighborSet);
}

TEST_CASE("applying the emitted deltas to the old set yields the new set") {
  std::mt19937_64 rng(44);
  std::vector<DeviceId> pool;
  for (char c = 'B'; c <= 'K'; ++c) {
    pool.push_back(id(std::string(1, c)));
  }
  DeviceId observer = id("A");
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<DeviceId> old_set, new_set;
    for (const DeviceId& peer : pool) {
      if (coin(rng)) old_set.insert(peer);
      if (coin(rng)) new_set.insert(peer);
    }
    std::set<DeviceId> replayed = old_set;
    DiscoveryKind last = DiscoveryKind::PeerLost;
    for (const DiscoveryEvent& ev :
         emit_discovery_events(old_set, new_set, observer, 0)) {
      if (ev.kind == DiscoveryKind::PeerFound) {
        replayed.insert(ev.subject);
        last = DiscoveryKind::PeerFound;
      } else {
        CHECK(last == DiscoveryKind::PeerLost);  // losses never follow finds
        replayed.erase(ev.subject);
      }
    }
    CHECK(replayed == new_set);
  }
}

TEST_CASE("advertisements validate their fields") {
  DeviceId a = id("A");
  Advertisement ad = make_advertisement(a, "/pbn/mom", 9955,
                                        {{"hosts_session", "standup@A"}});
  CHECK(ad.object_path == "/pbn/mom");
  CHECK(ad.contact_port == 9955);
  CHECK(ad.metadata.at("hosts_session") == "standup@A");

  CHECK(thrown_code([&] { make_advertisement(a, "not-a-path", 1, {}); }) ==
        ErrorCode::BadObjectPath);
  CHECK(thrown_code([&] { make_advertisement(a, "/x", 0, {}); }) ==
        ErrorCode::BadContactPort);
  CHECK(thrown_code([&] { make_advertisement(a, "/x", 65536, {}); }) ==
        ErrorCode::BadContactPort);
}
