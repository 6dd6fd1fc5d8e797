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

#include <compare>
#include <cstdint>
#include <string>

namespace pbn {

using Tick = std::uint64_t;

/// Globally unique peer identity: a human-readable social name plus the
/// device's SIM number. The canonical form `<name>#<sim>` identifies the
/// device everywhere; UI surfaces show only the social component.
///
/// `#` is reserved as the separator so the canonical form stays injective
/// even when a social name ends in digits.
class DeviceId {
 public:
  DeviceId() = default;

  const std::string& social_name() const { return social_name_; }
  const std::string& sim_number() const { return sim_number_; }
  const std::string& canonical() const { return canonical_; }

  bool valid() const { return !canonical_.empty(); }

  // Identity and ordering are defined by the canonical string alone.
  friend bool operator==(const DeviceId& a, const DeviceId& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const DeviceId& a,
                                          const DeviceId& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  friend DeviceId make_device_id(const std::string&, const std::string&);

  std::string social_name_;
  std::string sim_number_;
  std::string canonical_;
};

/// Builds a DeviceId from a social name and a SIM number.
/// Throws: EmptyName, ReservedCharacter (`#` in name), InvalidSim
/// (non-digit characters or length outside 10..20).
DeviceId make_device_id(const std::string& social_name,
                        const std::string& sim_number);

/// The member-facing view of an identity: the social component only.
const std::string& social_view(const DeviceId& id);

}  // namespace pbn
