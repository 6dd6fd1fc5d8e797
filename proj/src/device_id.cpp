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

#include "pbn/device_id.hpp"

#include <algorithm>
#include <cctype>

#include "pbn/error.hpp"

namespace pbn {

namespace {
constexpr std::size_t kSimMinDigits = 10;
constexpr std::size_t kSimMaxDigits = 20;
}  // namespace

DeviceId make_device_id(const std::string& social_name,
                        const std::string& sim_number) {
  if (social_name.empty()) {
    throw Error(ErrorCode::EmptyName, "social name must not be empty");
  }
  if (social_name.find('#') != std::string::npos) {
    throw Error(ErrorCode::ReservedCharacter,
                "social name must not contain '#': " + social_name);
  }
  const bool all_digits =
      std::all_of(sim_number.begin(), sim_number.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
      });
  if (!all_digits || sim_number.size() < kSimMinDigits ||
      sim_number.size() > kSimMaxDigits) {
    throw Error(ErrorCode::InvalidSim,
                "SIM number must be 10-20 digits: \"" + sim_number + "\"");
  }
  DeviceId id;
  id.social_name_ = social_name;
  id.sim_number_ = sim_number;
  id.canonical_ = social_name + "#" + sim_number;
  return id;
}

const std::string& social_view(const DeviceId& id) { return id.social_name(); }

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyName: return "empty_name";
    case ErrorCode::InvalidSim: return "invalid_sim";
    case ErrorCode::ReservedCharacter: return "reserved_character";
    case ErrorCode::ObserverInNeighborSet: return "observer_in_neighbor_set";
    case ErrorCode::BadObjectPath: return "bad_object_path";
    case ErrorCode::BadContactPort: return "bad_contact_port";
    case ErrorCode::SelfDiscovery: return "self_discovery";
    case ErrorCode::UnknownSender: return "unknown_sender";
    case ErrorCode::Unreachable: return "unreachable";
    case ErrorCode::PeerNotVisible: return "peer_not_visible";
    case ErrorCode::HostNotHosting: return "host_not_hosting";
    case ErrorCode::NotInSession: return "not_in_session";
    case ErrorCode::EmptyTitle: return "empty_title";
    case ErrorCode::DuplicateTitle: return "duplicate_title";
    case ErrorCode::NotOwner: return "not_owner";
    case ErrorCode::UnknownDocument: return "unknown_document";
    case ErrorCode::ReShareForbidden: return "re_share_forbidden";
    case ErrorCode::WrongRecipient: return "wrong_recipient";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::UnknownNode: return "unknown_node";
    case ErrorCode::DuplicateNode: return "duplicate_node";
    case ErrorCode::SelfEdge: return "self_edge";
    case ErrorCode::NotAdjacent: return "not_adjacent";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::SchemaViolation: return "schema_violation";
    case ErrorCode::BadQuery: return "bad_query";
  }
  return "unknown";
}

}  // namespace pbn
