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

#include <string>
#include <variant>

#include "pbn/device_id.hpp"
#include "pbn/mom.hpp"

namespace pbn {

/// End-to-end application messages carried as opaque packet payloads.
/// The routing layer never inspects them.

struct JoinRequest {};  // src asks dst (a host) to admit it

struct RawData {
  std::string bytes;
};

using AppMessage = std::variant<JoinRequest, PadSnapshot, RealTimeUpdate,
                                FileOffer, OfferResponse, RawData>;

/// Short tag used in trace lines: join, pad, rtupdate, offer, response,
/// data.
const char* app_message_kind(const AppMessage& message);

/// Wire form of an AppMessage (compact JSON). decode_message throws
/// ParseError on malformed input.
std::string encode_message(const AppMessage& message);
AppMessage decode_message(const std::string& bytes);

}  // namespace pbn
