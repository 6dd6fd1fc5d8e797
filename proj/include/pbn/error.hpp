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

#include <stdexcept>
#include <string>

namespace pbn {

enum class ErrorCode {
  // identity / discovery
  EmptyName,
  InvalidSim,
  ReservedCharacter,
  ObserverInNeighborSet,
  BadObjectPath,
  BadContactPort,
  // routing
  SelfDiscovery,
  UnknownSender,
  Unreachable,
  // session
  PeerNotVisible,
  HostNotHosting,
  NotInSession,
  // documents
  EmptyTitle,
  DuplicateTitle,
  NotOwner,
  UnknownDocument,
  ReShareForbidden,
  WrongRecipient,
  NotFound,
  // simulator / topology
  UnknownNode,
  DuplicateNode,
  SelfEdge,
  NotAdjacent,
  // cli
  ParseError,
  SchemaViolation,
  BadQuery,
};

// snake_case identifier used in trace output, e.g. "host_not_hosting"
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pbn
