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

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "pbn/device_id.hpp"

namespace pbn {

/// Percent-encodes a value so it fits the `key=value` trace grammar:
/// '%', '=', space, control bytes and non-ASCII become %XX (uppercase hex).
std::string trace_escape(std::string_view value);
std::string trace_unescape(std::string_view value);

struct TraceRecord {
  Tick time = 0;
  std::string node;  // canonical device id
  std::vector<std::pair<std::string, std::string>> fields;  // unescaped values

  const std::string* field(std::string_view key) const;
};

/// Parses one `t=<uint> node=<id> k=v ...` line. Throws ParseError.
TraceRecord parse_trace_line(const std::string& line);

/// Append-only, line-oriented run log. Key order within a record is fixed
/// by the emitter, so identical runs produce byte-identical logs.
class TraceLog {
 public:
  void record(Tick time, const DeviceId& node,
              std::vector<std::pair<std::string, std::string>> fields);

  const std::vector<std::string>& lines() const { return lines_; }

  void write_to(std::ostream& out) const;

 private:
  std::vector<std::string> lines_;
};

}  // namespace pbn
