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

#include "pbn/trace.hpp"

#include <cstdio>
#include <stdexcept>

#include "pbn/error.hpp"

namespace pbn {

namespace {

bool needs_escape(unsigned char c) {
  return c <= 0x20 || c >= 0x7F || c == '%' || c == '=';
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string trace_escape(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (unsigned char c : value) {
    if (needs_escape(c)) {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string trace_unescape(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] == '%' && i + 2 < value.size()) {
      int hi = hex_digit(value[i + 1]);
      int lo = hex_digit(value[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += value[i];
  }
  return out;
}

const std::string* TraceRecord::field(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

TraceRecord parse_trace_line(const std::string& line) {
  TraceRecord record;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t space = line.find(' ', pos);
    std::string token = line.substr(pos, space == std::string::npos
                                             ? std::string::npos
                                             : space - pos);
    pos = space == std::string::npos ? line.size() : space + 1;
    if (token.empty()) {
      continue;
    }
    std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "bad trace token: " + token);
    }
    pairs.emplace_back(token.substr(0, eq),
                       trace_unescape(token.substr(eq + 1)));
  }
  if (pairs.size() < 2 || pairs[0].first != "t" || pairs[1].first != "node") {
    throw Error(ErrorCode::ParseError, "bad trace line: " + line);
  }
  try {
    record.time = std::stoull(pairs[0].second);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad trace tick: " + pairs[0].second);
  }
  record.node = pairs[1].second;
  record.fields.assign(pairs.begin() + 2, pairs.end());
  return record;
}

void TraceLog::record(Tick time, const DeviceId& node,
                      std::vector<std::pair<std::string, std::string>> fields) {
  std::string line = "t=" + std::to_string(time) +
                     " node=" + trace_escape(node.canonical());
  for (const auto& [key, value] : fields) {
    line += " ";
    line += key;
    line += "=";
    line += trace_escape(value);
  }
  lines_.push_back(std::move(line));
}

void TraceLog::write_to(std::ostream& out) const {
  for (const std::string& line : lines_) {
    out << line << "\n";
  }
}

}  // namespace pbn
