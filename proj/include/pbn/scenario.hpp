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

#include <optional>
#include <string>
#include <vector>

#include "pbn/simulator.hpp"

namespace pbn {

/// Config knobs a scenario file (and the CLI on top of it) may override.
struct ConfigOverrides {
  std::optional<std::uint32_t> latency_ticks;
  std::optional<std::uint32_t> ttl;
  std::optional<bool> split_horizon;
  std::optional<bool> faithful_routing;
  std::optional<bool> strict_updates;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> auto_save_ticks;
  std::optional<Tick> max_ticks;

  void apply(SimConfig& config) const;
};

struct ScenarioNodeDecl {
  std::string social;
  std::string sim;
  DeviceId id;
};

struct AssertionSpec {
  enum class Kind {
    TableEquals,
    DeliveredWithin,
    ContentConverged,
    RoleIs,
    Unreachable
  };
  Kind kind = Kind::TableEquals;
  DeviceId node;                            // table_equals, role_is, unreachable
  std::map<DeviceId, DeviceId> table;       // table_equals
  DeviceId src;                             // delivered_within
  DeviceId dst;
  std::uint32_t hops = 0;
  DeviceId owner;                           // content_converged
  std::string title;
  std::string role;                         // role_is
  DeviceId peer;                            // unreachable
  std::string description;                  // human-readable restatement
};

struct TimedEvent {
  Tick time = 0;
  SimEventBody body;
};

/// A parsed, name-resolved scenario. Declared nodes enter the world at
/// tick 0; events run at their scheduled ticks; assertions are evaluated
/// after the run.
struct Scenario {
  std::string name;
  ConfigOverrides config;
  std::vector<ScenarioNodeDecl> nodes;
  std::vector<TimedEvent> events;
  std::vector<AssertionSpec> assertions;
};

struct ValidationIssue {
  std::string pointer;  // JSON pointer to the offending field
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

struct ScenarioParse {
  std::optional<Scenario> scenario;  // set only when the report is clean
  ValidationReport report;
};

/// Parses and validates scenario text (schema_version 1). Parse errors and
/// schema violations land in the report with field pointers; a scenario is
/// produced only for a clean file.
ScenarioParse parse_scenario(const std::string& text);
ScenarioParse load_scenario_file(const std::string& path);

struct AssertionResult {
  std::string description;
  bool passed = false;
  std::string detail;
};

// run exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertionFailed = 1;
inline constexpr int kExitNonQuiescent = 2;

struct RunResult {
  QuiescenceReport report;
  std::vector<AssertionResult> assertions;
  std::vector<std::string> trace_lines;
  std::string summary_json;  // schema-versioned structured summary
  int exit_code = kExitOk;
};

/// Builds the world, runs to quiescence (or max_ticks), evaluates the
/// scenario's assertions and produces the trace plus summary.
/// `cli_overrides` win over the file's config block.
RunResult run_scenario(const Scenario& scenario,
                       const ConfigOverrides& cli_overrides = {});

/// Writes every document in the run's final stores as a plain UTF-8 text
/// file named after its title, under `<dir>/<social name>/<MyMoMs or
/// SharedMoMs>/`. Titles containing a path separator are skipped. Returns
/// the number of files written.
int export_documents(const RunResult& result, const std::string& dir);

struct InspectQuery {
  std::optional<std::string> node;  // canonical or social name
  std::optional<std::string> kind;  // record key, e.g. table, send, recv
  std::optional<Tick> from;
  std::optional<Tick> to;
};

/// Filters trace lines, preserving file order. Throws BadQuery for an
/// inverted time range; unknown nodes or kinds just yield no matches.
std::vector<std::string> inspect_trace(const std::vector<std::string>& lines,
                                       const InspectQuery& query);

}  // namespace pbn
