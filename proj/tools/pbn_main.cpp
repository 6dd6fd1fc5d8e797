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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pbn/error.hpp"
#include "pbn/scenario.hpp"

namespace {

constexpr int kExitUsage = 3;

void print_report(const pbn::ValidationReport& report) {
  for (const pbn::ValidationIssue& issue : report.issues) {
    std::cerr << "error: " << (issue.pointer.empty() ? "/" : issue.pointer)
              << ": " << issue.message << "\n";
  }
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << content;
  return true;
}

int cmd_validate(const std::string& path) {
  pbn::ScenarioParse parsed = pbn::load_scenario_file(path);
  if (!parsed.report.ok()) {
    print_report(parsed.report);
    return 1;
  }
  std::cout << "ok: " << path << " (" << parsed.scenario->nodes.size()
            << " nodes, " << parsed.scenario->events.size() << " events, "
            << parsed.scenario->assertions.size() << " assertions)\n";
  return 0;
}

struct RunFlags {
  std::string scenario_path;
  std::string trace_path;
  std::string summary_path;
  std::string export_dir;
  pbn::ConfigOverrides overrides;
};

int cmd_run(const RunFlags& flags) {
  pbn::ScenarioParse parsed = pbn::load_scenario_file(flags.scenario_path);
  if (!parsed.report.ok()) {
    print_report(parsed.report);
    return kExitUsage;
  }
  pbn::RunResult result = pbn::run_scenario(*parsed.scenario, flags.overrides);

  std::string trace_path = flags.trace_path.empty()
                               ? stem_of(flags.scenario_path) + ".trace"
                               : flags.trace_path;
  std::string summary_path = flags.summary_path.empty()
                                 ? stem_of(flags.scenario_path) + ".summary.json"
                                 : flags.summary_path;
  std::string trace_text;
  for (const std::string& line : result.trace_lines) {
    trace_text += line;
    trace_text += "\n";
  }
  if (!write_file(trace_path, trace_text) ||
      !write_file(summary_path, result.summary_json + "\n")) {
    return kExitUsage;
  }

  for (const pbn::AssertionResult& assertion : result.assertions) {
    std::cout << (assertion.passed ? "pass" : "FAIL") << ": "
              << assertion.description;
    if (!assertion.detail.empty()) {
      std::cout << " (" << assertion.detail << ")";
    }
    std::cout << "\n";
  }
  std::cout << (result.report.quiescent ? "quiescent" : "NOT QUIESCENT")
            << " after " << result.report.ticks_elapsed << " ticks, "
            << result.report.counters.messages_sent << " messages sent, "
            << result.report.counters.dropped_total() << " dropped\n";
  if (!flags.export_dir.empty()) {
    int files = pbn::export_documents(result, flags.export_dir);
    std::cout << "exported " << files << " document(s) to " << flags.export_dir
              << "\n";
  }
  std::cout << "trace: " << trace_path << "\nsummary: " << summary_path
            << "\n";
  return result.exit_code;
}

struct InspectFlags {
  std::string trace_path;
  std::string node;
  std::string kind;
  std::int64_t from = -1;
  std::int64_t to = -1;
};

int cmd_inspect(const InspectFlags& flags) {
  std::ifstream in(flags.trace_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << flags.trace_path << "\n";
    return kExitUsage;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      lines.push_back(line);
    }
  }
  pbn::InspectQuery query;
  if (!flags.node.empty()) query.node = flags.node;
  if (!flags.kind.empty()) query.kind = flags.kind;
  if (flags.from >= 0) query.from = static_cast<pbn::Tick>(flags.from);
  if (flags.to >= 0) query.to = static_cast<pbn::Tick>(flags.to);
  try {
    for (const std::string& match : pbn::inspect_trace(lines, query)) {
      std::cout << match << "\n";
    }
  } catch (const pbn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proximity-based-network scenario runner"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate", "check a scenario file against the schema");
  validate->add_option("file", validate_path, "scenario file")->required();

  RunFlags run_flags;
  std::uint64_t seed = 0;
  std::uint32_t ttl = 0;
  std::uint32_t latency = 0;
  std::uint64_t max_ticks = 0;
  std::string split_horizon;
  bool faithful = false;
  bool strict = false;
  CLI::App* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("file", run_flags.scenario_path, "scenario file")->required();
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the seed");
  CLI::Option* ttl_opt =
      run->add_option("--ttl", ttl, "packet hop budget (default: node count)");
  CLI::Option* latency_opt =
      run->add_option("--latency", latency, "link latency in ticks");
  run->add_option("--split-horizon", split_horizon,
                  "on|off (default from scenario, else on)")
      ->check(CLI::IsMember({"on", "off"}));
  run->add_flag("--faithful-routing", faithful,
                "literal delete-one-key rule, no cascade");
  run->add_flag("--strict-updates", strict,
                "reject routing updates from non-neighbors");
  run->add_option("--trace", run_flags.trace_path, "trace output path");
  run->add_option("--summary", run_flags.summary_path, "summary output path");
  run->add_option("--export-docs", run_flags.export_dir,
                  "write final documents as text files under this directory");
  CLI::Option* max_opt =
      run->add_option("--max-ticks", max_ticks, "stop after this tick");

  InspectFlags inspect_flags;
  CLI::App* inspect = app.add_subcommand("inspect", "filter a trace file");
  inspect->add_option("trace", inspect_flags.trace_path, "trace file")
      ->required();
  inspect->add_option("--node", inspect_flags.node,
                      "canonical or social node name");
  inspect->add_option("--kind", inspect_flags.kind,
                      "record key, e.g. table, send, recv, drop");
  inspect->add_option("--from", inspect_flags.from, "first tick (inclusive)");
  inspect->add_option("--to", inspect_flags.to, "last tick (inclusive)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (validate->parsed()) {
      return cmd_validate(validate_path);
    }
    if (run->parsed()) {
      if (*seed_opt) run_flags.overrides.seed = seed;
      if (*ttl_opt) run_flags.overrides.ttl = ttl;
      if (*latency_opt) run_flags.overrides.latency_ticks = latency;
      if (!split_horizon.empty()) {
        run_flags.overrides.split_horizon = split_horizon == "on";
      }
      if (faithful) run_flags.overrides.faithful_routing = true;
      if (strict) run_flags.overrides.strict_updates = true;
      if (*max_opt) run_flags.overrides.max_ticks = max_ticks;
      return cmd_run(run_flags);
    }
    return cmd_inspect(inspect_flags);
  } catch (const pbn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
