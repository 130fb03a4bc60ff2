// Copyright 2026 The PELS Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// pels: runs scenarios, compares reports and sweeps configurations.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pels/error.hpp"
#include "pels/report.hpp"
#include "pels/scenario.hpp"
#include "pels/simulator.hpp"
#include "pels/sweep.hpp"

namespace {

enum Exit : int { kOk = 0, kConfigError = 1, kSimError = 2, kCheckFailed = 3 };

void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path);
  out << doc.dump(2) << '\n';
  if (!out) throw pels::Error(pels::ErrorCode::kIo, fmt::format("cannot write '{}'", path));
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pels::Error(pels::ErrorCode::kIo, fmt::format("cannot open '{}'", path));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw pels::Error(pels::ErrorCode::kConfig, fmt::format("{}: {}", path, e.what()));
  }
}

void print_summary(const pels::SimReport& r) {
  fmt::print("{} [{}]: ended at cycle {} ({})\n", r.scenario, pels::run_mode_name(r.mode),
             r.end_cycle, r.end_reason);
  for (const auto& l : r.links) {
    const auto& s = l.latency;
    if (s.count == 0) {
      fmt::print("  link {}: no completed triggers", l.id);
    } else {
      fmt::print("  link {}: {} samples, latency min {} max {} mean {:.2f} jitter {}", l.id,
                 s.count, s.min, s.max, s.mean, s.jitter);
    }
    fmt::print(", accepted {} dropped {}\n", l.stats.triggers_accepted, l.stats.triggers_dropped);
  }
  fmt::print("  activity: shared fetches {}, scm fetches {}, bus transactions {}\n",
             r.activity.shared_memory_fetches, r.activity.scm_fetches,
             r.activity.bus_transactions);
  for (const auto& e : r.errors) fmt::print(stderr, "error: {}\n", e);
}

struct RunArgs {
  std::string scenario;
  std::string trace;
  std::string report;
  std::string trace_level;
  bool check = false;
  bool baseline = false;
};

int cmd_run(const RunArgs& a) {
  const auto sc = pels::load_scenario(a.scenario);
  pels::RunOptions opts;
  if (!a.trace_level.empty()) opts.trace_level = pels::parse_trace_level(a.trace_level);
  if (a.baseline) opts.mode = pels::RunMode::kBaseline;
  const auto report = pels::run(sc, opts);

  if (!a.trace.empty()) {
    std::ofstream out(a.trace);
    if (!out) throw pels::Error(pels::ErrorCode::kIo, fmt::format("cannot write '{}'", a.trace));
    pels::emit_trace(report, out);
  }
  if (!a.report.empty()) write_json(a.report, pels::report_to_json(report));
  print_summary(report);

  if (report.has_errors()) return kSimError;
  if (a.check) {
    const auto failures = pels::check_expectations(sc, report);
    for (const auto& f : failures) fmt::print(stderr, "check failed: {}\n", f);
    if (!failures.empty()) return kCheckFailed;
    fmt::print("check passed ({} expectations)\n", sc.expectations.size());
  }
  return kOk;
}

struct CompareArgs {
  std::string a;
  std::string b;
  std::string output;
  std::optional<double> pels_mhz;
  std::optional<double> baseline_mhz;
};

int cmd_compare(const CompareArgs& c) {
  auto first = pels::report_from_json(read_json(c.a));
  auto second = pels::report_from_json(read_json(c.b));
  if (first.mode == pels::RunMode::kBaseline && second.mode == pels::RunMode::kPels) {
    std::swap(first, second);
  }
  const auto cmp = pels::compare(first, second, c.pels_mhz, c.baseline_mhz);
  const auto doc = pels::comparison_to_json(cmp);
  if (!c.output.empty()) write_json(c.output, doc);
  fmt::print("{}\n", doc.dump(2));
  return kOk;
}

struct SweepArgs {
  std::string scenario;
  std::string links = "1..8";
  std::string scm_lines = "4,6,8";
  std::string output;
};

int cmd_sweep(const SweepArgs& s) {
  const auto tmpl = pels::load_scenario(s.scenario);
  const auto links = pels::parse_count_list(s.links);
  const auto lines = pels::parse_count_list(s.scm_lines);
  const auto points = pels::run_sweep(tmpl, links, lines, pels::TraceLevel::kFull);
  bool ok = true;
  fmt::print("{:>5} {:>9} {:>8} {:>8} {:>8} {:>9} {:>8}  {}\n", "links", "scm_lines", "samples",
             "lat_max", "max_wait", "bus_txns", "dropped", "status");
  for (const auto& p : points) {
    fmt::print("{:>5} {:>9} {:>8} {:>8} {:>8} {:>9} {:>8}  {}\n", p.links, p.scm_lines,
               p.latency.count, p.latency.max, p.max_grant_wait, p.bus_transactions,
               p.triggers_dropped, p.passed() ? "ok" : "FAIL");
    for (const auto& f : p.failures) fmt::print(stderr, "  {}x{}: {}\n", p.links, p.scm_lines, f);
    ok = ok && p.passed();
  }
  if (!s.output.empty()) write_json(s.output, pels::sweep_to_json(points));
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-accurate PELS simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate one scenario");
  run->add_option("scenario", run_args.scenario, "Scenario JSON")->required();
  run->add_option("--trace", run_args.trace, "Write the JSON Lines trace here");
  run->add_option("--report", run_args.report, "Write the JSON report here");
  run->add_option("--trace-level", run_args.trace_level,
                  "off, grants or full (default: PELS_TRACE_LEVEL, else full)");
  run->add_flag("--check", run_args.check, "Assert the scenario's expected latencies");
  run->add_flag("--baseline", run_args.baseline, "Service triggers with the baseline CPU model");

  CompareArgs cmp_args;
  auto* cmp = app.add_subcommand("compare", "Compare a PELS report against a baseline report");
  cmp->add_option("a", cmp_args.a, "First report")->required();
  cmp->add_option("b", cmp_args.b, "Second report")->required();
  cmp->add_option("-o,--output", cmp_args.output, "Write the comparison here");
  cmp->add_option("--pels-mhz", cmp_args.pels_mhz, "Clock annotation for the PELS run");
  cmp->add_option("--baseline-mhz", cmp_args.baseline_mhz, "Clock annotation for the baseline");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a template scenario over links x SCM lines");
  sweep->add_option("scenario", sweep_args.scenario, "Template scenario JSON")->required();
  sweep->add_option("--links", sweep_args.links, "Link counts, e.g. 1..8")
      ->capture_default_str();
  sweep->add_option("--scm-lines", sweep_args.scm_lines, "SCM sizes, e.g. 4,6,8")
      ->capture_default_str();
  sweep->add_option("--report", sweep_args.output, "Write per-configuration results here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args);
    if (*cmp) return cmd_compare(cmp_args);
    return cmd_sweep(sweep_args);
  } catch (const pels::Error& e) {
    std::cerr << "pels: " << pels::error_code_name(e.code()) << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "pels: " << e.what() << "\n";
    return kSimError;
  }
}
