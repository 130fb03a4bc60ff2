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

#ifndef PELS_SWEEP_HPP_
#define PELS_SWEEP_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pels/report.hpp"
#include "pels/scenario.hpp"
#include "pels/simulator.hpp"

namespace pels {

// Parses "1..8", "4,6,8" or a mix such as "1..3,8". Throws Error(kConfig).
std::vector<std::size_t> parse_count_list(std::string_view text);

// Scales a template scenario to `links` links, each copying template link
// i % n and resized to `scm_lines` SCM lines. Program fit is not checked here.
Scenario replicate(const Scenario& tmpl, std::size_t links, std::size_t scm_lines);

struct SweepPoint {
  std::size_t links = 0;
  std::size_t scm_lines = 0;
  std::vector<std::string> failures;
  LatencySummary latency;
  Cycle max_grant_wait = 0;
  std::uint64_t bus_transactions = 0;
  std::uint64_t triggers_dropped = 0;
  Cycle end_cycle = 0;
  std::string trace_digest;

  bool passed() const { return failures.empty(); }
};

// Self-consistency checks over one finished run; empty when all hold.
std::vector<std::string> validate_report(const Scenario& scenario, const SimReport& report);

// Runs every (links, scm_lines) pair in parallel, each twice for determinism.
std::vector<SweepPoint> run_sweep(const Scenario& tmpl, const std::vector<std::size_t>& links,
                                  const std::vector<std::size_t>& scm_lines,
                                  TraceLevel trace_level = TraceLevel::kFull);

nlohmann::ordered_json sweep_to_json(const std::vector<SweepPoint>& points);

}  // namespace pels

#endif  // PELS_SWEEP_HPP_
