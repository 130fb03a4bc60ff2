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

#ifndef PELS_REPORT_HPP_
#define PELS_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pels/bus.hpp"
#include "pels/link.hpp"
#include "pels/scenario.hpp"

namespace pels {

inline constexpr int kTraceFormatVersion = 1;
inline constexpr const char* kPowerProxyLabel =
    "power proxy: activity counters only, power is not simulated";

struct LatencySummary {
  std::size_t count = 0;
  Cycle min = 0;
  Cycle max = 0;
  double mean = 0.0;
  Cycle jitter = 0;  // max - min
};

LatencySummary summarize(const std::vector<LatencySample>& samples);

struct LinkReport {
  std::size_t id = 0;
  std::vector<LatencySample> samples;
  LatencySummary latency;
  LinkStats stats;
  std::size_t pending = 0;  // tokens queued or running when the run ended
  bool error = false;
  std::vector<std::string> errors;
};

struct MasterReport {
  std::string name;  // "link<i>" or "cpu"
  std::size_t segment = 0;
  MasterBusStats stats;
};

// Stand-in for power: counts of activity around the shared memory system.
struct ActivityReport {
  std::uint64_t shared_memory_fetches = 0;
  std::uint64_t scm_fetches = 0;
  std::uint64_t bus_transactions = 0;

  std::uint64_t memory_activity() const { return shared_memory_fetches + bus_transactions; }
};

struct SimReport {
  std::string scenario;
  RunMode mode = RunMode::kPels;
  Cycle end_cycle = 0;
  std::string end_reason;  // "quiescence" or "clock_limit"
  std::string stimulus_digest;
  std::vector<LinkReport> links;
  std::vector<MasterReport> bus;
  ActivityReport activity;
  std::vector<std::string> errors;
  std::string final_outputs;  // hex
  std::vector<std::string> trace;  // JSON Lines records, header first
  std::string trace_digest;

  bool has_errors() const { return !errors.empty(); }
  LatencySummary overall_latency() const;
};

nlohmann::ordered_json report_to_json(const SimReport& report);
// Reads back what report_to_json wrote (trace lines are not stored there).
SimReport report_from_json(const nlohmann::json& doc);

// Writes the trace, one record per line. Throws Error(kIo) on stream failure.
void emit_trace(const SimReport& report, std::ostream& sink);

struct Comparison {
  double pels_latency_mean = 0.0;
  double baseline_latency_mean = 0.0;
  double latency_ratio = 1.0;
  std::uint64_t pels_bus_transactions = 0;
  std::uint64_t baseline_bus_transactions = 0;
  double bus_transaction_ratio = 1.0;
  std::uint64_t pels_shared_fetches = 0;
  std::uint64_t baseline_shared_fetches = 0;
  double shared_fetch_ratio = 1.0;  // +inf when PELS performs none
  std::uint64_t pels_memory_activity = 0;
  std::uint64_t baseline_memory_activity = 0;
  double memory_activity_ratio = 1.0;
  // Optional clock annotations; the simulator itself counts cycles only.
  std::optional<double> pels_mhz;
  std::optional<double> baseline_mhz;
};

// Ratios are baseline / pels. Throws Error(kMismatchedStimulus) when the two
// reports were not produced from the same stimulus.
Comparison compare(const SimReport& pels, const SimReport& baseline,
                   std::optional<double> pels_mhz = std::nullopt,
                   std::optional<double> baseline_mhz = std::nullopt);

nlohmann::ordered_json comparison_to_json(const Comparison& cmp);

// Checks the scenario's "expect" block; returns one message per failure.
std::vector<std::string> check_expectations(const Scenario& scenario, const SimReport& report);

}  // namespace pels

#endif  // PELS_REPORT_HPP_
