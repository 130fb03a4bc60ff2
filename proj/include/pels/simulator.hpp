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

#ifndef PELS_SIMULATOR_HPP_
#define PELS_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pels/bus.hpp"
#include "pels/fabric.hpp"
#include "pels/link.hpp"
#include "pels/periph.hpp"
#include "pels/report.hpp"
#include "pels/scenario.hpp"

namespace pels {

enum class TraceLevel : std::uint8_t {
  kOff,     // header and end record only
  kGrants,  // plus bus grants and errors
  kFull,    // every record
};

std::string_view trace_level_name(TraceLevel level);
// Throws Error(kConfig) for anything but "off", "grants" or "full".
TraceLevel parse_trace_level(std::string_view text);
// Reads PELS_TRACE_LEVEL; unset means full.
TraceLevel trace_level_from_env();

struct RunOptions {
  std::optional<TraceLevel> trace_level;  // defaults to the environment
  std::optional<RunMode> mode;            // overrides the scenario's mode
};

class Simulator {
 public:
  explicit Simulator(Scenario scenario, RunOptions options = {});

  // Runs one cycle. Returns false once the run has ended (quiescence or the
  // clock limit); further calls do nothing.
  bool step();
  SimReport run();

  bool finished() const { return finished_; }
  Cycle now() const { return now_; }
  RunMode mode() const { return mode_; }
  bool quiescent() const;

  const Scenario& scenario() const { return scenario_; }
  const EventFabric& fabric() const { return fabric_; }
  std::size_t num_links() const { return links_.size(); }
  const Link& link(std::size_t i) const { return links_.at(i); }
  const BusSegment& segment(std::size_t i) const { return segments_.at(i); }
  Peripheral* peripheral(std::string_view name) const;

  SimReport report() const;

 private:
  struct BaselineLinkState {
    std::vector<LatencySample> samples;
    std::uint32_t capture_reg = 0;
    std::uint64_t commands_executed = 0;
    std::uint64_t bus_reads = 0;
    std::uint64_t bus_writes = 0;
    std::uint64_t programs_completed = 0;
    std::uint64_t programs_aborted = 0;
    std::vector<std::string> errors;
  };

  void trace(nlohmann::ordered_json record, TraceLevel min_level);
  void record_error(std::string message);
  void run_baseline_handler(std::size_t link, Cycle event_cycle);
  std::optional<std::uint32_t> cpu_access(BusKind kind, std::uint32_t address,
                                          std::uint32_t data);
  void finish(std::string reason);

  Scenario scenario_;
  RunMode mode_;
  TraceLevel trace_level_;
  EventFabric fabric_;
  std::vector<std::unique_ptr<Peripheral>> peripherals_;
  std::vector<BusSegment> segments_;
  std::vector<Link> links_;
  std::vector<std::size_t> master_index_;  // link -> master id on its segment
  std::optional<BaselineCpu> cpu_;
  std::vector<BaselineLinkState> baseline_;
  MasterBusStats cpu_bus_;

  Cycle now_ = 0;
  std::size_t next_stimulus_ = 0;
  bool finished_ = false;
  Cycle end_cycle_ = 0;
  std::string end_reason_;
  std::vector<std::size_t> errors_reported_;
  std::vector<std::string> errors_;
  std::vector<std::string> trace_;
};

// Builds, runs and reports one scenario.
SimReport run(const Scenario& scenario, RunOptions options = {});

}  // namespace pels

#endif  // PELS_SIMULATOR_HPP_
