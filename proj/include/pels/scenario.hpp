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

#ifndef PELS_SCENARIO_HPP_
#define PELS_SCENARIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pels/asm.hpp"
#include "pels/fabric.hpp"
#include "pels/link.hpp"
#include "pels/periph.hpp"

namespace pels {

enum class RunMode : std::uint8_t {
  kPels,      // links execute their microcode
  kBaseline,  // the same trigger edges are serviced by the baseline CPU model
};

std::string_view run_mode_name(RunMode mode);

struct GpioSpec {};

struct TimerSpec {
  std::uint32_t period = 0;
  bool enabled = true;
  std::optional<std::size_t> event_line;
};

struct SensorSpec {
  Sensor::Mode mode = Sensor::Mode::kContinuous;
  std::vector<SamplePoint> schedule;
  std::optional<std::size_t> event_line;
  std::optional<std::size_t> start_line;
};

struct RegisterFileSpec {
  std::size_t size_words = 1;
  std::vector<std::uint32_t> init;
};

struct PeripheralSpec {
  std::string name;
  std::uint32_t base = 0;
  std::size_t segment = 0;
  std::variant<GpioSpec, TimerSpec, SensorSpec, RegisterFileSpec> device;
};

struct LinkSpec {
  std::size_t scm_lines = 8;
  std::size_t fifo_depth = Link::kDefaultFifoDepth;
  std::size_t segment = 0;
  LinkConfig config;
  Program program;
};

struct Stimulus {
  Cycle cycle = 0;
  std::size_t line = 0;
  bool level = false;
};

struct LatencyExpectation {
  std::size_t link = 0;
  std::optional<Cycle> min;
  std::optional<Cycle> max;
  std::optional<std::size_t> samples;
};

struct Scenario {
  std::string name = "scenario";
  Cycle clock_limit = 100000;
  RunMode mode = RunMode::kPels;
  std::size_t input_width = 32;
  std::size_t output_width = 32;
  std::vector<LoopbackRoute> loopback;
  std::size_t segments = 1;
  unsigned transfer_cycles = 2;
  std::vector<LinkSpec> links;
  std::vector<PeripheralSpec> peripherals;
  BaselineCpuParams baseline;
  std::vector<Stimulus> stimuli;  // sorted by cycle, stable
  std::vector<LatencyExpectation> expectations;

  // Digest over stimuli and peripheral declarations: two runs driven by the
  // same stimulus share it regardless of mode or link programs.
  std::string stimulus_digest() const;
};

// Builds a scenario from its JSON form. Relative program paths resolve
// against base_dir. Throws Error(kConfig) whose message starts with the JSON
// pointer of the offending field.
Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

// Cross-field checks run by parse_scenario and again by the simulator.
void validate_scenario(const Scenario& scenario);

// 64-bit FNV-1a, lower-case hex.
std::string digest_hex(std::string_view bytes);

}  // namespace pels

#endif  // PELS_SCENARIO_HPP_
