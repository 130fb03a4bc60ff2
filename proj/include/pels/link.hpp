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

#ifndef PELS_LINK_HPP_
#define PELS_LINK_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pels/asm.hpp"
#include "pels/bus.hpp"
#include "pels/event_vector.hpp"
#include "pels/isa.hpp"

namespace pels {

enum class TriggerMode : std::uint8_t {
  kAllSelectedActive,  // AND over the masked lines
  kAnySelectedActive,  // OR over the masked lines
};

struct LinkConfig {
  EventVector event_mask;
  TriggerMode trigger_mode = TriggerMode::kAnySelectedActive;
  std::uint32_t base_address = 0;
  bool enabled = true;
};

// Trigger predicate over one input vector. An empty mask never fires.
bool evaluate_trigger(const EventVector& inputs, const LinkConfig& cfg);

// Bitwise update applied by SET / CLEAR / TOGGLE.
std::uint32_t execute_rmw(std::uint32_t old_value, OpCode opcode, std::uint32_t mask);

inline std::uint32_t execute_capture(std::uint32_t bus_value, std::uint32_t mask) {
  return bus_value & mask;
}

bool execute_jump_if(std::uint32_t capture_reg, Condition cond, std::uint32_t operand);

// Applies an ACTION to the output lines. Throws Error(kGroupOutOfRange).
void execute_action(const Command& cmd, EventVector& outputs);

enum class LinkPhase : std::uint8_t {
  kIdle,
  kFetch,
  kExecute,
  kBusReadPending,
  kModify,
  kBusWritePending,
  kWaitCount,
};

std::string_view phase_name(LinkPhase phase);

struct LinkStats {
  std::uint64_t trigger_edges = 0;
  std::uint64_t triggers_accepted = 0;
  std::uint64_t triggers_dropped = 0;
  std::uint64_t commands_executed = 0;
  std::uint64_t scm_fetches = 0;
  std::uint64_t bus_reads = 0;
  std::uint64_t bus_writes = 0;
  std::uint64_t programs_completed = 0;
  std::uint64_t programs_aborted = 0;
};

struct LatencySample {
  Cycle trigger_cycle = 0;
  Cycle completion_cycle = 0;
  Cycle latency() const { return completion_cycle - trigger_cycle; }
};

struct BusRequest {
  BusKind kind = BusKind::kRead;
  std::uint32_t address = 0;
  std::uint32_t data = 0;
};

enum class TriggerResult : std::uint8_t { kNone, kAccepted, kDropped };

// One event-linking unit: trigger unit, trigger FIFO, private SCM and
// execution unit.
//
// Timing, with the triggering input asserted in cycle 0:
//   cycle 1   token leaves the FIFO, SCM line 0 is read (FETCH)
//   cycle 2   first command executes; ACTION drives outputs here
//   RMW       read requested in 2, transferred 3-4, MODIFY and write request
//             in 5, write transferred 6-7
// Each command after the first executes the cycle after its predecessor
// finishes. JUMP_IF and LOOP take one cycle; WAIT n takes 1 + n.
class Link {
 public:
  static constexpr std::size_t kDefaultFifoDepth = 4;
  static constexpr std::size_t kMaxFifoDepth = 16;

  Link(std::size_t id, LinkConfig config, std::size_t scm_lines,
       std::size_t fifo_depth = kDefaultFifoDepth);

  std::size_t id() const { return id_; }
  const LinkConfig& config() const { return config_; }
  std::size_t scm_lines() const { return scm_.size(); }
  std::size_t fifo_depth() const { return fifo_depth_; }

  // Throws Error(kLinkBusy) unless idle, Error(kCapacityExceeded) when the
  // program does not fit, and the validate_program errors.
  void load_program(const Program& prog);
  const std::vector<Command>& scm() const { return scm_; }

  // Advances the execution unit by one cycle. ACTIONs write `outputs`
  // directly; a bus access is returned for the owner to forward.
  std::optional<BusRequest> step(Cycle now, EventVector& outputs);

  // Delivers the completion of this link's outstanding bus transaction.
  void on_bus_complete(Cycle now, const BusTransaction& txn);

  // Edge-detects the trigger predicate. `levels` excludes one-cycle strobes:
  // a strobe always counts as a fresh edge in the cycle it is pulsed.
  TriggerResult sample_trigger(const EventVector& inputs, const EventVector& levels, Cycle now);

  // Removes the oldest token without executing it.
  std::optional<Cycle> pop_token();

  LinkPhase phase() const { return phase_; }
  // Phase occupied during the most recent step() (FETCH is transient).
  LinkPhase last_activity() const { return last_activity_; }
  std::size_t pc() const { return pc_; }
  std::uint32_t capture_reg() const { return capture_reg_; }
  std::size_t fifo_size() const { return fifo_.size(); }
  bool busy() const { return phase_ != LinkPhase::kIdle || !fifo_.empty(); }
  bool error_flag() const { return error_flag_; }
  const std::vector<std::string>& errors() const { return errors_; }
  const LinkStats& stats() const { return stats_; }
  const std::vector<LatencySample>& samples() const { return samples_; }
  // Samples appended since the last call.
  std::vector<LatencySample> take_new_samples();

 private:
  const Command& current() const { return scm_[pc_]; }
  std::optional<BusRequest> execute(Cycle now, EventVector& outputs);
  void finish_command(Cycle now, std::size_t next_pc);
  void abort(Cycle now, const std::string& why);
  std::uint32_t register_address(const Command& cmd) const {
    return config_.base_address + 4 * cmd.offset();
  }

  std::size_t id_;
  LinkConfig config_;
  std::vector<Command> scm_;
  std::size_t fifo_depth_;
  std::deque<Cycle> fifo_;  // trigger cycle of each pending token

  LinkPhase phase_ = LinkPhase::kIdle;
  LinkPhase last_activity_ = LinkPhase::kIdle;
  std::size_t pc_ = 0;
  Cycle trigger_cycle_ = 0;
  bool loop_active_ = false;
  std::uint32_t loop_count_ = 0;
  std::uint32_t wait_count_ = 0;
  std::uint32_t read_data_ = 0;
  std::uint32_t capture_reg_ = 0;
  bool prev_level_trigger_ = false;

  bool error_flag_ = false;
  std::vector<std::string> errors_;
  LinkStats stats_;
  std::vector<LatencySample> samples_;
  std::size_t samples_reported_ = 0;
};

}  // namespace pels

#endif  // PELS_LINK_HPP_
