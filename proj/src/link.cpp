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

#include "pels/link.hpp"

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {

bool evaluate_trigger(const EventVector& inputs, const LinkConfig& cfg) {
  const auto& mask = cfg.event_mask;
  if (mask.none()) return false;
  const auto selected = inputs & mask;
  if (cfg.trigger_mode == TriggerMode::kAnySelectedActive) return selected.any();
  return selected == mask;
}

std::uint32_t execute_rmw(std::uint32_t old_value, OpCode opcode, std::uint32_t mask) {
  switch (opcode) {
    case OpCode::kSet: return old_value | mask;
    case OpCode::kClear: return old_value & ~mask;
    case OpCode::kToggle: return old_value ^ mask;
    default: break;
  }
  throw std::invalid_argument(fmt::format("'{}' is not a read-modify-write command",
                                          mnemonic(opcode)));
}

bool execute_jump_if(std::uint32_t capture_reg, Condition cond, std::uint32_t operand) {
  switch (cond) {
    case Condition::kEq: return capture_reg == operand;
    case Condition::kNe: return capture_reg != operand;
    case Condition::kLtu: return capture_reg < operand;
    case Condition::kGeu: return capture_reg >= operand;
  }
  return false;
}

void execute_action(const Command& cmd, EventVector& outputs) {
  const auto group = cmd.group();
  if (group >= outputs.num_groups()) {
    throw Error(ErrorCode::kGroupOutOfRange,
                fmt::format("event group {} outside {} output groups", group,
                            outputs.num_groups()));
  }
  if (cmd.action_mode() == ActionMode::kToggle) {
    outputs.set_group(group, outputs.group(group) ^ cmd.operand());
  } else {
    outputs.set_group(group, cmd.operand());
  }
}

std::string_view phase_name(LinkPhase phase) {
  switch (phase) {
    case LinkPhase::kIdle: return "IDLE";
    case LinkPhase::kFetch: return "FETCH";
    case LinkPhase::kExecute: return "EXECUTE";
    case LinkPhase::kBusReadPending: return "BUS_READ_PEND";
    case LinkPhase::kModify: return "MODIFY";
    case LinkPhase::kBusWritePending: return "BUS_WRITE_PEND";
    case LinkPhase::kWaitCount: return "WAIT_COUNT";
  }
  return "?";
}

Link::Link(std::size_t id, LinkConfig config, std::size_t scm_lines, std::size_t fifo_depth)
    : id_(id), config_(std::move(config)), scm_(scm_lines), fifo_depth_(fifo_depth) {
  if (scm_lines == 0 || scm_lines > kMaxProgramLength) {
    throw Error(ErrorCode::kConfig,
                fmt::format("link {}: SCM lines must be in 1..{}", id, kMaxProgramLength));
  }
  if (fifo_depth == 0 || fifo_depth > kMaxFifoDepth) {
    throw Error(ErrorCode::kConfig,
                fmt::format("link {}: FIFO depth must be in 1..{}", id, kMaxFifoDepth));
  }
  if (config_.base_address % 4 != 0) {
    throw Error(ErrorCode::kConfig,
                fmt::format("link {}: base address 0x{:x} is not word aligned", id,
                            config_.base_address));
  }
}

void Link::load_program(const Program& prog) {
  if (phase_ != LinkPhase::kIdle) {
    throw Error(ErrorCode::kLinkBusy,
                fmt::format("link {} is in {}", id_, phase_name(phase_)));
  }
  validate_program(prog);
  validate_against_capacity(prog, scm_.size());
  std::fill(scm_.begin(), scm_.end(), Command::nop());
  std::copy(prog.commands.begin(), prog.commands.end(), scm_.begin());
}

std::optional<BusRequest> Link::step(Cycle now, EventVector& outputs) {
  last_activity_ = phase_;
  switch (phase_) {
    case LinkPhase::kIdle: {
      if (!config_.enabled || fifo_.empty()) return std::nullopt;
      trigger_cycle_ = fifo_.front();
      fifo_.pop_front();
      pc_ = 0;
      loop_active_ = false;
      last_activity_ = LinkPhase::kFetch;
      ++stats_.scm_fetches;
      if (scm_[0].opcode() == OpCode::kNop) {
        // Empty program: the token is consumed without running anything.
        samples_.push_back({trigger_cycle_, now});
        ++stats_.programs_completed;
      } else {
        phase_ = LinkPhase::kExecute;
      }
      return std::nullopt;
    }
    case LinkPhase::kExecute:
      return execute(now, outputs);
    case LinkPhase::kModify: {
      const auto& cmd = current();
      phase_ = LinkPhase::kBusWritePending;
      return BusRequest{BusKind::kWrite, register_address(cmd),
                        execute_rmw(read_data_, cmd.opcode(), cmd.operand())};
    }
    case LinkPhase::kWaitCount:
      if (--wait_count_ == 0) finish_command(now, pc_ + 1);
      return std::nullopt;
    case LinkPhase::kFetch:
    case LinkPhase::kBusReadPending:
    case LinkPhase::kBusWritePending:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<BusRequest> Link::execute(Cycle now, EventVector& outputs) {
  const auto& cmd = current();
  switch (cmd.opcode()) {
    case OpCode::kNop:
      finish_command(now, scm_.size());
      return std::nullopt;
    case OpCode::kAction:
      try {
        execute_action(cmd, outputs);
      } catch (const Error& e) {
        abort(now, e.what());
        return std::nullopt;
      }
      finish_command(now, pc_ + 1);
      return std::nullopt;
    case OpCode::kWrite:
      phase_ = LinkPhase::kBusWritePending;
      return BusRequest{BusKind::kWrite, register_address(cmd), cmd.operand()};
    case OpCode::kSet:
    case OpCode::kClear:
    case OpCode::kToggle:
    case OpCode::kCapture:
      phase_ = LinkPhase::kBusReadPending;
      return BusRequest{BusKind::kRead, register_address(cmd), 0};
    case OpCode::kJumpIf:
      finish_command(now, execute_jump_if(capture_reg_, cmd.condition(), cmd.operand())
                              ? cmd.target()
                              : pc_ + 1);
      return std::nullopt;
    case OpCode::kLoop: {
      if (!loop_active_) {
        loop_active_ = true;
        loop_count_ = cmd.operand();
      }
      std::size_t next = pc_ + 1;
      if (loop_count_ != 0) {
        --loop_count_;
        next = cmd.target();
      } else {
        loop_active_ = false;
      }
      finish_command(now, next);
      return std::nullopt;
    }
    case OpCode::kWait:
      if (cmd.operand() == 0) {
        finish_command(now, pc_ + 1);
      } else {
        wait_count_ = cmd.operand();
        phase_ = LinkPhase::kWaitCount;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

void Link::on_bus_complete(Cycle now, const BusTransaction& txn) {
  (txn.kind == BusKind::kRead ? stats_.bus_reads : stats_.bus_writes)++;
  if (txn.decode_error) {
    abort(now, fmt::format("bus decode error at 0x{:08x}", txn.address));
    return;
  }
  if (phase_ == LinkPhase::kBusReadPending) {
    const auto& cmd = current();
    if (cmd.opcode() == OpCode::kCapture) {
      capture_reg_ = execute_capture(txn.data, cmd.operand());
      finish_command(now, pc_ + 1);
    } else {
      read_data_ = txn.data;
      phase_ = LinkPhase::kModify;
    }
  } else if (phase_ == LinkPhase::kBusWritePending) {
    finish_command(now, pc_ + 1);
  }
}

TriggerResult Link::sample_trigger(const EventVector& inputs, const EventVector& levels,
                                   Cycle now) {
  if (!config_.enabled) return TriggerResult::kNone;
  const bool fires = evaluate_trigger(inputs, config_);
  const bool edge = fires && !prev_level_trigger_;
  prev_level_trigger_ = evaluate_trigger(levels, config_);
  if (!edge) return TriggerResult::kNone;
  ++stats_.trigger_edges;
  if (fifo_.size() >= fifo_depth_) {
    ++stats_.triggers_dropped;
    return TriggerResult::kDropped;
  }
  fifo_.push_back(now);
  ++stats_.triggers_accepted;
  return TriggerResult::kAccepted;
}

std::optional<Cycle> Link::pop_token() {
  if (fifo_.empty()) return std::nullopt;
  const auto c = fifo_.front();
  fifo_.pop_front();
  return c;
}

std::vector<LatencySample> Link::take_new_samples() {
  std::vector<LatencySample> out(samples_.begin() + static_cast<std::ptrdiff_t>(samples_reported_),
                                 samples_.end());
  samples_reported_ = samples_.size();
  return out;
}

void Link::finish_command(Cycle now, std::size_t next_pc) {
  ++stats_.commands_executed;
  pc_ = next_pc;
  if (pc_ >= scm_.size() || scm_[pc_].opcode() == OpCode::kNop) {
    samples_.push_back({trigger_cycle_, now});
    ++stats_.programs_completed;
    phase_ = LinkPhase::kIdle;
    pc_ = 0;
    return;
  }
  ++stats_.scm_fetches;
  phase_ = LinkPhase::kExecute;
}

void Link::abort(Cycle now, const std::string& why) {
  error_flag_ = true;
  errors_.push_back(fmt::format("cycle {}: {}", now, why));
  ++stats_.programs_aborted;
  phase_ = LinkPhase::kIdle;
  pc_ = 0;
}

}  // namespace pels
