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

#include "pels/simulator.hpp"

#include <cstdlib>
#include <numeric>
#include <type_traits>
#include <variant>

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {
namespace {

using nlohmann::ordered_json;

// Guards the functional baseline handler against programs that jump forever.
constexpr std::uint64_t kHandlerStepLimit = 1'000'000;

std::unique_ptr<Peripheral> make_peripheral(const PeripheralSpec& spec) {
  return std::visit(
      [&](const auto& dev) -> std::unique_ptr<Peripheral> {
        using T = std::decay_t<decltype(dev)>;
        if constexpr (std::is_same_v<T, GpioSpec>) {
          return std::make_unique<Gpio>(spec.name, spec.base);
        } else if constexpr (std::is_same_v<T, TimerSpec>) {
          return std::make_unique<Timer>(spec.name, spec.base, dev.period, dev.enabled,
                                         dev.event_line);
        } else if constexpr (std::is_same_v<T, SensorSpec>) {
          return std::make_unique<Sensor>(spec.name, spec.base, dev.mode, dev.schedule,
                                          dev.event_line, dev.start_line);
        } else {
          return std::make_unique<RegisterFile>(spec.name, spec.base, dev.size_words, dev.init);
        }
      },
      spec.device);
}

std::string hex32(std::uint32_t v) { return fmt::format("0x{:08x}", v); }

}  // namespace

std::string_view trace_level_name(TraceLevel level) {
  switch (level) {
    case TraceLevel::kOff: return "off";
    case TraceLevel::kGrants: return "grants";
    case TraceLevel::kFull: return "full";
  }
  return "?";
}

TraceLevel parse_trace_level(std::string_view text) {
  if (text == "off") return TraceLevel::kOff;
  if (text == "grants") return TraceLevel::kGrants;
  if (text == "full") return TraceLevel::kFull;
  throw Error(ErrorCode::kConfig,
              fmt::format("trace level '{}' is not one of off, grants, full", text));
}

TraceLevel trace_level_from_env() {
  const char* v = std::getenv("PELS_TRACE_LEVEL");
  if (v == nullptr || *v == '\0') return TraceLevel::kFull;
  return parse_trace_level(v);
}

Simulator::Simulator(Scenario scenario, RunOptions options)
    : scenario_(std::move(scenario)),
      mode_(options.mode.value_or(scenario_.mode)),
      trace_level_(options.trace_level ? *options.trace_level : trace_level_from_env()),
      fabric_(scenario_.input_width, scenario_.output_width, scenario_.loopback) {
  validate_scenario(scenario_);

  std::vector<std::size_t> masters_on(scenario_.segments, 0);
  for (const auto& l : scenario_.links) master_index_.push_back(masters_on[l.segment]++);
  for (std::size_t s = 0; s < scenario_.segments; ++s) {
    segments_.emplace_back(s, masters_on[s], scenario_.transfer_cycles);
  }

  for (const auto& spec : scenario_.peripherals) {
    peripherals_.push_back(make_peripheral(spec));
    segments_[spec.segment].address_map().add(peripherals_.back().get());
  }

  for (std::size_t i = 0; i < scenario_.links.size(); ++i) {
    const auto& spec = scenario_.links[i];
    links_.emplace_back(i, spec.config, spec.scm_lines, spec.fifo_depth);
    links_.back().load_program(spec.program);
  }
  errors_reported_.assign(links_.size(), 0);

  if (mode_ == RunMode::kBaseline) {
    cpu_.emplace(scenario_.baseline);
    baseline_.resize(links_.size());
  }

  ordered_json header;
  header["type"] = "header";
  header["version"] = kTraceFormatVersion;
  header["scenario"] = scenario_.name;
  header["mode"] = std::string(run_mode_name(mode_));
  header["trace_level"] = std::string(trace_level_name(trace_level_));
  header["links"] = links_.size();
  header["stimulus_digest"] = scenario_.stimulus_digest();
  trace_.push_back(header.dump());
}

Peripheral* Simulator::peripheral(std::string_view name) const {
  for (const auto& p : peripherals_) {
    if (p->name() == name) return p.get();
  }
  return nullptr;
}

void Simulator::trace(ordered_json record, TraceLevel min_level) {
  if (static_cast<int>(trace_level_) < static_cast<int>(min_level)) return;
  trace_.push_back(record.dump());
}

void Simulator::record_error(std::string message) {
  trace({{"cycle", now_}, {"type", "error"}, {"message", message}}, TraceLevel::kGrants);
  errors_.push_back(std::move(message));
}

bool Simulator::step() {
  if (finished_) return false;
  if (now_ >= scenario_.clock_limit) {
    finish("clock_limit");
    return false;
  }
  const Cycle t = now_;
  fabric_.begin_cycle();

  const auto& stimuli = scenario_.stimuli;
  for (; next_stimulus_ < stimuli.size() && stimuli[next_stimulus_].cycle == t; ++next_stimulus_) {
    const auto& s = stimuli[next_stimulus_];
    fabric_.drive(s.line, s.level);
    trace({{"cycle", t}, {"type", "input"}, {"line", s.line}, {"level", s.level}},
          TraceLevel::kFull);
  }

  for (auto& p : peripherals_) p->tick(t, fabric_);

  if (mode_ == RunMode::kPels) {
    for (std::size_t i = 0; i < links_.size(); ++i) {
      auto& link = links_[i];
      if (auto req = link.step(t, fabric_.outputs())) {
        segments_[scenario_.links[i].segment].request(master_index_[i], req->kind, req->address,
                                                      req->data, t);
      }
    }
  }

  const auto inputs = fabric_.inputs();
  const auto levels = fabric_.levels();
  for (std::size_t i = 0; i < links_.size(); ++i) {
    auto& link = links_[i];
    const auto result = link.sample_trigger(inputs, levels, t);
    if (result == TriggerResult::kNone) continue;
    const bool accepted = result == TriggerResult::kAccepted;
    trace({{"cycle", t},
           {"type", "trigger"},
           {"link", i},
           {"result", accepted ? "accepted" : "dropped"},
           {"fifo", link.fifo_size()}},
          TraceLevel::kFull);
    if (accepted && cpu_) {
      link.pop_token();
      cpu_->raise(i, t);
    }
  }

  // Map (segment, master) back to the owning link.
  for (auto& seg : segments_) {
    auto result = seg.step(t);
    auto owner = [&](std::size_t master) {
      for (std::size_t i = 0; i < links_.size(); ++i) {
        if (scenario_.links[i].segment == seg.id() && master_index_[i] == master) return i;
      }
      return links_.size();
    };
    for (const auto& txn : result.completed) {
      const auto li = owner(txn.master);
      trace({{"cycle", t},
             {"type", "bus_complete"},
             {"segment", seg.id()},
             {"link", li},
             {"kind", std::string(bus_kind_name(txn.kind))},
             {"address", hex32(txn.address)},
             {"data", hex32(txn.data)},
             {"decode_error", txn.decode_error}},
            TraceLevel::kFull);
      links_[li].on_bus_complete(t, txn);
    }
    if (result.granted) {
      const auto& g = *result.granted;
      auto waiting = ordered_json::array();
      for (const auto m : g.waiting) waiting.push_back(owner(m));
      trace({{"cycle", t},
             {"type", "grant"},
             {"segment", seg.id()},
             {"link", owner(g.txn.master)},
             {"kind", std::string(bus_kind_name(g.txn.kind))},
             {"address", hex32(g.txn.address)},
             {"issue", g.txn.issue_cycle},
             {"complete", g.txn.complete_cycle},
             {"wait", g.txn.grant_wait()},
             {"waiting", std::move(waiting)}},
            TraceLevel::kGrants);
    }
  }

  if (cpu_) {
    for (const auto& job : cpu_->retire(t)) {
      trace({{"cycle", t},
             {"type", "irq"},
             {"link", job.source},
             {"event_cycle", job.event_cycle}},
            TraceLevel::kFull);
      run_baseline_handler(job.source, job.event_cycle);
      const LatencySample sample{job.event_cycle, t};
      baseline_[job.source].samples.push_back(sample);
      trace({{"cycle", t},
             {"type", "complete"},
             {"link", job.source},
             {"trigger_cycle", sample.trigger_cycle},
             {"latency", sample.latency()}},
            TraceLevel::kFull);
    }
  }

  for (std::size_t i = 0; i < links_.size(); ++i) {
    for (const auto& s : links_[i].take_new_samples()) {
      trace({{"cycle", t},
             {"type", "complete"},
             {"link", i},
             {"trigger_cycle", s.trigger_cycle},
             {"latency", s.latency()}},
            TraceLevel::kFull);
    }
    const auto& errs = links_[i].errors();
    for (; errors_reported_[i] < errs.size(); ++errors_reported_[i]) {
      record_error(fmt::format("link {}: {}", i, errs[errors_reported_[i]]));
    }
  }

  for (auto& p : peripherals_) p->observe_outputs(fabric_.outputs(), t);
  if (!(fabric_.outputs() == fabric_.latched_outputs())) {
    trace({{"cycle", t}, {"type", "outputs"}, {"value", fabric_.outputs().to_hex()}},
          TraceLevel::kFull);
  }
  fabric_.end_cycle();

  if (quiescent()) {
    finish("quiescence");
    return false;
  }
  ++now_;
  if (now_ >= scenario_.clock_limit) {
    finish("clock_limit");
    return false;
  }
  return true;
}

bool Simulator::quiescent() const {
  if (next_stimulus_ < scenario_.stimuli.size()) return false;
  for (const auto& l : links_) {
    if (l.busy()) return false;
  }
  for (const auto& s : segments_) {
    if (!s.idle()) return false;
  }
  if (cpu_ && !cpu_->idle()) return false;
  for (const auto& p : peripherals_) {
    if (p->has_pending_activity(now_)) return false;
  }
  return !fabric_.loopback_changing();
}

void Simulator::finish(std::string reason) {
  finished_ = true;
  end_cycle_ = now_;
  end_reason_ = std::move(reason);
  ordered_json end;
  end["cycle"] = end_cycle_;
  end["type"] = "end";
  end["reason"] = end_reason_;
  trace_.push_back(end.dump());
}

SimReport Simulator::run() {
  while (step()) {
  }
  return report();
}

std::optional<std::uint32_t> Simulator::cpu_access(BusKind kind, std::uint32_t address,
                                                   std::uint32_t data) {
  (kind == BusKind::kRead ? cpu_bus_.reads : cpu_bus_.writes)++;
  ++cpu_bus_.wait_histogram[0];
  for (auto& seg : segments_) {
    if (auto* block = seg.address_map().find(address)) {
      const auto word = (address - block->base()) / 4;
      if (kind == BusKind::kRead) return block->read(word, now_);
      block->write(word, data, now_);
      return data;
    }
  }
  ++cpu_bus_.decode_errors;
  return std::nullopt;
}

void Simulator::run_baseline_handler(std::size_t li, Cycle event_cycle) {
  auto& st = baseline_[li];
  const auto& link = links_[li];
  const auto& scm = link.scm();
  const auto base = link.config().base_address;
  auto fail = [&](const std::string& why) {
    ++st.programs_aborted;
    st.errors.push_back(
        fmt::format("cycle {}: baseline handler for event at {}: {}", now_, event_cycle, why));
    record_error(fmt::format("link {}: {}", li, st.errors.back()));
  };

  bool loop_active = false;
  std::uint32_t loop_count = 0;
  std::size_t pc = 0;
  std::uint64_t steps = 0;
  while (pc < scm.size() && scm[pc].opcode() != OpCode::kNop) {
    if (++steps > kHandlerStepLimit) {
      fail("handler did not terminate");
      return;
    }
    const auto& cmd = scm[pc];
    const std::uint32_t addr = base + 4 * cmd.offset();
    std::size_t next = pc + 1;
    switch (cmd.opcode()) {
      case OpCode::kWrite:
        ++st.bus_writes;
        if (!cpu_access(BusKind::kWrite, addr, cmd.operand())) {
          fail(fmt::format("bus decode error at 0x{:08x}", addr));
          return;
        }
        break;
      case OpCode::kSet:
      case OpCode::kClear:
      case OpCode::kToggle: {
        ++st.bus_reads;
        const auto old = cpu_access(BusKind::kRead, addr, 0);
        if (!old) {
          fail(fmt::format("bus decode error at 0x{:08x}", addr));
          return;
        }
        ++st.bus_writes;
        cpu_access(BusKind::kWrite, addr, execute_rmw(*old, cmd.opcode(), cmd.operand()));
        break;
      }
      case OpCode::kCapture: {
        ++st.bus_reads;
        const auto v = cpu_access(BusKind::kRead, addr, 0);
        if (!v) {
          fail(fmt::format("bus decode error at 0x{:08x}", addr));
          return;
        }
        st.capture_reg = execute_capture(*v, cmd.operand());
        break;
      }
      case OpCode::kJumpIf:
        if (execute_jump_if(st.capture_reg, cmd.condition(), cmd.operand())) next = cmd.target();
        break;
      case OpCode::kLoop:
        if (!loop_active) {
          loop_active = true;
          loop_count = cmd.operand();
        }
        if (loop_count != 0) {
          --loop_count;
          next = cmd.target();
        } else {
          loop_active = false;
        }
        break;
      case OpCode::kWait:
        break;
      case OpCode::kAction:
        try {
          execute_action(cmd, fabric_.outputs());
        } catch (const Error& e) {
          fail(e.what());
          return;
        }
        break;
      case OpCode::kNop:
        break;
    }
    ++st.commands_executed;
    pc = next;
  }
  ++st.programs_completed;
}

SimReport Simulator::report() const {
  SimReport r;
  r.scenario = scenario_.name;
  r.mode = mode_;
  r.end_cycle = finished_ ? end_cycle_ : now_;
  r.end_reason = finished_ ? end_reason_ : "running";
  r.stimulus_digest = scenario_.stimulus_digest();

  std::vector<std::size_t> cpu_pending(links_.size(), 0);
  if (cpu_) {
    // BaselineCpu keeps its queue private; anything raised but not retired
    // is the difference between accepted edges and handled events.
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const auto& b = baseline_[i];
      cpu_pending[i] = links_[i].stats().triggers_accepted - b.samples.size();
    }
  }

  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& link = links_[i];
    LinkReport lr;
    lr.id = i;
    lr.stats = link.stats();
    if (cpu_) {
      const auto& b = baseline_[i];
      lr.samples = b.samples;
      lr.stats.scm_fetches = 0;
      lr.stats.commands_executed = b.commands_executed;
      lr.stats.bus_reads = b.bus_reads;
      lr.stats.bus_writes = b.bus_writes;
      lr.stats.programs_completed = b.programs_completed;
      lr.stats.programs_aborted = b.programs_aborted;
      lr.pending = cpu_pending[i];
      lr.error = b.programs_aborted != 0;
      lr.errors = b.errors;
    } else {
      lr.samples = link.samples();
      lr.pending = link.fifo_size() + (link.phase() == LinkPhase::kIdle ? 0 : 1);
      lr.error = link.error_flag();
      lr.errors = link.errors();
    }
    lr.latency = summarize(lr.samples);
    r.links.push_back(std::move(lr));
    r.activity.scm_fetches += r.links.back().stats.scm_fetches;
  }

  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& seg = segments_[scenario_.links[i].segment];
    MasterReport m;
    m.name = fmt::format("link{}", i);
    m.segment = seg.id();
    m.stats = seg.stats().at(master_index_[i]);
    r.bus.push_back(std::move(m));
  }
  if (cpu_) r.bus.push_back({"cpu", 0, cpu_bus_});
  for (const auto& m : r.bus) r.activity.bus_transactions += m.stats.transactions();
  r.activity.shared_memory_fetches = cpu_ ? cpu_->shared_fetches() : 0;

  r.errors = errors_;
  r.final_outputs = fabric_.outputs().to_hex();
  r.trace = trace_;
  std::string joined;
  for (const auto& line : trace_) {
    joined += line;
    joined += '\n';
  }
  r.trace_digest = digest_hex(joined);
  return r;
}

SimReport run(const Scenario& scenario, RunOptions options) {
  Simulator sim(scenario, options);
  return sim.run();
}

}  // namespace pels
