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

#ifndef PELS_PERIPH_HPP_
#define PELS_PERIPH_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pels/event_vector.hpp"
#include "pels/fabric.hpp"

namespace pels {

// A memory-mapped register block. Offsets passed to read/write are word
// indices relative to base(); the bus never delivers an access outside
// [base, base + 4 * size_words).
class Peripheral {
 public:
  Peripheral(std::string name, std::uint32_t base, std::size_t size_words);
  virtual ~Peripheral() = default;

  Peripheral(const Peripheral&) = delete;
  Peripheral& operator=(const Peripheral&) = delete;

  const std::string& name() const { return name_; }
  std::uint32_t base() const { return base_; }
  std::size_t size_words() const { return size_words_; }
  // One past the last byte address, widened so blocks ending at 4 GiB work.
  std::uint64_t end() const { return std::uint64_t{base_} + 4 * std::uint64_t{size_words_}; }
  bool claims(std::uint32_t address) const { return address >= base_ && address < end(); }

  virtual std::string_view kind() const = 0;
  virtual std::uint32_t read(std::size_t word, Cycle now) = 0;
  virtual void write(std::size_t word, std::uint32_t value, Cycle now) = 0;

  // Start of cycle: advance internal time and pulse event strobes.
  virtual void tick(Cycle /*now*/, EventFabric& /*fabric*/) {}
  // End of cycle: react to PELS-driven output lines.
  virtual void observe_outputs(const EventVector& /*outputs*/, Cycle /*now*/) {}
  // True while the block will still generate events without outside input.
  virtual bool has_pending_activity(Cycle /*now*/) const { return false; }

 private:
  std::string name_;
  std::uint32_t base_;
  std::size_t size_words_;
};

// Plain read/write storage.
class RegisterFile : public Peripheral {
 public:
  RegisterFile(std::string name, std::uint32_t base, std::size_t size_words,
               std::vector<std::uint32_t> init = {});

  std::string_view kind() const override { return "regs"; }
  std::uint32_t read(std::size_t word, Cycle now) override;
  void write(std::size_t word, std::uint32_t value, Cycle now) override;

  std::uint32_t at(std::size_t word) const { return regs_.at(word); }

 private:
  std::vector<std::uint32_t> regs_;
};

// GPIO with write-1-to-act SET/CLR/TGL aliases of the OUT register.
class Gpio : public Peripheral {
 public:
  enum Reg : std::size_t { kOut = 0, kSet = 1, kClr = 2, kTgl = 3, kNumRegs = 4 };

  Gpio(std::string name, std::uint32_t base);

  std::string_view kind() const override { return "gpio"; }
  std::uint32_t read(std::size_t word, Cycle now) override;
  void write(std::size_t word, std::uint32_t value, Cycle now) override;

  std::uint32_t pins() const { return pins_; }

 private:
  std::uint32_t pins_ = 0;
};

// Free-running counter. While enabled, COUNT increments every cycle; when it
// reaches PERIOD the timer pulses its event line for one cycle and wraps to
// zero. Enabled at cycle e, the first pulse lands at e + PERIOD.
class Timer : public Peripheral {
 public:
  enum Reg : std::size_t { kCtrl = 0, kPeriod = 1, kCount = 2, kNumRegs = 3 };

  Timer(std::string name, std::uint32_t base, std::uint32_t period, bool enabled,
        std::optional<std::size_t> event_line);

  std::string_view kind() const override { return "timer"; }
  std::uint32_t read(std::size_t word, Cycle now) override;
  void write(std::size_t word, std::uint32_t value, Cycle now) override;
  void tick(Cycle now, EventFabric& fabric) override;
  bool has_pending_activity(Cycle now) const override;

  std::uint64_t pulses() const { return pulses_; }

 private:
  bool enabled_;
  std::uint32_t period_;
  std::uint32_t count_ = 0;
  Cycle enabled_at_ = 0;
  std::optional<std::size_t> event_line_;
  std::uint64_t pulses_ = 0;
};

struct SamplePoint {
  Cycle cycle = 0;
  std::uint32_t value = 0;
  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

// Seeded schedule for stress scenarios: `count` samples, the first at `first`,
// gaps uniform in [min_gap, max_gap], values uniform in [lo, hi].
std::vector<SamplePoint> random_schedule(std::uint64_t seed, std::size_t count, Cycle first,
                                         Cycle min_gap, Cycle max_gap, std::uint32_t lo,
                                         std::uint32_t hi);

// Sensor front end with a scheduled sample stream.
//
// In continuous mode SAMPLE always reflects the latest scheduled value at or
// before the current cycle, and the event line pulses in each landing cycle.
// In triggered (ADC) mode SAMPLE only updates when START is written or the
// start output line rises; the event line pulses one cycle after the latch.
class Sensor : public Peripheral {
 public:
  enum Reg : std::size_t { kSample = 0, kStart = 1, kNumRegs = 2 };
  enum class Mode { kContinuous, kTriggered };

  Sensor(std::string name, std::uint32_t base, Mode mode, std::vector<SamplePoint> schedule,
         std::optional<std::size_t> event_line, std::optional<std::size_t> start_line);

  std::string_view kind() const override { return "sensor"; }
  std::uint32_t read(std::size_t word, Cycle now) override;
  void write(std::size_t word, std::uint32_t value, Cycle now) override;
  void tick(Cycle now, EventFabric& fabric) override;
  void observe_outputs(const EventVector& outputs, Cycle now) override;
  bool has_pending_activity(Cycle now) const override;

  // Latest scheduled value at or before `now`, 0 before the first sample.
  std::uint32_t scheduled_value(Cycle now) const;
  std::uint32_t sample() const { return sample_; }

 private:
  void latch(Cycle now);

  Mode mode_;
  std::vector<SamplePoint> schedule_;
  std::optional<std::size_t> event_line_;
  std::optional<std::size_t> start_line_;
  std::uint32_t sample_ = 0;
  bool start_level_ = false;
  bool pulse_pending_ = false;
};

// Calibrated stand-in for the main core servicing a linking event through
// its interrupt path. Not an instruction-set simulator: latency and shared
// memory fetches are fixed per configuration.
struct BaselineCpuParams {
  std::uint32_t interrupt_entry_cycles = 10;
  std::uint32_t handler_cycles = 6;
  std::uint32_t memory_fetches_per_handler = 16;

  std::uint32_t total_cycles() const { return interrupt_entry_cycles + handler_cycles; }
};

struct BaselineOutcome {
  Cycle completion = 0;
  std::uint64_t shared_fetches = 0;
};

BaselineOutcome baseline_handle_event(const BaselineCpuParams& params, Cycle event_cycle);

// Serializes interrupt requests through one core. An event raised while the
// core is busy starts when the previous handler finishes.
class BaselineCpu {
 public:
  struct Job {
    std::size_t source = 0;
    Cycle event_cycle = 0;
    Cycle completion = 0;
  };

  explicit BaselineCpu(BaselineCpuParams params) : params_(params) {}

  const BaselineCpuParams& params() const { return params_; }

  void raise(std::size_t source, Cycle event_cycle);
  // Jobs whose handler finishes in cycle `now`.
  std::vector<Job> retire(Cycle now);
  bool idle() const { return queue_.empty(); }

  std::uint64_t shared_fetches() const { return shared_fetches_; }
  std::uint64_t handled() const { return handled_; }

 private:
  BaselineCpuParams params_;
  std::deque<Job> queue_;
  Cycle free_at_ = 0;
  std::uint64_t shared_fetches_ = 0;
  std::uint64_t handled_ = 0;
};

}  // namespace pels

#endif  // PELS_PERIPH_HPP_
