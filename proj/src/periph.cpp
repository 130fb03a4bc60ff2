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

#include "pels/periph.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace pels {

Peripheral::Peripheral(std::string name, std::uint32_t base, std::size_t size_words)
    : name_(std::move(name)), base_(base), size_words_(size_words) {
  if (base % 4 != 0) {
    throw std::invalid_argument(fmt::format("peripheral '{}' base 0x{:x} is not word aligned",
                                            name_, base));
  }
}

// ---------------------------------------------------------------------------
// RegisterFile

RegisterFile::RegisterFile(std::string name, std::uint32_t base, std::size_t size_words,
                           std::vector<std::uint32_t> init)
    : Peripheral(std::move(name), base, size_words), regs_(size_words, 0u) {
  if (init.size() > size_words) throw std::invalid_argument("register init exceeds block size");
  std::copy(init.begin(), init.end(), regs_.begin());
}

std::uint32_t RegisterFile::read(std::size_t word, Cycle) { return regs_.at(word); }

void RegisterFile::write(std::size_t word, std::uint32_t value, Cycle) { regs_.at(word) = value; }

// ---------------------------------------------------------------------------
// Gpio

Gpio::Gpio(std::string name, std::uint32_t base) : Peripheral(std::move(name), base, kNumRegs) {}

std::uint32_t Gpio::read(std::size_t word, Cycle) {
  // SET/CLR/TGL are write-only strobes and read as zero.
  return word == kOut ? pins_ : 0u;
}

void Gpio::write(std::size_t word, std::uint32_t value, Cycle) {
  switch (word) {
    case kOut: pins_ = value; break;
    case kSet: pins_ |= value; break;
    case kClr: pins_ &= ~value; break;
    case kTgl: pins_ ^= value; break;
    default: break;
  }
}

// ---------------------------------------------------------------------------
// Timer

Timer::Timer(std::string name, std::uint32_t base, std::uint32_t period, bool enabled,
             std::optional<std::size_t> event_line)
    : Peripheral(std::move(name), base, kNumRegs),
      enabled_(enabled),
      period_(period),
      event_line_(event_line) {}

std::uint32_t Timer::read(std::size_t word, Cycle) {
  switch (word) {
    case kCtrl: return enabled_ ? 1u : 0u;
    case kPeriod: return period_;
    case kCount: return count_;
    default: return 0u;
  }
}

void Timer::write(std::size_t word, std::uint32_t value, Cycle now) {
  switch (word) {
    case kCtrl: {
      const bool enable = (value & 1u) != 0;
      if (enable && !enabled_) {
        count_ = 0;
        enabled_at_ = now;
      }
      enabled_ = enable;
      break;
    }
    case kPeriod: period_ = value; break;
    case kCount: count_ = value; break;
    default: break;
  }
}

void Timer::tick(Cycle now, EventFabric& fabric) {
  if (!enabled_ || now <= enabled_at_ || period_ == 0) return;
  if (++count_ >= period_) {
    count_ = 0;
    ++pulses_;
    if (event_line_) fabric.pulse(*event_line_);
  }
}

bool Timer::has_pending_activity(Cycle) const {
  return enabled_ && period_ != 0 && event_line_.has_value();
}

// ---------------------------------------------------------------------------
// Sensor

std::vector<SamplePoint> random_schedule(std::uint64_t seed, std::size_t count, Cycle first,
                                         Cycle min_gap, Cycle max_gap, std::uint32_t lo,
                                         std::uint32_t hi) {
  if (min_gap == 0 || min_gap > max_gap || lo > hi) {
    throw std::invalid_argument("random schedule needs 0 < min_gap <= max_gap and lo <= hi");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Cycle> gap(min_gap, max_gap);
  std::uniform_int_distribution<std::uint32_t> value(lo, hi);
  std::vector<SamplePoint> out;
  out.reserve(count);
  Cycle at = first;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({at, value(rng)});
    at += gap(rng);
  }
  return out;
}

Sensor::Sensor(std::string name, std::uint32_t base, Mode mode, std::vector<SamplePoint> schedule,
               std::optional<std::size_t> event_line, std::optional<std::size_t> start_line)
    : Peripheral(std::move(name), base, kNumRegs),
      mode_(mode),
      schedule_(std::move(schedule)),
      event_line_(event_line),
      start_line_(start_line) {
  std::stable_sort(schedule_.begin(), schedule_.end(),
                   [](const SamplePoint& a, const SamplePoint& b) { return a.cycle < b.cycle; });
}

std::uint32_t Sensor::scheduled_value(Cycle now) const {
  auto it = std::upper_bound(schedule_.begin(), schedule_.end(), now,
                             [](Cycle c, const SamplePoint& p) { return c < p.cycle; });
  return it == schedule_.begin() ? 0u : std::prev(it)->value;
}

std::uint32_t Sensor::read(std::size_t word, Cycle now) {
  if (word != kSample) return 0u;
  return mode_ == Mode::kContinuous ? scheduled_value(now) : sample_;
}

void Sensor::write(std::size_t word, std::uint32_t value, Cycle now) {
  if (word == kStart && (value & 1u) != 0 && mode_ == Mode::kTriggered) latch(now);
}

void Sensor::tick(Cycle now, EventFabric& fabric) {
  if (mode_ == Mode::kContinuous) {
    const auto range = std::equal_range(
        schedule_.begin(), schedule_.end(), SamplePoint{now, 0},
        [](const SamplePoint& a, const SamplePoint& b) { return a.cycle < b.cycle; });
    const bool lands = range.first != range.second;
    if (lands) {
      sample_ = scheduled_value(now);
      if (event_line_) fabric.pulse(*event_line_);
    }
  } else if (pulse_pending_) {
    pulse_pending_ = false;
    if (event_line_) fabric.pulse(*event_line_);
  }
}

void Sensor::observe_outputs(const EventVector& outputs, Cycle now) {
  if (!start_line_) return;
  const bool level = outputs.test(*start_line_);
  if (level && !start_level_ && mode_ == Mode::kTriggered) latch(now);
  start_level_ = level;
}

bool Sensor::has_pending_activity(Cycle now) const {
  if (mode_ == Mode::kTriggered) return pulse_pending_;
  if (!event_line_) return false;
  return !schedule_.empty() && schedule_.back().cycle > now;
}

void Sensor::latch(Cycle now) {
  sample_ = scheduled_value(now);
  pulse_pending_ = true;
}

// ---------------------------------------------------------------------------
// Baseline CPU

BaselineOutcome baseline_handle_event(const BaselineCpuParams& params, Cycle event_cycle) {
  return {event_cycle + params.total_cycles(), params.memory_fetches_per_handler};
}

void BaselineCpu::raise(std::size_t source, Cycle event_cycle) {
  const Cycle start = std::max(event_cycle, free_at_);
  const auto outcome = baseline_handle_event(params_, start);
  queue_.push_back({source, event_cycle, outcome.completion});
  free_at_ = outcome.completion;
}

std::vector<BaselineCpu::Job> BaselineCpu::retire(Cycle now) {
  std::vector<Job> done;
  while (!queue_.empty() && queue_.front().completion <= now) {
    done.push_back(queue_.front());
    queue_.pop_front();
    shared_fetches_ += params_.memory_fetches_per_handler;
    ++handled_;
  }
  return done;
}

}  // namespace pels
