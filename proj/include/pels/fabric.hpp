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

#ifndef PELS_FABRIC_HPP_
#define PELS_FABRIC_HPP_

#include <cstddef>
#include <vector>

#include "pels/event_vector.hpp"

namespace pels {

struct LoopbackRoute {
  std::size_t output_line = 0;
  std::size_t input_line = 0;
};

// Single-wire event lines between peripherals and links.
//
// Input lines carry two kinds of signal: levels (stimulus-driven or looped
// back from outputs) that persist until changed, and one-cycle strobes that
// peripherals pulse. Every link sees the same input vector in the same cycle.
// Looped-back outputs are registered: an output driven in cycle t shows up on
// its input line in cycle t+1.
class EventFabric {
 public:
  EventFabric(std::size_t input_width, std::size_t output_width,
              std::vector<LoopbackRoute> loopback = {});

  std::size_t input_width() const { return driven_.width(); }
  std::size_t output_width() const { return outputs_.width(); }
  const std::vector<LoopbackRoute>& loopback() const { return loopback_routes_; }

  // Registers loopback from the outputs latched at the end of the previous
  // cycle and clears last cycle's strobes.
  void begin_cycle();
  // Latches the output vector for loopback and change detection.
  void end_cycle();

  void drive(std::size_t line, bool level) { driven_.set(line, level); }
  void pulse(std::size_t line) { strobes_.set(line); }

  EventVector levels() const { return driven_ | looped_; }
  const EventVector& strobes() const { return strobes_; }
  EventVector inputs() const { return levels() | strobes_; }

  EventVector& outputs() { return outputs_; }
  const EventVector& outputs() const { return outputs_; }
  const EventVector& latched_outputs() const { return latched_; }

  // True when next cycle's looped-back inputs differ from this cycle's.
  bool loopback_changing() const;

 private:
  EventVector looped_from(const EventVector& outputs) const;

  std::vector<LoopbackRoute> loopback_routes_;
  EventVector driven_;
  EventVector looped_;
  EventVector strobes_;
  EventVector outputs_;
  EventVector latched_;
};

}  // namespace pels

#endif  // PELS_FABRIC_HPP_
