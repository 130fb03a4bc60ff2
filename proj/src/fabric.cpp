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

#include "pels/fabric.hpp"

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {

EventFabric::EventFabric(std::size_t input_width, std::size_t output_width,
                         std::vector<LoopbackRoute> loopback)
    : loopback_routes_(std::move(loopback)),
      driven_(input_width),
      looped_(input_width),
      strobes_(input_width),
      outputs_(output_width),
      latched_(output_width) {
  for (const auto& r : loopback_routes_) {
    if (r.output_line >= output_width || r.input_line >= input_width) {
      throw Error(ErrorCode::kConfig,
                  fmt::format("loopback {} -> {} outside fabric ({} outputs, {} inputs)",
                              r.output_line, r.input_line, output_width, input_width));
    }
  }
}

void EventFabric::begin_cycle() {
  looped_ = looped_from(latched_);
  strobes_.clear_all();
}

void EventFabric::end_cycle() { latched_ = outputs_; }

bool EventFabric::loopback_changing() const { return looped_from(outputs_) != looped_; }

EventVector EventFabric::looped_from(const EventVector& outputs) const {
  EventVector v(driven_.width());
  for (const auto& r : loopback_routes_) {
    if (outputs.test(r.output_line)) v.set(r.input_line);
  }
  return v;
}

}  // namespace pels
