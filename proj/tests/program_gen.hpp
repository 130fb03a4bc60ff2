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

// Random generators shared by the property tests.

#ifndef PELS_TESTS_PROGRAM_GEN_HPP_
#define PELS_TESTS_PROGRAM_GEN_HPP_

#include <algorithm>
#include <cstdint>
#include <random>

#include "pels/asm.hpp"
#include "pels/isa.hpp"

namespace pels::testing {

inline std::uint32_t random_u32(std::mt19937_64& rng) {
  // Bias towards boundary values now and then.
  switch (rng() % 8) {
    case 0: return 0;
    case 1: return 0xFFFF'FFFFu;
    case 2: return static_cast<std::uint32_t>(rng() % 16);
    default: return static_cast<std::uint32_t>(rng());
  }
}

inline Command random_command(std::mt19937_64& rng) {
  const auto op = static_cast<OpCode>(1 + rng() % 9);
  return Command(op, static_cast<std::uint32_t>(rng() % 4096), random_u32(rng));
}

// A program that passes validate_program: jump targets in range, loop
// targets at or before the loop and no loop body containing another loop.
inline Program random_valid_program(std::mt19937_64& rng, std::size_t max_len = 32) {
  const std::size_t len = rng() % (max_len + 1);
  Program p;
  std::size_t loop_floor = 0;  // first index a new loop body may start at
  for (std::size_t i = 0; i < len; ++i) {
    const auto u = [&](std::uint64_t n) { return static_cast<std::uint32_t>(rng() % n); };
    switch (rng() % 10) {
      case 0: p.commands.push_back(Command::write(u(4096), random_u32(rng))); break;
      case 1: p.commands.push_back(Command::set(u(4096), random_u32(rng))); break;
      case 2: p.commands.push_back(Command::clear(u(4096), random_u32(rng))); break;
      case 3: p.commands.push_back(Command::toggle(u(4096), random_u32(rng))); break;
      case 4: p.commands.push_back(Command::capture(u(4096), random_u32(rng))); break;
      case 5:
        p.commands.push_back(Command::jump_if(static_cast<Condition>(u(4)), random_u32(rng),
                                              u(static_cast<std::uint32_t>(len))));
        break;
      case 6: {
        const auto lo = static_cast<std::uint32_t>(loop_floor);
        const auto target = lo + u(static_cast<std::uint32_t>(i) - lo + 1);
        p.commands.push_back(Command::loop(random_u32(rng), target));
        loop_floor = i + 1;
        break;
      }
      case 7: p.commands.push_back(Command::wait(random_u32(rng))); break;
      case 8:
        p.commands.push_back(Command::action(u(256), static_cast<ActionMode>(u(2)),
                                             random_u32(rng)));
        break;
      default:
        // An occasional blank line inside the program is still a valid image.
        if (rng() % 8 == 0) {
          p.commands.push_back(Command::nop());
        } else {
          p.commands.push_back(Command::wait(u(100)));
        }
        break;
    }
  }
  return p;
}

}  // namespace pels::testing

#endif  // PELS_TESTS_PROGRAM_GEN_HPP_
