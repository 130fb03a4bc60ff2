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

#include "pels/isa.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {

std::string_view mnemonic(OpCode op) {
  switch (op) {
    case OpCode::kNop: return "nop";
    case OpCode::kWrite: return "write";
    case OpCode::kSet: return "set";
    case OpCode::kClear: return "clear";
    case OpCode::kToggle: return "toggle";
    case OpCode::kCapture: return "capture";
    case OpCode::kJumpIf: return "jif";
    case OpCode::kLoop: return "loop";
    case OpCode::kWait: return "wait";
    case OpCode::kAction: return "action";
  }
  return "?";
}

std::string_view condition_name(Condition cond) {
  switch (cond) {
    case Condition::kEq: return "eq";
    case Condition::kNe: return "ne";
    case Condition::kLtu: return "ltu";
    case Condition::kGeu: return "geu";
  }
  return "?";
}

std::optional<OpCode> opcode_from_nibble(unsigned nibble) {
  if (nibble <= static_cast<unsigned>(OpCode::kAction)) return static_cast<OpCode>(nibble);
  return std::nullopt;
}

Command::Command(OpCode opcode, std::uint32_t field12, std::uint32_t operand)
    : opcode_(opcode), field12_(field12), operand_(operand) {
  if (field12 >= kField12Limit) {
    throw std::out_of_range(fmt::format("field12 0x{:x} exceeds 12 bits", field12));
  }
}

Command Command::write(std::uint32_t offset, std::uint32_t value) {
  return {OpCode::kWrite, offset, value};
}
Command Command::set(std::uint32_t offset, std::uint32_t mask) {
  return {OpCode::kSet, offset, mask};
}
Command Command::clear(std::uint32_t offset, std::uint32_t mask) {
  return {OpCode::kClear, offset, mask};
}
Command Command::toggle(std::uint32_t offset, std::uint32_t mask) {
  return {OpCode::kToggle, offset, mask};
}
Command Command::capture(std::uint32_t offset, std::uint32_t mask) {
  return {OpCode::kCapture, offset, mask};
}

Command Command::jump_if(Condition cond, std::uint32_t operand, std::uint32_t target) {
  if (target > 0xFF) throw std::out_of_range("jump target exceeds 8 bits");
  return {OpCode::kJumpIf, (static_cast<std::uint32_t>(cond) << 8) | target, operand};
}

Command Command::loop(std::uint32_t count, std::uint32_t target) {
  if (target > 0xFF) throw std::out_of_range("loop target exceeds 8 bits");
  return {OpCode::kLoop, target, count};
}

Command Command::wait(std::uint32_t cycles) { return {OpCode::kWait, 0, cycles}; }

Command Command::action(std::uint32_t group, ActionMode mode, std::uint32_t bits) {
  if (group > 0xFF) throw std::out_of_range("event group exceeds 8 bits");
  return {OpCode::kAction, (static_cast<std::uint32_t>(mode) << 8) | group, bits};
}

EncodedCommand encode(const Command& cmd) {
  return {(static_cast<std::uint64_t>(cmd.opcode()) << 44) |
          (static_cast<std::uint64_t>(cmd.field12()) << 32) | cmd.operand()};
}

Command decode(EncodedCommand word) {
  const auto nibble = static_cast<unsigned>((word.bits >> 44) & 0xFu);
  const auto field12 = static_cast<std::uint32_t>((word.bits >> 32) & 0xFFFu);
  const auto operand = static_cast<std::uint32_t>(word.bits & 0xFFFF'FFFFu);
  const auto op = opcode_from_nibble(nibble);
  if (!op || (*op == OpCode::kNop && (field12 != 0 || operand != 0))) {
    throw Error(ErrorCode::kUndefinedOpcode, fmt::format("undefined opcode 0x{:X}", nibble));
  }
  return {*op, field12, operand};
}

std::vector<std::uint8_t> pack_image(std::span<const Command> commands) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(commands.size() * kCommandBytes);
  for (const auto& cmd : commands) {
    const auto bits = encode(cmd).bits;
    for (int shift = 40; shift >= 0; shift -= 8) {
      bytes.push_back(static_cast<std::uint8_t>(bits >> shift));
    }
  }
  return bytes;
}

std::vector<Command> unpack_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % kCommandBytes != 0) {
    throw Error(ErrorCode::kSyntax,
                fmt::format("image size {} is not a multiple of {} bytes", bytes.size(),
                            kCommandBytes));
  }
  std::vector<Command> commands;
  commands.reserve(bytes.size() / kCommandBytes);
  for (std::size_t i = 0; i < bytes.size(); i += kCommandBytes) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < kCommandBytes; ++j) bits = (bits << 8) | bytes[i + j];
    commands.push_back(decode({bits}));
  }
  return commands;
}

}  // namespace pels
