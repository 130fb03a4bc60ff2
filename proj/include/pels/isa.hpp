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

#ifndef PELS_ISA_HPP_
#define PELS_ISA_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pels {

// Command word layout (48 bits): [47:44] opcode, [43:32] field12, [31:0] operand.
inline constexpr unsigned kCommandBits = 48;
inline constexpr unsigned kCommandBytes = kCommandBits / 8;
inline constexpr std::uint32_t kField12Limit = 1u << 12;

enum class OpCode : std::uint8_t {
  kNop = 0x0,  // reserved: blank SCM line / end of program
  kWrite = 0x1,
  kSet = 0x2,
  kClear = 0x3,
  kToggle = 0x4,
  kCapture = 0x5,
  kJumpIf = 0x6,
  kLoop = 0x7,
  kWait = 0x8,
  kAction = 0x9,
};

// JUMP_IF condition in field12[11:8].
enum class Condition : std::uint8_t { kEq = 0, kNe = 1, kLtu = 2, kGeu = 3 };

// ACTION mode in field12[11:8].
enum class ActionMode : std::uint8_t { kSetLevels = 0, kToggle = 1 };

std::string_view mnemonic(OpCode op);
std::string_view condition_name(Condition cond);
std::optional<OpCode> opcode_from_nibble(unsigned nibble);

// True for the opcodes whose field12 is a word offset from the link base.
constexpr bool addresses_register(OpCode op) {
  return op == OpCode::kWrite || op == OpCode::kSet || op == OpCode::kClear ||
         op == OpCode::kToggle || op == OpCode::kCapture;
}

constexpr bool is_read_modify_write(OpCode op) {
  return op == OpCode::kSet || op == OpCode::kClear || op == OpCode::kToggle;
}

// One decoded microcode command. field12 is checked on construction so a
// Command value is always encodable.
class Command {
 public:
  constexpr Command() = default;
  Command(OpCode opcode, std::uint32_t field12, std::uint32_t operand);

  static Command nop() { return Command(); }
  static Command write(std::uint32_t offset, std::uint32_t value);
  static Command set(std::uint32_t offset, std::uint32_t mask);
  static Command clear(std::uint32_t offset, std::uint32_t mask);
  static Command toggle(std::uint32_t offset, std::uint32_t mask);
  static Command capture(std::uint32_t offset, std::uint32_t mask);
  static Command jump_if(Condition cond, std::uint32_t operand, std::uint32_t target);
  static Command loop(std::uint32_t count, std::uint32_t target);
  static Command wait(std::uint32_t cycles);
  static Command action(std::uint32_t group, ActionMode mode, std::uint32_t bits);

  OpCode opcode() const { return opcode_; }
  std::uint32_t field12() const { return field12_; }
  std::uint32_t operand() const { return operand_; }

  // Sub-field views. Meaningful only for the matching opcode.
  std::uint32_t offset() const { return field12_; }
  std::uint32_t target() const { return field12_ & 0xFFu; }
  std::uint32_t selector() const { return (field12_ >> 8) & 0xFu; }
  Condition condition() const { return static_cast<Condition>(selector()); }
  ActionMode action_mode() const { return static_cast<ActionMode>(selector()); }
  std::uint32_t group() const { return field12_ & 0xFFu; }

  friend bool operator==(const Command&, const Command&) = default;

 private:
  OpCode opcode_ = OpCode::kNop;
  std::uint32_t field12_ = 0;
  std::uint32_t operand_ = 0;
};

struct EncodedCommand {
  std::uint64_t bits = 0;
  friend auto operator<=>(const EncodedCommand&, const EncodedCommand&) = default;
};

EncodedCommand encode(const Command& cmd);

// Throws Error(kUndefinedOpcode) for nibbles 0xA..0xF, and for a 0x0 nibble
// with non-zero payload (the sentinel is the all-zero word).
Command decode(EncodedCommand word);

// Program images are big-endian 48-bit words, 6 bytes per command, no header.
std::vector<std::uint8_t> pack_image(std::span<const Command> commands);
std::vector<Command> unpack_image(std::span<const std::uint8_t> bytes);

}  // namespace pels

#endif  // PELS_ISA_HPP_
