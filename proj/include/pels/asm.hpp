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

#ifndef PELS_ASM_HPP_
#define PELS_ASM_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pels/error.hpp"
#include "pels/isa.hpp"

namespace pels {

// Upper bound imposed by the 8-bit jump/loop target encoding.
inline constexpr std::size_t kMaxProgramLength = 256;

struct SourceLocation {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

class AsmError : public Error {
 public:
  AsmError(ErrorCode code, SourceLocation loc, const std::string& message);

  const SourceLocation& location() const { return loc_; }

 private:
  SourceLocation loc_;
};

struct SourceArg {
  std::string text;
  SourceLocation loc;
};

struct SourceLine {
  std::string mnemonic;
  std::vector<SourceArg> args;
  std::vector<std::string> labels;  // labels naming this statement
  SourceLocation loc;
};

struct SourceProgram {
  std::vector<SourceLine> lines;
  // Labels after the last statement; they name index == lines.size().
  std::vector<std::pair<std::string, SourceLocation>> trailing_labels;
};

struct Program {
  std::vector<Command> commands;

  std::size_t size() const { return commands.size(); }
  bool empty() const { return commands.empty(); }
  friend bool operator==(const Program&, const Program&) = default;
};

// Grammar, one statement per line, '#' starts a comment:
//
//   [label:] write   <offset>, <value>
//   [label:] set     <offset>, <mask>        (also clear, toggle, capture)
//   [label:] jif     <eq|ne|ltu|geu>, <operand>, <label|index>
//   [label:] loop    <count>, <label|index>
//   [label:] wait    <cycles>
//   [label:] action  grp<g>.<set|toggle>, <bits>
//   [label:] nop
//
// Literals are decimal, 0x hex or 0b binary, '_' separators allowed.
SourceProgram parse(std::string_view text);

Program assemble(const SourceProgram& src);

// parse + assemble.
Program assemble_text(std::string_view text);

// Emits one statement per line with L<index> labels on jump targets.
std::string disassemble(const Program& prog);

// Structural checks shared by the assembler and image loaders: target ranges,
// reserved sub-fields, backward-only loops, loop non-nesting.
void validate_program(const Program& prog);

// Throws Error(kCapacityExceeded) when the program does not fit scm_lines.
void validate_against_capacity(const Program& prog, std::size_t scm_lines);

}  // namespace pels

#endif  // PELS_ASM_HPP_
