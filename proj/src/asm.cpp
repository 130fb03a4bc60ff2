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

#include "pels/asm.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

namespace pels {
namespace {

struct MnemonicInfo {
  std::string_view name;
  OpCode opcode;
  std::size_t arity;
};

constexpr MnemonicInfo kMnemonics[] = {
    {"nop", OpCode::kNop, 0},        {"write", OpCode::kWrite, 2},
    {"set", OpCode::kSet, 2},        {"clear", OpCode::kClear, 2},
    {"toggle", OpCode::kToggle, 2},  {"capture", OpCode::kCapture, 2},
    {"jif", OpCode::kJumpIf, 3},     {"loop", OpCode::kLoop, 2},
    {"wait", OpCode::kWait, 1},      {"action", OpCode::kAction, 2},
};

const MnemonicInfo* find_mnemonic(std::string_view name) {
  for (const auto& m : kMnemonics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_identifier(std::string_view s) {
  return !s.empty() && is_ident_start(s.front()) && std::all_of(s.begin(), s.end(), is_ident_char);
}

enum class LiteralStatus { kOk, kMalformed, kOverflow };

struct Literal {
  LiteralStatus status = LiteralStatus::kMalformed;
  std::uint32_t value = 0;
};

Literal parse_literal(std::string_view s) {
  unsigned base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    s.remove_prefix(2);
  }
  if (s.empty() || s.front() == '_') return {};
  std::uint64_t value = 0;
  bool overflow = false;
  for (char c : s) {
    if (c == '_') continue;
    unsigned digit = 0;
    if (c >= '0' && c <= '9') {
      digit = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      digit = static_cast<unsigned>(c - 'A' + 10);
    } else {
      return {};
    }
    if (digit >= base) return {};
    value = value * base + digit;
    if (value > std::numeric_limits<std::uint32_t>::max()) {
      overflow = true;
      value = std::numeric_limits<std::uint32_t>::max();
    }
  }
  if (overflow) return {LiteralStatus::kOverflow, 0};
  return {LiteralStatus::kOk, static_cast<std::uint32_t>(value)};
}

std::uint32_t require_literal(const SourceArg& arg) {
  const auto lit = parse_literal(arg.text);
  if (lit.status == LiteralStatus::kOverflow) {
    throw AsmError(ErrorCode::kLiteralRange, arg.loc,
                   fmt::format("literal '{}' does not fit in 32 bits", arg.text));
  }
  if (lit.status == LiteralStatus::kMalformed) {
    throw AsmError(ErrorCode::kSyntax, arg.loc, fmt::format("malformed literal '{}'", arg.text));
  }
  return lit.value;
}

std::optional<Condition> parse_condition(std::string_view s) {
  if (s == "eq") return Condition::kEq;
  if (s == "ne") return Condition::kNe;
  if (s == "ltu") return Condition::kLtu;
  if (s == "geu") return Condition::kGeu;
  return std::nullopt;
}

struct ActionSelector {
  std::uint32_t group = 0;
  ActionMode mode = ActionMode::kSetLevels;
};

// "grp<g>.<set|toggle>"
ActionSelector parse_action_selector(const SourceArg& arg) {
  std::string_view s = arg.text;
  const auto dot = s.find('.');
  if (!s.starts_with("grp") || dot == std::string_view::npos) {
    throw AsmError(ErrorCode::kSyntax, arg.loc,
                   fmt::format("expected grp<g>.<set|toggle>, got '{}'", arg.text));
  }
  const auto mode_text = s.substr(dot + 1);
  ActionSelector sel;
  if (mode_text == "set") {
    sel.mode = ActionMode::kSetLevels;
  } else if (mode_text == "toggle") {
    sel.mode = ActionMode::kToggle;
  } else {
    throw AsmError(ErrorCode::kSyntax, arg.loc,
                   fmt::format("unknown action mode '{}'", mode_text));
  }
  sel.group = require_literal({std::string(s.substr(3, dot - 3)), arg.loc});
  return sel;
}

bool is_target_arg(OpCode op, std::size_t index) {
  return (op == OpCode::kJumpIf && index == 2) || (op == OpCode::kLoop && index == 1);
}

// Token-level checks so every malformed statement is reported by parse().
void check_args(const MnemonicInfo& info, const SourceLine& line) {
  for (std::size_t i = 0; i < line.args.size(); ++i) {
    const auto& arg = line.args[i];
    if (is_target_arg(info.opcode, i)) {
      if (!is_identifier(arg.text)) require_literal(arg);
    } else if (info.opcode == OpCode::kJumpIf && i == 0) {
      if (!parse_condition(arg.text)) {
        throw AsmError(ErrorCode::kSyntax, arg.loc,
                       fmt::format("unknown condition '{}'", arg.text));
      }
    } else if (info.opcode == OpCode::kAction && i == 0) {
      parse_action_selector(arg);
    } else {
      require_literal(arg);
    }
  }
}

std::uint32_t require_width(const SourceArg& arg, std::uint32_t value, std::uint32_t limit,
                            std::string_view what) {
  if (value >= limit) {
    throw AsmError(ErrorCode::kOperandWidth, arg.loc,
                   fmt::format("{} {} does not fit its field (max {})", what, value, limit - 1));
  }
  return value;
}

struct LoopSpan {
  std::size_t index;
  std::size_t target;
};

// Index of the first loop whose body [target, index] holds another loop.
std::optional<std::size_t> find_nested_loop(const std::vector<LoopSpan>& loops) {
  for (const auto& outer : loops) {
    for (const auto& inner : loops) {
      if (inner.index != outer.index && inner.index >= outer.target &&
          inner.index <= outer.index) {
        return outer.index;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

AsmError::AsmError(ErrorCode code, SourceLocation loc, const std::string& message)
    : Error(code, fmt::format("{}:{}: {}: {}", loc.line, loc.column, error_code_name(code),
                              message)),
      loc_(loc) {}

SourceProgram parse(std::string_view text) {
  SourceProgram prog;
  std::set<std::string, std::less<>> seen_labels;
  std::vector<std::pair<std::string, SourceLocation>> pending;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    std::size_t i = 0;
    auto skip_space = [&] {
      while (i < raw.size() && is_space(raw[i])) ++i;
    };
    auto loc_at = [&](std::size_t col) { return SourceLocation{line_no, static_cast<int>(col) + 1}; };

    // Leading labels, then an optional mnemonic.
    std::string_view word;
    std::size_t word_col = 0;
    while (true) {
      skip_space();
      if (i >= raw.size()) break;
      if (!is_ident_start(raw[i])) {
        throw AsmError(ErrorCode::kSyntax, loc_at(i),
                       fmt::format("unexpected character '{}'", raw[i]));
      }
      word_col = i;
      while (i < raw.size() && is_ident_char(raw[i])) ++i;
      word = raw.substr(word_col, i - word_col);
      if (i < raw.size() && raw[i] == ':') {
        ++i;
        if (!seen_labels.emplace(word).second) {
          throw AsmError(ErrorCode::kDuplicateLabel, loc_at(word_col),
                         fmt::format("label '{}' defined twice", word));
        }
        pending.emplace_back(std::string(word), loc_at(word_col));
        word = {};
        continue;
      }
      break;
    }
    if (word.empty()) continue;

    const auto* info = find_mnemonic(word);
    if (info == nullptr) {
      throw AsmError(ErrorCode::kUnknownMnemonic, loc_at(word_col),
                     fmt::format("unknown mnemonic '{}'", word));
    }
    if (i < raw.size() && !is_space(raw[i])) {
      throw AsmError(ErrorCode::kSyntax, loc_at(i),
                     fmt::format("unexpected character '{}' after mnemonic", raw[i]));
    }

    SourceLine line;
    line.mnemonic = std::string(word);
    line.loc = loc_at(word_col);
    skip_space();
    if (i < raw.size()) {
      while (true) {
        const auto comma = raw.find(',', i);
        const auto end = comma == std::string_view::npos ? raw.size() : comma;
        std::size_t b = i;
        std::size_t e = end;
        while (b < e && is_space(raw[b])) ++b;
        while (e > b && is_space(raw[e - 1])) --e;
        if (b == e) throw AsmError(ErrorCode::kSyntax, loc_at(b), "empty operand");
        const auto tok = raw.substr(b, e - b);
        if (std::any_of(tok.begin(), tok.end(), is_space)) {
          throw AsmError(ErrorCode::kSyntax, loc_at(b),
                         fmt::format("operands must be separated by ',' in '{}'", tok));
        }
        line.args.push_back({std::string(tok), loc_at(b)});
        if (comma == std::string_view::npos) break;
        i = comma + 1;
      }
    }
    if (line.args.size() != info->arity) {
      throw AsmError(ErrorCode::kArity, line.loc,
                     fmt::format("'{}' takes {} operand(s), got {}", info->name, info->arity,
                                 line.args.size()));
    }
    check_args(*info, line);

    for (auto& [name, loc] : pending) line.labels.push_back(std::move(name));
    pending.clear();
    prog.lines.push_back(std::move(line));
  }
  prog.trailing_labels = std::move(pending);
  return prog;
}

Program assemble(const SourceProgram& src) {
  if (src.lines.size() > kMaxProgramLength) {
    throw AsmError(ErrorCode::kCapacityExceeded, src.lines[kMaxProgramLength].loc,
                   fmt::format("program has {} commands, limit is {}", src.lines.size(),
                               kMaxProgramLength));
  }

  std::map<std::string, std::size_t, std::less<>> labels;
  for (std::size_t i = 0; i < src.lines.size(); ++i) {
    for (const auto& name : src.lines[i].labels) labels.emplace(name, i);
  }
  for (const auto& [name, loc] : src.trailing_labels) labels.emplace(name, src.lines.size());

  const auto length = src.lines.size();
  auto resolve_target = [&](const SourceArg& arg) -> std::size_t {
    std::size_t target = 0;
    if (is_identifier(arg.text)) {
      const auto it = labels.find(arg.text);
      if (it == labels.end()) {
        throw AsmError(ErrorCode::kUndefinedLabel, arg.loc,
                       fmt::format("label '{}' is not defined", arg.text));
      }
      target = it->second;
    } else {
      target = require_literal(arg);
    }
    if (target >= length) {
      throw AsmError(ErrorCode::kTargetOutOfRange, arg.loc,
                     fmt::format("target {} is past the last command ({})", target, length));
    }
    return target;
  };

  Program prog;
  std::vector<LoopSpan> loops;
  std::vector<SourceLocation> locs;
  for (std::size_t index = 0; index < length; ++index) {
    const auto& line = src.lines[index];
    const auto* info = find_mnemonic(line.mnemonic);
    if (info == nullptr) {
      throw AsmError(ErrorCode::kUnknownMnemonic, line.loc,
                     fmt::format("unknown mnemonic '{}'", line.mnemonic));
    }
    if (line.args.size() != info->arity) {
      throw AsmError(ErrorCode::kArity, line.loc, "operand count mismatch");
    }
    const auto& a = line.args;
    Command cmd;
    switch (info->opcode) {
      case OpCode::kNop:
        break;
      case OpCode::kWrite:
      case OpCode::kSet:
      case OpCode::kClear:
      case OpCode::kToggle:
      case OpCode::kCapture:
        cmd = Command(info->opcode, require_width(a[0], require_literal(a[0]), kField12Limit,
                                                  "register offset"),
                      require_literal(a[1]));
        break;
      case OpCode::kJumpIf: {
        const auto cond = parse_condition(a[0].text);
        if (!cond) throw AsmError(ErrorCode::kSyntax, a[0].loc, "unknown condition");
        cmd = Command::jump_if(*cond, require_literal(a[1]),
                               static_cast<std::uint32_t>(resolve_target(a[2])));
        break;
      }
      case OpCode::kLoop: {
        const auto target = resolve_target(a[1]);
        if (target > index) {
          throw AsmError(ErrorCode::kTargetOutOfRange, a[1].loc,
                         fmt::format("loop target {} must not follow the loop at {}", target,
                                     index));
        }
        loops.push_back({index, target});
        cmd = Command::loop(require_literal(a[0]), static_cast<std::uint32_t>(target));
        break;
      }
      case OpCode::kWait:
        cmd = Command::wait(require_literal(a[0]));
        break;
      case OpCode::kAction: {
        const auto sel = parse_action_selector(a[0]);
        require_width(a[0], sel.group, 0x100, "event group");
        cmd = Command::action(sel.group, sel.mode, require_literal(a[1]));
        break;
      }
    }
    prog.commands.push_back(cmd);
    locs.push_back(line.loc);
  }

  if (const auto nested = find_nested_loop(loops)) {
    throw AsmError(ErrorCode::kNestedLoop, locs[*nested],
                   fmt::format("loop at {} contains another loop in its body", *nested));
  }
  validate_program(prog);
  return prog;
}

Program assemble_text(std::string_view text) { return assemble(parse(text)); }

std::string disassemble(const Program& prog) {
  std::set<std::uint32_t> targets;
  for (const auto& cmd : prog.commands) {
    if (cmd.opcode() == OpCode::kJumpIf || cmd.opcode() == OpCode::kLoop) {
      targets.insert(cmd.target());
    }
  }

  std::string out;
  for (std::size_t i = 0; i < prog.commands.size(); ++i) {
    const auto& cmd = prog.commands[i];
    if (i != 0) out += '\n';
    if (targets.contains(static_cast<std::uint32_t>(i))) out += fmt::format("L{}: ", i);
    const auto name = mnemonic(cmd.opcode());
    switch (cmd.opcode()) {
      case OpCode::kNop:
        out += name;
        break;
      case OpCode::kWrite:
      case OpCode::kSet:
      case OpCode::kClear:
      case OpCode::kToggle:
      case OpCode::kCapture:
        out += fmt::format("{} 0x{:x}, 0x{:x}", name, cmd.offset(), cmd.operand());
        break;
      case OpCode::kJumpIf:
        out += fmt::format("{} {}, 0x{:x}, L{}", name, condition_name(cmd.condition()),
                           cmd.operand(), cmd.target());
        break;
      case OpCode::kLoop:
        out += fmt::format("{} {}, L{}", name, cmd.operand(), cmd.target());
        break;
      case OpCode::kWait:
        out += fmt::format("{} {}", name, cmd.operand());
        break;
      case OpCode::kAction:
        out += fmt::format("{} grp{}.{}, 0x{:x}", name, cmd.group(),
                           cmd.action_mode() == ActionMode::kToggle ? "toggle" : "set",
                           cmd.operand());
        break;
    }
  }
  return out;
}

void validate_program(const Program& prog) {
  const auto length = prog.commands.size();
  if (length > kMaxProgramLength) {
    throw Error(ErrorCode::kCapacityExceeded,
                fmt::format("program has {} commands, limit is {}", length, kMaxProgramLength));
  }
  std::vector<LoopSpan> loops;
  for (std::size_t i = 0; i < length; ++i) {
    const auto& cmd = prog.commands[i];
    auto fail = [&](ErrorCode code, std::string_view what) {
      throw Error(code, fmt::format("command {} ({}): {}", i, mnemonic(cmd.opcode()), what));
    };
    switch (cmd.opcode()) {
      case OpCode::kJumpIf:
        if (cmd.selector() > static_cast<std::uint32_t>(Condition::kGeu)) {
          fail(ErrorCode::kInvalidField, "undefined condition code");
        }
        if (cmd.target() >= length) fail(ErrorCode::kTargetOutOfRange, "jump target out of range");
        break;
      case OpCode::kLoop:
        if (cmd.selector() != 0) fail(ErrorCode::kInvalidField, "reserved bits set");
        if (cmd.target() > i) fail(ErrorCode::kTargetOutOfRange, "loop target after loop");
        loops.push_back({i, cmd.target()});
        break;
      case OpCode::kAction:
        if (cmd.selector() > static_cast<std::uint32_t>(ActionMode::kToggle)) {
          fail(ErrorCode::kInvalidField, "undefined action mode");
        }
        break;
      case OpCode::kWait:
        if (cmd.field12() != 0) fail(ErrorCode::kInvalidField, "field must be zero");
        break;
      default:
        break;
    }
  }
  if (const auto nested = find_nested_loop(loops)) {
    throw Error(ErrorCode::kNestedLoop,
                fmt::format("loop at {} contains another loop in its body", *nested));
  }
}

void validate_against_capacity(const Program& prog, std::size_t scm_lines) {
  if (prog.size() > scm_lines) {
    throw Error(ErrorCode::kCapacityExceeded,
                fmt::format("program of {} commands exceeds SCM capacity {}", prog.size(),
                            scm_lines));
  }
  for (const auto& cmd : prog.commands) {
    if ((cmd.opcode() == OpCode::kJumpIf || cmd.opcode() == OpCode::kLoop) &&
        cmd.target() >= scm_lines) {
      throw Error(ErrorCode::kCapacityExceeded,
                  fmt::format("target {} outside SCM capacity {}", cmd.target(), scm_lines));
    }
  }
}

}  // namespace pels
