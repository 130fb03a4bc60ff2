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

#include "pels/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kConfig, fmt::format("{}: {}", where.empty() ? "/" : where, what));
}

std::uint64_t parse_number_text(const std::string& text, const std::string& where) {
  std::string digits;
  std::copy_if(text.begin(), text.end(), std::back_inserter(digits),
               [](char c) { return c != '_'; });
  int base = 10;
  std::size_t skip = 0;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    skip = 2;
  } else if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'b' || digits[1] == 'B')) {
    base = 2;
    skip = 2;
  }
  try {
    std::size_t used = 0;
    const auto value = std::stoull(digits.substr(skip), &used, base);
    if (used != digits.size() - skip) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    config_error(where, fmt::format("'{}' is not a number", text));
  }
}

std::uint64_t as_u64(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0) config_error(where, "must not be negative");
    return static_cast<std::uint64_t>(s);
  }
  if (v.is_string()) return parse_number_text(v.get<std::string>(), where);
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  config_error(where, "expected an integer or numeric string");
}

std::uint32_t as_u32(const json& v, const std::string& where) {
  const auto x = as_u64(v, where);
  if (x > std::numeric_limits<std::uint32_t>::max()) config_error(where, "exceeds 32 bits");
  return static_cast<std::uint32_t>(x);
}

bool as_bool(const json& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>();
  return as_u64(v, where) != 0;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) config_error(where, "expected a string");
  return v.get<std::string>();
}

// Field accessor that carries its JSON pointer for diagnostics.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const json& value() const { return value_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const { return value_.is_object() && value_.contains(key); }
  Node at(const char* key) const { return {value_.at(key), path_ + "/" + key}; }
  Node at(std::size_t i) const { return {value_.at(i), fmt::format("{}/{}", path_, i)}; }
  std::size_t size() const { return value_.size(); }

  std::uint64_t u64() const { return as_u64(value_, path_); }
  std::uint32_t u32() const { return as_u32(value_, path_); }
  bool boolean() const { return as_bool(value_, path_); }
  std::string str() const { return as_string(value_, path_); }

  template <typename T, typename F>
  T get_or(const char* key, T fallback, F convert) const {
    return has(key) ? convert(at(key)) : fallback;
  }

  void require_object() const {
    if (!value_.is_object()) config_error(path_, "expected an object");
  }
  void require_array() const {
    if (!value_.is_array()) config_error(path_, "expected an array");
  }

 private:
  const json& value_;
  std::string path_;
};

std::optional<std::size_t> optional_line(const Node& n, const char* key) {
  if (!n.has(key) || n.at(key).value().is_null()) return std::nullopt;
  return static_cast<std::size_t>(n.at(key).u64());
}

std::string read_file(const std::filesystem::path& path, const std::string& where) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error(where, fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Program load_link_program(const Node& n, const std::filesystem::path& base_dir) {
  const int sources = n.has("program") + n.has("program_file") + n.has("program_image");
  if (sources > 1) {
    config_error(n.path(), "give only one of program, program_file, program_image");
  }
  try {
    if (n.has("program")) return assemble_text(n.at("program").str());
    if (n.has("program_file")) {
      const auto path = base_dir / n.at("program_file").str();
      return assemble_text(read_file(path, n.at("program_file").path()));
    }
    if (n.has("program_image")) {
      const auto path = base_dir / n.at("program_image").str();
      const auto bytes = read_file(path, n.at("program_image").path());
      Program prog{unpack_image(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()),
                                          bytes.size()))};
      validate_program(prog);
      return prog;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    const char* key = n.has("program") ? "program"
                      : n.has("program_file") ? "program_file"
                                              : "program_image";
    config_error(n.path() + "/" + key, e.what());
  }
  return {};
}

EventVector parse_mask(const Node& n, std::size_t width) {
  try {
    if (n.value().is_array()) {
      std::vector<std::size_t> lines;
      for (std::size_t i = 0; i < n.size(); ++i) lines.push_back(n.at(i).u64());
      return EventVector::from_lines(lines, width);
    }
    if (n.value().is_string()) return EventVector::from_hex(n.str(), width);
    if (n.value().is_number()) {
      return EventVector::from_hex(fmt::format("{:x}", n.u64()), width);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    config_error(n.path(), e.what());
  }
  config_error(n.path(), "expected a list of lines or a hex string");
}

std::vector<SamplePoint> parse_schedule(const Node& n) {
  std::vector<SamplePoint> out;
  if (n.value().is_object()) {
    if (!n.has("random")) config_error(n.path(), "expected a list or {\"random\": {...}}");
    const auto r = n.at("random");
    try {
      return random_schedule(
          r.get_or("seed", std::uint64_t{1}, [](const Node& x) { return x.u64(); }),
          r.get_or("count", std::size_t{16}, [](const Node& x) { return x.u64(); }),
          r.get_or("first", Cycle{0}, [](const Node& x) { return x.u64(); }),
          r.get_or("min_gap", Cycle{1}, [](const Node& x) { return x.u64(); }),
          r.get_or("max_gap", Cycle{16}, [](const Node& x) { return x.u64(); }),
          r.get_or("min", std::uint32_t{0}, [](const Node& x) { return x.u32(); }),
          r.get_or("max", std::uint32_t{0xFFFF}, [](const Node& x) { return x.u32(); }));
    } catch (const std::invalid_argument& e) {
      config_error(r.path(), e.what());
    }
  }
  n.require_array();
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto e = n.at(i);
    if (e.value().is_array() && e.size() == 2) {
      out.push_back({e.at(std::size_t{0}).u64(), e.at(std::size_t{1}).u32()});
    } else if (e.value().is_object()) {
      out.push_back({e.at("cycle").u64(), e.at("value").u32()});
    } else {
      config_error(e.path(), "expected [cycle, value] or {cycle, value}");
    }
  }
  return out;
}

PeripheralSpec parse_peripheral(const Node& n) {
  n.require_object();
  PeripheralSpec spec;
  if (!n.has("type")) config_error(n.path(), "missing 'type'");
  if (!n.has("base")) config_error(n.path(), "missing 'base'");
  const auto type = n.at("type").str();
  spec.name = n.get_or("name", type, [](const Node& x) { return x.str(); });
  spec.base = n.at("base").u32();
  spec.segment = n.get_or("segment", std::size_t{0}, [](const Node& x) { return x.u64(); });
  if (spec.base % 4 != 0) config_error(n.path() + "/base", "not word aligned");

  if (type == "gpio") {
    spec.device = GpioSpec{};
  } else if (type == "timer") {
    TimerSpec t;
    t.period = n.get_or("period", std::uint32_t{0}, [](const Node& x) { return x.u32(); });
    t.enabled = n.get_or("enabled", true, [](const Node& x) { return x.boolean(); });
    t.event_line = optional_line(n, "event_line");
    spec.device = t;
  } else if (type == "sensor") {
    SensorSpec s;
    const auto mode = n.get_or("mode", std::string("continuous"), [](const Node& x) { return x.str(); });
    if (mode == "continuous") {
      s.mode = Sensor::Mode::kContinuous;
    } else if (mode == "triggered") {
      s.mode = Sensor::Mode::kTriggered;
    } else {
      config_error(n.path() + "/mode", fmt::format("unknown sensor mode '{}'", mode));
    }
    if (n.has("schedule")) s.schedule = parse_schedule(n.at("schedule"));
    s.event_line = optional_line(n, "event_line");
    s.start_line = optional_line(n, "start_line");
    spec.device = std::move(s);
  } else if (type == "regs") {
    RegisterFileSpec r;
    r.size_words = n.get_or("size_words", std::size_t{1}, [](const Node& x) { return x.u64(); });
    if (r.size_words == 0) config_error(n.path() + "/size_words", "must be positive");
    if (n.has("init")) {
      const auto init = n.at("init");
      init.require_array();
      for (std::size_t i = 0; i < init.size(); ++i) r.init.push_back(init.at(i).u32());
      if (r.init.size() > r.size_words) config_error(init.path(), "more values than registers");
    }
    spec.device = std::move(r);
  } else {
    config_error(n.path() + "/type", fmt::format("unknown peripheral type '{}'", type));
  }
  return spec;
}

std::size_t peripheral_words(const PeripheralSpec& p) {
  return std::visit(
      [](const auto& d) -> std::size_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, GpioSpec>) return Gpio::kNumRegs;
        if constexpr (std::is_same_v<T, TimerSpec>) return Timer::kNumRegs;
        if constexpr (std::is_same_v<T, SensorSpec>) return Sensor::kNumRegs;
        if constexpr (std::is_same_v<T, RegisterFileSpec>) return d.size_words;
      },
      p.device);
}

}  // namespace

std::string_view run_mode_name(RunMode mode) {
  return mode == RunMode::kPels ? "pels" : "baseline";
}

std::string digest_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return fmt::format("{:016x}", h);
}

std::string Scenario::stimulus_digest() const {
  std::string canon;
  for (const auto& s : stimuli) canon += fmt::format("s {} {} {}\n", s.cycle, s.line, s.level);
  for (const auto& p : peripherals) {
    canon += fmt::format("p {} {:x} {}", p.name, p.base, p.segment);
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, GpioSpec>) {
            canon += " gpio";
          } else if constexpr (std::is_same_v<T, TimerSpec>) {
            canon += fmt::format(" timer {} {} {}", d.period, d.enabled,
                                 d.event_line ? static_cast<long long>(*d.event_line) : -1);
          } else if constexpr (std::is_same_v<T, SensorSpec>) {
            canon += fmt::format(" sensor {} {} {}", static_cast<int>(d.mode),
                                 d.event_line ? static_cast<long long>(*d.event_line) : -1,
                                 d.start_line ? static_cast<long long>(*d.start_line) : -1);
            for (const auto& sp : d.schedule) canon += fmt::format(" {}:{}", sp.cycle, sp.value);
          } else {
            canon += fmt::format(" regs {}", d.size_words);
            for (auto v : d.init) canon += fmt::format(" {}", v);
          }
        },
        p.device);
    canon += '\n';
  }
  return digest_hex(canon);
}

Scenario parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  const Node root(doc, "");
  root.require_object();
  Scenario sc;
  sc.name = root.get_or("name", sc.name, [](const Node& x) { return x.str(); });
  sc.clock_limit = root.get_or("clock_limit", sc.clock_limit, [](const Node& x) { return x.u64(); });
  if (root.has("mode")) {
    const auto mode = root.at("mode").str();
    if (mode == "pels") {
      sc.mode = RunMode::kPels;
    } else if (mode == "baseline") {
      sc.mode = RunMode::kBaseline;
    } else {
      config_error("/mode", fmt::format("unknown mode '{}'", mode));
    }
  }

  if (root.has("fabric")) {
    const auto f = root.at("fabric");
    f.require_object();
    sc.input_width = f.get_or("inputs", sc.input_width, [](const Node& x) { return x.u64(); });
    sc.output_width = f.get_or("outputs", sc.output_width, [](const Node& x) { return x.u64(); });
    if (f.has("loopback")) {
      const auto lb = f.at("loopback");
      lb.require_array();
      for (std::size_t i = 0; i < lb.size(); ++i) {
        const auto r = lb.at(i);
        if (r.value().is_array() && r.size() == 2) {
          sc.loopback.push_back({r.at(std::size_t{0}).u64(), r.at(std::size_t{1}).u64()});
        } else if (r.value().is_object()) {
          sc.loopback.push_back({r.at("output").u64(), r.at("input").u64()});
        } else {
          config_error(r.path(), "expected [output, input] or {output, input}");
        }
      }
    }
  }
  if (sc.input_width == 0 || sc.output_width == 0) {
    config_error("/fabric", "event widths must be positive");
  }
  if (sc.output_width > 256 * EventVector::kGroupBits) {
    config_error("/fabric/outputs", "at most 256 groups of 32 output lines");
  }

  if (root.has("bus")) {
    const auto b = root.at("bus");
    b.require_object();
    sc.segments = b.get_or("segments", sc.segments, [](const Node& x) { return x.u64(); });
    sc.transfer_cycles = b.get_or("transfer_cycles", sc.transfer_cycles,
                                  [](const Node& x) { return x.u32(); });
  }

  if (root.has("peripherals")) {
    const auto ps = root.at("peripherals");
    ps.require_array();
    for (std::size_t i = 0; i < ps.size(); ++i) sc.peripherals.push_back(parse_peripheral(ps.at(i)));
  }

  if (root.has("links")) {
    const auto ls = root.at("links");
    ls.require_array();
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const auto n = ls.at(i);
      n.require_object();
      LinkSpec link;
      link.scm_lines = n.get_or("scm_lines", link.scm_lines, [](const Node& x) { return x.u64(); });
      link.fifo_depth = n.get_or("fifo_depth", link.fifo_depth, [](const Node& x) { return x.u64(); });
      link.segment = n.get_or("segment", link.segment, [](const Node& x) { return x.u64(); });
      link.config.event_mask = n.has("event_mask") ? parse_mask(n.at("event_mask"), sc.input_width)
                                                   : EventVector(sc.input_width);
      if (n.has("trigger_mode")) {
        const auto mode = n.at("trigger_mode").str();
        if (mode == "any") {
          link.config.trigger_mode = TriggerMode::kAnySelectedActive;
        } else if (mode == "all") {
          link.config.trigger_mode = TriggerMode::kAllSelectedActive;
        } else {
          config_error(n.path() + "/trigger_mode", fmt::format("expected any|all, got '{}'", mode));
        }
      }
      link.config.base_address = n.get_or("base_address", std::uint32_t{0},
                                          [](const Node& x) { return x.u32(); });
      link.config.enabled = n.get_or("enabled", true, [](const Node& x) { return x.boolean(); });
      link.program = load_link_program(n, base_dir);
      sc.links.push_back(std::move(link));
    }
  }

  if (root.has("baseline")) {
    const auto b = root.at("baseline");
    b.require_object();
    auto& p = sc.baseline;
    p.interrupt_entry_cycles = b.get_or("interrupt_entry_cycles", p.interrupt_entry_cycles,
                                        [](const Node& x) { return x.u32(); });
    p.handler_cycles = b.get_or("handler_cycles", p.handler_cycles,
                                [](const Node& x) { return x.u32(); });
    p.memory_fetches_per_handler = b.get_or("memory_fetches_per_handler",
                                            p.memory_fetches_per_handler,
                                            [](const Node& x) { return x.u32(); });
  }

  if (root.has("stimuli")) {
    const auto st = root.at("stimuli");
    st.require_array();
    for (std::size_t i = 0; i < st.size(); ++i) {
      const auto s = st.at(i);
      s.require_object();
      Stimulus stim;
      stim.cycle = s.at("cycle").u64();
      stim.line = s.at("line").u64();
      stim.level = s.get_or("level", true, [](const Node& x) { return x.boolean(); });
      sc.stimuli.push_back(stim);
      if (s.has("duration")) {
        const auto d = s.at("duration").u64();
        if (d == 0) config_error(s.path() + "/duration", "must be positive");
        sc.stimuli.push_back({stim.cycle + d, stim.line, !stim.level});
      }
    }
    std::stable_sort(sc.stimuli.begin(), sc.stimuli.end(),
                     [](const Stimulus& a, const Stimulus& b) { return a.cycle < b.cycle; });
  }

  if (root.has("expect")) {
    const auto ex = root.at("expect");
    if (ex.has("latency")) {
      const auto lat = ex.at("latency");
      lat.require_array();
      for (std::size_t i = 0; i < lat.size(); ++i) {
        const auto e = lat.at(i);
        LatencyExpectation le;
        le.link = e.get_or("link", std::size_t{0}, [](const Node& x) { return x.u64(); });
        if (e.has("min")) le.min = e.at("min").u64();
        if (e.has("max")) le.max = e.at("max").u64();
        if (e.has("samples")) le.samples = e.at("samples").u64();
        sc.expectations.push_back(le);
      }
    }
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, fmt::format("cannot open scenario '{}'", path.string()));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kConfig, fmt::format("{}: {}", path.string(), e.what()));
  }
  try {
    return parse_scenario(doc, path.parent_path());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, fmt::format("{}: {}", path.string(), e.what()));
  }
}

void validate_scenario(const Scenario& sc) {
  if (sc.segments == 0) config_error("/bus/segments", "need at least one segment");
  if (sc.transfer_cycles == 0) config_error("/bus/transfer_cycles", "must be positive");
  for (const auto& r : sc.loopback) {
    if (r.output_line >= sc.output_width || r.input_line >= sc.input_width) {
      config_error("/fabric/loopback",
                   fmt::format("route {} -> {} outside the fabric", r.output_line, r.input_line));
    }
  }

  const auto output_groups = (sc.output_width + EventVector::kGroupBits - 1) / EventVector::kGroupBits;
  for (std::size_t i = 0; i < sc.links.size(); ++i) {
    const auto& l = sc.links[i];
    const auto where = fmt::format("/links/{}", i);
    if (l.segment >= sc.segments) config_error(where + "/segment", "no such bus segment");
    if (l.scm_lines == 0 || l.scm_lines > kMaxProgramLength) {
      config_error(where + "/scm_lines", fmt::format("must be in 1..{}", kMaxProgramLength));
    }
    if (l.fifo_depth == 0 || l.fifo_depth > Link::kMaxFifoDepth) {
      config_error(where + "/fifo_depth", fmt::format("must be in 1..{}", Link::kMaxFifoDepth));
    }
    if (l.config.base_address % 4 != 0) config_error(where + "/base_address", "not word aligned");
    if (l.config.event_mask.width() != sc.input_width) {
      config_error(where + "/event_mask", "width does not match the fabric");
    }
    try {
      validate_against_capacity(l.program, l.scm_lines);
    } catch (const Error& e) {
      config_error(where, e.what());
    }
    for (std::size_t c = 0; c < l.program.size(); ++c) {
      const auto& cmd = l.program.commands[c];
      if (cmd.opcode() == OpCode::kAction && cmd.group() >= output_groups) {
        config_error(where, fmt::format("command {} drives event group {} but the fabric has {}",
                                        c, cmd.group(), output_groups));
      }
    }
  }

  for (std::size_t i = 0; i < sc.stimuli.size(); ++i) {
    if (sc.stimuli[i].line >= sc.input_width) {
      config_error("/stimuli", fmt::format("line {} outside {} inputs", sc.stimuli[i].line,
                                           sc.input_width));
    }
  }

  for (std::size_t i = 0; i < sc.peripherals.size(); ++i) {
    const auto& p = sc.peripherals[i];
    const auto where = fmt::format("/peripherals/{}", i);
    if (p.segment >= sc.segments) config_error(where + "/segment", "no such bus segment");
    const std::uint64_t end = std::uint64_t{p.base} + 4 * std::uint64_t{peripheral_words(p)};
    if (end > (std::uint64_t{1} << 32)) config_error(where, "register block wraps the address space");
    auto check_in = [&](const std::optional<std::size_t>& line, std::size_t width, const char* key) {
      if (line && *line >= width) config_error(where + "/" + key, "line outside the fabric");
    };
    if (const auto* t = std::get_if<TimerSpec>(&p.device)) check_in(t->event_line, sc.input_width, "event_line");
    if (const auto* s = std::get_if<SensorSpec>(&p.device)) {
      check_in(s->event_line, sc.input_width, "event_line");
      check_in(s->start_line, sc.output_width, "start_line");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto& q = sc.peripherals[j];
      if (q.name == p.name) config_error(where + "/name", fmt::format("duplicate name '{}'", p.name));
      if (q.segment != p.segment) continue;
      const std::uint64_t qend = std::uint64_t{q.base} + 4 * std::uint64_t{peripheral_words(q)};
      if (p.base < qend && q.base < end) {
        config_error(where, fmt::format("register block '{}' overlaps '{}'", p.name, q.name));
      }
    }
  }
}

}  // namespace pels
