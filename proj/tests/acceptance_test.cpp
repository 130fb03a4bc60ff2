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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pels/asm.hpp"
#include "pels/error.hpp"
#include "pels/link.hpp"
#include "pels/report.hpp"
#include "pels/scenario.hpp"
#include "pels/simulator.hpp"
#include "pels/sweep.hpp"
#include "program_gen.hpp"

namespace {

using nlohmann::json;
using namespace pels;

struct Outcome {
  bool passed = false;
  std::string detail;
};

Outcome pass(std::string detail) { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

std::string scenario_path(const std::string& name) {
  return std::string(PELS_SCENARIO_DIR) + "/" + name;
}

const RunOptions kFull{TraceLevel::kFull, std::nullopt};

std::vector<json> records(const SimReport& r) {
  std::vector<json> out;
  for (const auto& line : r.trace) out.push_back(json::parse(line));
  return out;
}

Scenario single_link(const std::string& program) {
  return parse_scenario(json{
      {"name", "single"},
      {"fabric", {{"inputs", 8}, {"outputs", 8}}},
      {"peripherals", json::array({{{"type", "gpio"}, {"name", "gpio0"}, {"base", 0x40000000}}})},
      {"links", json::array({{{"event_mask", {0}}, {"base_address", 0x40000000}, {"program", program}}})},
      {"stimuli", json::array({{{"cycle", 0}, {"line", 0}}})}});
}

Outcome instant_latency() {
  const auto r = run(single_link("action grp0.set, 0b1"), kFull);
  const auto& l = r.links.at(0).latency;
  Cycle out_cycle = 0;
  for (const auto& rec : records(r)) {
    if (rec.value("type", "") == "outputs") out_cycle = rec["cycle"].get<Cycle>();
  }
  const auto detail = fmt::format("latency {} (samples {}), output line 0 high at cycle {}", l.max,
                                  l.count, out_cycle);
  if (l.count == 1 && l.min == 2 && l.max == 2 && out_cycle == 2) return pass(detail);
  return fail(detail);
}

Outcome sequenced_latency() {
  Simulator sim(single_link("set 0, 0x1"), kFull);
  const auto r = sim.run();
  const auto& l = r.links.at(0).latency;
  const auto pins = dynamic_cast<Gpio*>(sim.peripheral("gpio0"))->pins();
  const auto detail = fmt::format("latency {} (samples {}), GPIO OUT = 0x{:x}", l.max, l.count, pins);
  if (l.count == 1 && l.min == 7 && l.max == 7 && pins == 1) return pass(detail);
  return fail(detail);
}

Outcome baseline_latency() {
  const auto r = run(single_link("set 0, 0x1"), RunOptions{TraceLevel::kFull, RunMode::kBaseline});
  const auto& l = r.links.at(0).latency;
  const auto detail = fmt::format("latency {} (samples {}), shared fetches {}", l.max, l.count,
                                  r.activity.shared_memory_fetches);
  if (l.count == 1 && l.min == 16 && l.max == 16 && r.activity.shared_memory_fetches == 16) {
    return pass(detail);
  }
  return fail(detail);
}

Outcome power_proxy() {
  auto sc = load_scenario(scenario_path("threshold.json"));
  const auto p = run(sc, RunOptions{TraceLevel::kOff, RunMode::kPels});
  const auto b = run(sc, RunOptions{TraceLevel::kOff, RunMode::kBaseline});
  const auto c = compare(p, b);
  std::string detail = fmt::format(
      "PELS fetches {}, baseline fetches {}, memory-activity ratio {:.2f} (proxy only)",
      p.activity.shared_memory_fetches, b.activity.shared_memory_fetches, c.memory_activity_ratio);
  bool ok = p.activity.shared_memory_fetches == 0 && b.activity.shared_memory_fetches >= 1 &&
            c.memory_activity_ratio >= 3.7 && comparison_to_json(c)["power"] == "not simulated";
  // Any calibration with at least two fetches per handler must keep the ratio finite and above 1.
  for (std::uint32_t fetches : {2u, 3u, 5u, 16u, 64u}) {
    for (std::uint32_t entry : {0u, 10u}) {
      sc.baseline = {entry, 6, fetches};
      const auto bb = run(sc, RunOptions{TraceLevel::kOff, RunMode::kBaseline});
      const auto r = compare(p, bb).memory_activity_ratio;
      if (!std::isfinite(r) || r <= 1.0) {
        ok = false;
        detail += fmt::format("; fetches={} entry={} gives ratio {}", fetches, entry, r);
      }
    }
  }
  return {ok, detail};
}

Outcome arbitration_fairness() {
  constexpr std::size_t kLinks = 8;
  constexpr Cycle kT = 2;
  json doc{{"name", "fairness"},
           {"clock_limit", 10000},
           {"fabric", {{"inputs", 8}, {"outputs", 8}}},
           {"peripherals", json::array({{{"type", "regs"}, {"base", 0x20000000}, {"size_words", 8}}})},
           {"links", json::array()},
           {"stimuli", json::array({{{"cycle", 0}, {"line", 0}}})}};
  for (std::size_t i = 0; i < kLinks; ++i) {
    doc["links"].push_back({{"event_mask", {0}},
                            {"base_address", 0x20000000},
                            {"program", fmt::format("top: write {}, 1\nloop 100000, top", i)}});
  }
  const auto r = run(parse_scenario(doc), RunOptions{TraceLevel::kGrants, std::nullopt});

  std::vector<std::pair<Cycle, std::size_t>> grants;
  Cycle worst_wait = 0;
  for (const auto& rec : records(r)) {
    if (rec.value("type", "") != "grant") continue;
    grants.emplace_back(rec["cycle"].get<Cycle>(), rec["link"].get<std::size_t>());
    worst_wait = std::max(worst_wait, rec["wait"].get<Cycle>());
  }
  if (grants.size() < 100) return fail(fmt::format("only {} grants", grants.size()));

  // Steady state starts once every link has been granted once.
  std::set<std::size_t> seen;
  Cycle steady = 0;
  for (const auto& [c, l] : grants) {
    seen.insert(l);
    if (seen.size() == kLinks) {
      steady = c + 1;
      break;
    }
  }
  const Cycle window = kLinks * kT;
  const Cycle last = grants.back().first;
  std::size_t windows = 0;
  for (Cycle w = steady; w + window <= last; ++w) {
    std::vector<int> count(kLinks, 0);
    for (const auto& [c, l] : grants) {
      if (c >= w && c < w + window) ++count[l];
    }
    for (std::size_t l = 0; l < kLinks; ++l) {
      if (count[l] != 1) {
        return fail(fmt::format("window at cycle {}: link {} granted {} times", w, l, count[l]));
      }
    }
    ++windows;
  }
  const Cycle bound = (kLinks - 1) * kT;
  const auto detail = fmt::format("{} grants, {} windows of {} cycles checked, worst wait {} (bound {})",
                                  grants.size(), windows, window, worst_wait, bound);
  if (worst_wait <= bound && windows > 9000) return pass(detail);
  return fail(detail);
}

Outcome assembler_round_trip() {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 1000; ++i) {
    const auto p = pels::testing::random_valid_program(rng, i % 10 == 0 ? 256 : 24);
    const auto back = assemble(parse(disassemble(p)));
    if (!(back == p)) return fail(fmt::format("program {} did not round-trip", i));
  }
  const std::vector<std::pair<std::string, ErrorCode>> corpus{
      {"a: wait 1\nb: wait 1\nloop 1, b\nloop 1, a", ErrorCode::kNestedLoop},
      {"write 0, 0x1_0000_0000", ErrorCode::kLiteralRange},
      {"jif eq, 0, missing", ErrorCode::kUndefinedLabel},
      {"x: wait 1\nx: wait 1", ErrorCode::kDuplicateLabel},
      {"bogus 1, 2", ErrorCode::kUnknownMnemonic},
  };
  for (const auto& [text, code] : corpus) {
    try {
      assemble_text(text);
      return fail(fmt::format("accepted '{}'", text));
    } catch (const Error& e) {
      if (e.code() != code) {
        return fail(fmt::format("'{}' gave {}, want {}", text, error_code_name(e.code()),
                                error_code_name(code)));
      }
    }
  }
  try {
    validate_against_capacity(assemble_text("wait 1\nwait 1\nwait 1\nwait 1\nwait 1"), 4);
    return fail("5 commands fit in 4 lines");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCapacityExceeded) return fail("capacity: wrong error code");
  }
  return pass(fmt::format("1000 random programs round-trip; {} negative cases rejected",
                          corpus.size() + 1));
}

std::uint32_t rmw_bit_loop(std::uint32_t old_value, OpCode op, std::uint32_t mask) {
  std::uint32_t out = 0;
  for (int b = 0; b < 32; ++b) {
    const unsigned o = (old_value >> b) & 1u;
    const unsigned m = (mask >> b) & 1u;
    unsigned r = o;
    if (op == OpCode::kSet) r = o | m;
    if (op == OpCode::kClear) r = o & (m ^ 1u);
    if (op == OpCode::kToggle) r = o ^ m;
    out |= r << b;
  }
  return out;
}

Outcome rmw_oracle() {
  std::mt19937_64 rng(7);
  for (const auto op : {OpCode::kSet, OpCode::kClear, OpCode::kToggle}) {
    for (int i = 0; i < 10000; ++i) {
      const auto old_value = static_cast<std::uint32_t>(rng());
      const auto mask = static_cast<std::uint32_t>(rng());
      if (execute_rmw(old_value, op, mask) != rmw_bit_loop(old_value, op, mask)) {
        return fail(fmt::format("{}(0x{:08x}, 0x{:08x}) mismatch", mnemonic(op), old_value, mask));
      }
    }
  }
  return pass("3 x 10000 random (old, mask) pairs match the bit-loop reference");
}

Outcome determinism() {
  std::size_t checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(PELS_SCENARIO_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const auto sc = load_scenario(entry.path());
    for (const auto mode : {RunMode::kPels, RunMode::kBaseline}) {
      std::ostringstream a, b;
      emit_trace(run(sc, RunOptions{TraceLevel::kFull, mode}), a);
      emit_trace(run(sc, RunOptions{TraceLevel::kFull, mode}), b);
      if (a.str() != b.str() || digest_hex(a.str()) != digest_hex(b.str())) {
        return fail(fmt::format("{} differs between runs", entry.path().filename().string()));
      }
      ++checked;
    }
  }
  return pass(fmt::format("{} scenario/mode pairs produced byte-identical traces", checked));
}

Outcome fifo_behavior() {
  const auto sc = load_scenario(scenario_path("fifo.json"));
  const auto r = run(sc, kFull);
  const auto& l = r.links.at(0);
  // Period-1 timer enabled at cycle 0: one strobe in every cycle from 1 on.
  const std::uint64_t edges = r.end_cycle - 1;

  std::vector<Cycle> accepted;
  std::vector<Cycle> completed;
  for (const auto& rec : records(r)) {
    const auto type = rec.value("type", "");
    if (type == "trigger" && rec["result"] == "accepted") accepted.push_back(rec["cycle"].get<Cycle>());
    if (type == "complete") completed.push_back(rec["trigger_cycle"].get<Cycle>());
  }
  // Completions must be a prefix of the accepted tokens, the rest still pending.
  bool traced = accepted.size() == l.stats.triggers_accepted &&
                completed.size() + l.pending == accepted.size();
  for (std::size_t i = 0; traced && i < completed.size(); ++i) traced = completed[i] == accepted[i];

  const auto detail = fmt::format(
      "edges {} (timer) / {} (link), accepted {}, dropped {}, completed {}, pending {}", edges,
      l.stats.trigger_edges, l.stats.triggers_accepted, l.stats.triggers_dropped, completed.size(),
      l.pending);
  if (l.stats.triggers_dropped > 0 && l.stats.trigger_edges == edges &&
      l.stats.triggers_accepted + l.stats.triggers_dropped == edges && traced &&
      l.latency.min == 7) {
    return pass(detail);
  }
  return fail(detail);
}

Outcome interlink() {
  const auto sc = parse_scenario(json{
      {"name", "interlink"},
      {"fabric", {{"inputs", 8}, {"outputs", 64}, {"loopback", {{0, 4}}}}},
      {"links", json::array({{{"event_mask", {0}}, {"program", "action grp0.set, 0x1"}},
                             {{"event_mask", {4}}, {"program", "action grp1.set, 0x1"}}})},
      {"stimuli", json::array({{{"cycle", 3}, {"line", 0}}})}});
  const auto r = run(sc, kFull);
  Cycle a_out = 0, b_out = 0, b_trigger = 0;
  for (const auto& rec : records(r)) {
    const auto type = rec.value("type", "");
    if (type == "complete" && rec["link"] == 0) a_out = rec["cycle"].get<Cycle>();
    if (type == "complete" && rec["link"] == 1) b_out = rec["cycle"].get<Cycle>();
    if (type == "trigger" && rec["link"] == 1) b_trigger = rec["cycle"].get<Cycle>();
  }
  const auto detail = fmt::format("A drives output at {}, B triggered at {}, B drives output at {} (+{})",
                                  a_out, b_trigger, b_out, b_out - a_out);
  if (b_out - a_out == 3 && b_trigger == a_out + 1 && r.final_outputs == "0x100000001") {
    return pass(detail);
  }
  return fail(detail);
}

Outcome configuration_sweep() {
  const auto tmpl = load_scenario(scenario_path("sweep.json"));
  std::vector<std::size_t> links{1, 2, 3, 4, 5, 6, 7, 8};
  const auto points = run_sweep(tmpl, links, {4, 6, 8});
  std::size_t passed = 0;
  std::string first_failure;
  for (const auto& p : points) {
    if (p.passed()) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = fmt::format("{}x{}: {}", p.links, p.scm_lines, p.failures.front());
    }
  }
  const auto detail = fmt::format("{}/{} configurations passed", passed, points.size());
  if (passed == points.size() && points.size() == 24) return pass(detail);
  return fail(detail + "; " + first_failure);
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no runtime requirement
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "instant-action latency", 1.0, instant_latency},
      {2, "sequenced-action latency", 1.0, sequenced_latency},
      {3, "baseline CPU latency", 1.0, baseline_latency},
      {4, "memory-activity proxy", 0.0, power_proxy},
      {5, "arbitration fairness", 5.0, arbitration_fairness},
      {6, "assembler round-trip", 0.0, assembler_round_trip},
      {7, "read-modify-write oracle", 0.0, rmw_oracle},
      {8, "determinism", 0.0, determinism},
      {9, "FIFO behavior", 0.0, fifo_behavior},
      {10, "inter-link triggering", 0.0, interlink},
      {11, "configuration sweep", 30.0, configuration_sweep},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out = fail(fmt::format("exception: {}", e.what()));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      out.passed = false;
      out.detail += fmt::format("; took {:.2f} s, budget {:.0f} s", secs, c.budget_s);
    }
    fmt::print("{} criterion {:2} {}: {} [{:.3f} s]\n", out.passed ? "PASS" : "FAIL", c.id, c.name,
               out.detail, secs);
    if (!out.passed) ++failures;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
