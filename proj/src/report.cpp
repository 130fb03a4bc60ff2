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

#include "pels/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json summary_json(const LatencySummary& s) {
  ordered_json j;
  j["count"] = s.count;
  if (s.count == 0) {
    j["min"] = nullptr;
    j["max"] = nullptr;
    j["mean"] = nullptr;
    j["jitter"] = nullptr;
  } else {
    j["min"] = s.min;
    j["max"] = s.max;
    j["mean"] = s.mean;
    j["jitter"] = s.jitter;
  }
  return j;
}

ordered_json ratio_json(double r) {
  if (std::isinf(r)) return "inf";
  return r;
}

double ratio(double pels, double baseline) {
  if (pels == baseline) return 1.0;
  if (pels == 0.0) return std::numeric_limits<double>::infinity();
  return baseline / pels;
}

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

LatencySummary summarize(const std::vector<LatencySample>& samples) {
  LatencySummary s;
  s.count = samples.size();
  if (samples.empty()) return s;
  s.min = std::numeric_limits<Cycle>::max();
  double total = 0.0;
  for (const auto& x : samples) {
    s.min = std::min(s.min, x.latency());
    s.max = std::max(s.max, x.latency());
    total += static_cast<double>(x.latency());
  }
  s.mean = total / static_cast<double>(samples.size());
  s.jitter = s.max - s.min;
  return s;
}

LatencySummary SimReport::overall_latency() const {
  std::vector<LatencySample> all;
  for (const auto& l : links) all.insert(all.end(), l.samples.begin(), l.samples.end());
  return summarize(all);
}

ordered_json report_to_json(const SimReport& r) {
  ordered_json j;
  j["scenario"] = r.scenario;
  j["mode"] = std::string(run_mode_name(r.mode));
  j["end_cycle"] = r.end_cycle;
  j["end_reason"] = r.end_reason;
  j["stimulus_digest"] = r.stimulus_digest;
  j["trace_digest"] = r.trace_digest;
  j["final_outputs"] = r.final_outputs;

  auto links = ordered_json::array();
  for (const auto& l : r.links) {
    ordered_json lj;
    lj["id"] = l.id;
    lj["latency"] = summary_json(l.latency);
    auto samples = ordered_json::array();
    for (const auto& s : l.samples) samples.push_back({s.trigger_cycle, s.completion_cycle});
    lj["samples"] = std::move(samples);
    lj["triggers"] = {{"edges", l.stats.trigger_edges},
                      {"accepted", l.stats.triggers_accepted},
                      {"dropped", l.stats.triggers_dropped}};
    lj["commands_executed"] = l.stats.commands_executed;
    lj["scm_fetches"] = l.stats.scm_fetches;
    lj["bus_reads"] = l.stats.bus_reads;
    lj["bus_writes"] = l.stats.bus_writes;
    lj["programs_completed"] = l.stats.programs_completed;
    lj["programs_aborted"] = l.stats.programs_aborted;
    lj["pending"] = l.pending;
    lj["error"] = l.error;
    lj["errors"] = l.errors;
    links.push_back(std::move(lj));
  }
  j["links"] = std::move(links);

  auto bus = ordered_json::array();
  for (const auto& m : r.bus) {
    ordered_json mj;
    mj["master"] = m.name;
    mj["segment"] = m.segment;
    mj["reads"] = m.stats.reads;
    mj["writes"] = m.stats.writes;
    mj["decode_errors"] = m.stats.decode_errors;
    mj["max_wait"] = m.stats.max_wait;
    ordered_json hist = ordered_json::object();
    for (const auto& [wait, n] : m.stats.wait_histogram) hist[std::to_string(wait)] = n;
    mj["wait_histogram"] = std::move(hist);
    bus.push_back(std::move(mj));
  }
  j["bus"] = std::move(bus);

  j["activity"] = {{"label", kPowerProxyLabel},
                   {"shared_memory_fetches", r.activity.shared_memory_fetches},
                   {"scm_fetches", r.activity.scm_fetches},
                   {"bus_transactions", r.activity.bus_transactions}};
  j["errors"] = r.errors;
  return j;
}

SimReport report_from_json(const json& j) {
  SimReport r;
  try {
    r.scenario = value_or<std::string>(j, "scenario", "");
    r.mode = value_or<std::string>(j, "mode", "pels") == "baseline" ? RunMode::kBaseline
                                                                    : RunMode::kPels;
    r.end_cycle = value_or<Cycle>(j, "end_cycle", 0);
    r.end_reason = value_or<std::string>(j, "end_reason", "");
    r.stimulus_digest = value_or<std::string>(j, "stimulus_digest", "");
    r.trace_digest = value_or<std::string>(j, "trace_digest", "");
    r.final_outputs = value_or<std::string>(j, "final_outputs", "");
    for (const auto& lj : j.value("links", json::array())) {
      LinkReport l;
      l.id = lj.at("id").get<std::size_t>();
      for (const auto& s : lj.value("samples", json::array())) {
        l.samples.push_back({s.at(std::size_t{0}).get<Cycle>(), s.at(std::size_t{1}).get<Cycle>()});
      }
      l.latency = summarize(l.samples);
      if (lj.contains("triggers")) {
        const auto& t = lj.at("triggers");
        l.stats.trigger_edges = value_or<std::uint64_t>(t, "edges", 0);
        l.stats.triggers_accepted = value_or<std::uint64_t>(t, "accepted", 0);
        l.stats.triggers_dropped = value_or<std::uint64_t>(t, "dropped", 0);
      }
      l.stats.commands_executed = value_or<std::uint64_t>(lj, "commands_executed", 0);
      l.stats.scm_fetches = value_or<std::uint64_t>(lj, "scm_fetches", 0);
      l.stats.bus_reads = value_or<std::uint64_t>(lj, "bus_reads", 0);
      l.stats.bus_writes = value_or<std::uint64_t>(lj, "bus_writes", 0);
      l.stats.programs_completed = value_or<std::uint64_t>(lj, "programs_completed", 0);
      l.stats.programs_aborted = value_or<std::uint64_t>(lj, "programs_aborted", 0);
      l.pending = value_or<std::size_t>(lj, "pending", 0);
      l.error = value_or<bool>(lj, "error", false);
      l.errors = value_or<std::vector<std::string>>(lj, "errors", {});
      r.links.push_back(std::move(l));
    }
    for (const auto& mj : j.value("bus", json::array())) {
      MasterReport m;
      m.name = mj.at("master").get<std::string>();
      m.segment = value_or<std::size_t>(mj, "segment", 0);
      m.stats.reads = value_or<std::uint64_t>(mj, "reads", 0);
      m.stats.writes = value_or<std::uint64_t>(mj, "writes", 0);
      m.stats.decode_errors = value_or<std::uint64_t>(mj, "decode_errors", 0);
      m.stats.max_wait = value_or<Cycle>(mj, "max_wait", 0);
      const auto hist = mj.value("wait_histogram", json::object());
      for (const auto& [k, v] : hist.items()) {
        m.stats.wait_histogram[std::stoull(k)] = v.get<std::uint64_t>();
      }
      r.bus.push_back(std::move(m));
    }
    if (j.contains("activity")) {
      const auto& a = j.at("activity");
      r.activity.shared_memory_fetches = value_or<std::uint64_t>(a, "shared_memory_fetches", 0);
      r.activity.scm_fetches = value_or<std::uint64_t>(a, "scm_fetches", 0);
      r.activity.bus_transactions = value_or<std::uint64_t>(a, "bus_transactions", 0);
    }
    r.errors = value_or<std::vector<std::string>>(j, "errors", {});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, fmt::format("malformed report: {}", e.what()));
  }
  return r;
}

void emit_trace(const SimReport& report, std::ostream& sink) {
  for (const auto& line : report.trace) {
    sink << line << '\n';
    if (!sink) throw Error(ErrorCode::kIo, "trace sink write failed");
  }
  sink.flush();
  if (!sink) throw Error(ErrorCode::kIo, "trace sink flush failed");
}

Comparison compare(const SimReport& pels, const SimReport& baseline,
                   std::optional<double> pels_mhz, std::optional<double> baseline_mhz) {
  if (pels.stimulus_digest != baseline.stimulus_digest) {
    throw Error(ErrorCode::kMismatchedStimulus,
                fmt::format("stimulus digests differ ({} vs {})", pels.stimulus_digest,
                            baseline.stimulus_digest));
  }
  Comparison c;
  c.pels_latency_mean = pels.overall_latency().mean;
  c.baseline_latency_mean = baseline.overall_latency().mean;
  c.latency_ratio = ratio(c.pels_latency_mean, c.baseline_latency_mean);
  c.pels_bus_transactions = pels.activity.bus_transactions;
  c.baseline_bus_transactions = baseline.activity.bus_transactions;
  c.bus_transaction_ratio = ratio(static_cast<double>(c.pels_bus_transactions),
                                  static_cast<double>(c.baseline_bus_transactions));
  c.pels_shared_fetches = pels.activity.shared_memory_fetches;
  c.baseline_shared_fetches = baseline.activity.shared_memory_fetches;
  c.shared_fetch_ratio = ratio(static_cast<double>(c.pels_shared_fetches),
                               static_cast<double>(c.baseline_shared_fetches));
  c.pels_memory_activity = pels.activity.memory_activity();
  c.baseline_memory_activity = baseline.activity.memory_activity();
  c.memory_activity_ratio = ratio(static_cast<double>(c.pels_memory_activity),
                                  static_cast<double>(c.baseline_memory_activity));
  c.pels_mhz = pels_mhz;
  c.baseline_mhz = baseline_mhz;
  return c;
}

ordered_json comparison_to_json(const Comparison& c) {
  ordered_json j;
  j["latency_cycles"] = {{"pels_mean", c.pels_latency_mean},
                         {"baseline_mean", c.baseline_latency_mean},
                         {"ratio", ratio_json(c.latency_ratio)}};
  j["bus_transactions"] = {{"pels", c.pels_bus_transactions},
                           {"baseline", c.baseline_bus_transactions},
                           {"ratio", ratio_json(c.bus_transaction_ratio)}};
  j["shared_memory_fetches"] = {{"pels", c.pels_shared_fetches},
                                {"baseline", c.baseline_shared_fetches},
                                {"ratio", ratio_json(c.shared_fetch_ratio)}};
  j["memory_activity"] = {{"pels", c.pels_memory_activity},
                          {"baseline", c.baseline_memory_activity},
                          {"ratio", ratio_json(c.memory_activity_ratio)}};
  if (c.pels_mhz && c.baseline_mhz) {
    // cycles / MHz = microseconds
    j["latency_ns"] = {{"pels", 1000.0 * c.pels_latency_mean / *c.pels_mhz},
                       {"baseline", 1000.0 * c.baseline_latency_mean / *c.baseline_mhz},
                       {"pels_mhz", *c.pels_mhz},
                       {"baseline_mhz", *c.baseline_mhz}};
  }
  j["power"] = "not simulated";
  j["label"] = kPowerProxyLabel;
  return j;
}

std::vector<std::string> check_expectations(const Scenario& scenario, const SimReport& report) {
  std::vector<std::string> failures;
  for (const auto& e : scenario.expectations) {
    if (e.link >= report.links.size()) {
      failures.push_back(fmt::format("expectation names link {} but there are {}", e.link,
                                     report.links.size()));
      continue;
    }
    const auto& s = report.links[e.link].latency;
    if (e.samples && s.count != *e.samples) {
      failures.push_back(fmt::format("link {}: {} latency samples, expected {}", e.link, s.count,
                                     *e.samples));
    }
    if ((e.min || e.max) && s.count == 0) {
      failures.push_back(fmt::format("link {}: no latency samples", e.link));
      continue;
    }
    if (e.min && s.min != *e.min) {
      failures.push_back(fmt::format("link {}: min latency {}, expected {}", e.link, s.min, *e.min));
    }
    if (e.max && s.max != *e.max) {
      failures.push_back(fmt::format("link {}: max latency {}, expected {}", e.link, s.max, *e.max));
    }
  }
  return failures;
}

}  // namespace pels
