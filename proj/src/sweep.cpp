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

#include "pels/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <future>

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {
namespace {

std::size_t parse_count(std::string_view text, std::string_view whole) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::kConfig, fmt::format("bad count list '{}'", whole));
  }
  return v;
}

SweepPoint run_point(const Scenario& tmpl, std::size_t links, std::size_t scm_lines,
                     TraceLevel level) {
  SweepPoint pt;
  pt.links = links;
  pt.scm_lines = scm_lines;
  Scenario sc = replicate(tmpl, links, scm_lines);
  sc.name = fmt::format("{}-l{}-s{}", tmpl.name, links, scm_lines);
  for (std::size_t i = 0; i < sc.links.size(); ++i) {
    if (sc.links[i].program.size() > scm_lines) {
      pt.failures.push_back(fmt::format("link {}: {} commands do not fit {} SCM lines", i,
                                        sc.links[i].program.size(), scm_lines));
    }
  }
  if (!pt.failures.empty()) return pt;

  try {
    const RunOptions opts{level, std::nullopt};
    const auto first = run(sc, opts);
    const auto second = run(sc, opts);
    pt.failures = validate_report(sc, first);
    if (first.trace_digest != second.trace_digest) {
      pt.failures.push_back("repeated run produced a different trace");
    }
    pt.latency = first.overall_latency();
    for (const auto& m : first.bus) pt.max_grant_wait = std::max(pt.max_grant_wait, m.stats.max_wait);
    pt.bus_transactions = first.activity.bus_transactions;
    for (const auto& l : first.links) pt.triggers_dropped += l.stats.triggers_dropped;
    pt.end_cycle = first.end_cycle;
    pt.trace_digest = first.trace_digest;
  } catch (const std::exception& e) {
    pt.failures.push_back(e.what());
  }
  return pt;
}

}  // namespace

std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto item = text.substr(pos, comma - pos);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_count(item, text));
    } else {
      const auto lo = parse_count(item.substr(0, dots), text);
      const auto hi = parse_count(item.substr(dots + 2), text);
      if (lo > hi) throw Error(ErrorCode::kConfig, fmt::format("empty range in '{}'", text));
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
    pos = comma + 1;
  }
  return out;
}

Scenario replicate(const Scenario& tmpl, std::size_t links, std::size_t scm_lines) {
  if (tmpl.links.empty()) throw Error(ErrorCode::kConfig, "sweep template declares no links");
  Scenario sc = tmpl;
  sc.links.clear();
  for (std::size_t i = 0; i < links; ++i) {
    auto spec = tmpl.links[i % tmpl.links.size()];
    spec.scm_lines = scm_lines;
    sc.links.push_back(std::move(spec));
  }
  sc.expectations.clear();
  return sc;
}

std::vector<std::string> validate_report(const Scenario& scenario, const SimReport& report) {
  std::vector<std::string> failures;
  for (const auto& e : report.errors) failures.push_back("simulation error: " + e);

  for (const auto& l : report.links) {
    const auto& s = l.stats;
    if (s.triggers_accepted + s.triggers_dropped != s.trigger_edges) {
      failures.push_back(fmt::format("link {}: accepted + dropped != edges", l.id));
    }
    if (l.samples.size() != s.programs_completed) {
      failures.push_back(fmt::format("link {}: {} samples but {} completed programs", l.id,
                                     l.samples.size(), s.programs_completed));
    }
    if (s.triggers_accepted != s.programs_completed + s.programs_aborted + l.pending) {
      failures.push_back(fmt::format("link {}: accepted triggers unaccounted for", l.id));
    }
  }

  std::uint64_t link_ops = 0;
  for (const auto& l : report.links) link_ops += l.stats.bus_reads + l.stats.bus_writes;
  std::uint64_t master_ops = 0;
  for (const auto& m : report.bus) master_ops += m.stats.transactions();
  if (link_ops != master_ops) {
    failures.push_back(fmt::format("links report {} bus transactions, bus reports {}", link_ops,
                                   master_ops));
  }

  std::vector<std::size_t> masters(scenario.segments, 0);
  for (const auto& l : scenario.links) ++masters[l.segment];
  for (const auto& m : report.bus) {
    if (m.name == "cpu") continue;
    const Cycle bound = (masters.at(m.segment) - 1) * Cycle{scenario.transfer_cycles};
    if (m.stats.max_wait > bound) {
      failures.push_back(fmt::format("{}: grant wait {} exceeds {}", m.name, m.stats.max_wait,
                                     bound));
    }
  }
  return failures;
}

std::vector<SweepPoint> run_sweep(const Scenario& tmpl, const std::vector<std::size_t>& links,
                                  const std::vector<std::size_t>& scm_lines,
                                  TraceLevel trace_level) {
  std::vector<std::future<SweepPoint>> jobs;
  for (const auto l : links) {
    for (const auto s : scm_lines) {
      jobs.push_back(std::async(std::launch::async, run_point, std::cref(tmpl), l, s, trace_level));
    }
  }
  std::vector<SweepPoint> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

nlohmann::ordered_json sweep_to_json(const std::vector<SweepPoint>& points) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    nlohmann::ordered_json j;
    j["links"] = p.links;
    j["scm_lines"] = p.scm_lines;
    j["passed"] = p.passed();
    j["failures"] = p.failures;
    j["latency"] = {{"count", p.latency.count},
                    {"min", p.latency.min},
                    {"max", p.latency.max},
                    {"mean", p.latency.mean}};
    j["max_grant_wait"] = p.max_grant_wait;
    j["bus_transactions"] = p.bus_transactions;
    j["triggers_dropped"] = p.triggers_dropped;
    j["end_cycle"] = p.end_cycle;
    j["trace_digest"] = p.trace_digest;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace pels
