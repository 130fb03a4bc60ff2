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

#ifndef PELS_BUS_HPP_
#define PELS_BUS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "pels/event_vector.hpp"
#include "pels/periph.hpp"

namespace pels {

enum class BusKind : std::uint8_t { kRead, kWrite };

std::string_view bus_kind_name(BusKind kind);

struct BusTransaction {
  std::size_t master = 0;
  BusKind kind = BusKind::kRead;
  std::uint32_t address = 0;
  std::uint32_t data = 0;     // write data, or read data once complete
  Cycle request_cycle = 0;    // cycle the master raised the request
  Cycle issue_cycle = 0;      // first transfer cycle after the grant
  Cycle complete_cycle = 0;   // last transfer cycle; data valid at its end
  bool decode_error = false;

  // Cycles spent waiting beyond the minimum one-cycle request-to-issue step.
  Cycle grant_wait() const { return issue_cycle - request_cycle - 1; }
};

struct ArbiterState {
  std::size_t num_masters = 0;
  std::size_t rr_pointer = 0;  // last granted master
};

// Grants the first requesting master scanning from rr_pointer + 1, wrapping,
// and moves the pointer to the winner. Empty request set grants nothing.
std::optional<std::size_t> arbitrate(ArbiterState& state, const std::vector<bool>& requests);

// Address decode over disjoint register blocks.
class AddressMap {
 public:
  // Throws Error(kConfig) when the block overlaps one already mapped.
  void add(Peripheral* block);
  // nullptr when no block claims the address.
  Peripheral* find(std::uint32_t address) const;
  const std::vector<Peripheral*>& blocks() const { return blocks_; }

 private:
  std::vector<Peripheral*> blocks_;
};

struct MasterBusStats {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t decode_errors = 0;
  Cycle max_wait = 0;
  std::map<Cycle, std::uint64_t> wait_histogram;

  std::uint64_t transactions() const { return reads + writes; }
};

struct BusGrant {
  BusTransaction txn;
  std::vector<std::size_t> waiting;  // masters still requesting after the grant
};

// One arbitrated interconnect segment. A granted master owns the segment for
// its whole transfer; the next grant is decided in the transfer's last cycle
// so back-to-back transfers leave no idle cycle.
//
// Per cycle: masters call request() during their step, then the owner calls
// step() once at the end of the cycle.
class BusSegment {
 public:
  BusSegment(std::size_t id, std::size_t num_masters, unsigned transfer_cycles);

  std::size_t id() const { return id_; }
  unsigned transfer_cycles() const { return transfer_cycles_; }
  AddressMap& address_map() { return map_; }
  const AddressMap& address_map() const { return map_; }

  // At most one outstanding request per master.
  void request(std::size_t master, BusKind kind, std::uint32_t address, std::uint32_t data,
               Cycle now);

  struct StepResult {
    std::vector<BusTransaction> completed;
    std::optional<BusGrant> granted;
  };
  StepResult step(Cycle now);

  bool idle() const;
  bool has_pending(std::size_t master) const { return pending_.at(master).has_value(); }
  const ArbiterState& arbiter() const { return arbiter_; }
  const std::vector<MasterBusStats>& stats() const { return stats_; }

 private:
  std::size_t id_;
  unsigned transfer_cycles_;
  AddressMap map_;
  ArbiterState arbiter_;
  std::vector<std::optional<BusTransaction>> pending_;
  std::optional<BusTransaction> in_flight_;
  std::vector<MasterBusStats> stats_;
};

}  // namespace pels

#endif  // PELS_BUS_HPP_
