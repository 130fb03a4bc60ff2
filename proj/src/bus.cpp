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

#include "pels/bus.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "pels/error.hpp"

namespace pels {

std::string_view bus_kind_name(BusKind kind) { return kind == BusKind::kRead ? "read" : "write"; }

std::optional<std::size_t> arbitrate(ArbiterState& state, const std::vector<bool>& requests) {
  const auto n = state.num_masters;
  for (std::size_t step = 1; step <= n; ++step) {
    const auto candidate = (state.rr_pointer + step) % n;
    if (candidate < requests.size() && requests[candidate]) {
      state.rr_pointer = candidate;
      return candidate;
    }
  }
  return std::nullopt;
}

void AddressMap::add(Peripheral* block) {
  for (const auto* other : blocks_) {
    if (block->base() < other->end() && other->base() < block->end()) {
      throw Error(ErrorCode::kConfig,
                  fmt::format("register block '{}' [0x{:x}, 0x{:x}) overlaps '{}' [0x{:x}, 0x{:x})",
                              block->name(), block->base(), block->end(), other->name(),
                              other->base(), other->end()));
    }
  }
  blocks_.push_back(block);
}

Peripheral* AddressMap::find(std::uint32_t address) const {
  for (auto* block : blocks_) {
    if (block->claims(address)) return block;
  }
  return nullptr;
}

BusSegment::BusSegment(std::size_t id, std::size_t num_masters, unsigned transfer_cycles)
    : id_(id),
      transfer_cycles_(transfer_cycles),
      // Start the pointer on the last master so master 0 wins the first tie.
      arbiter_{num_masters, num_masters == 0 ? 0 : num_masters - 1},
      pending_(num_masters),
      stats_(num_masters) {
  if (transfer_cycles == 0) throw std::invalid_argument("bus transfer needs at least one cycle");
}

void BusSegment::request(std::size_t master, BusKind kind, std::uint32_t address,
                         std::uint32_t data, Cycle now) {
  if (address % 4 != 0) {
    throw std::invalid_argument(fmt::format("bus address 0x{:x} is not word aligned", address));
  }
  auto& slot = pending_.at(master);
  if (slot) {
    throw std::logic_error(fmt::format("master {} already has a request on segment {}", master,
                                       id_));
  }
  BusTransaction txn;
  txn.master = master;
  txn.kind = kind;
  txn.address = address;
  txn.data = data;
  txn.request_cycle = now;
  slot = txn;
}

BusSegment::StepResult BusSegment::step(Cycle now) {
  StepResult result;

  if (in_flight_ && in_flight_->complete_cycle == now) {
    auto txn = *in_flight_;
    in_flight_.reset();
    auto& st = stats_[txn.master];
    (txn.kind == BusKind::kRead ? st.reads : st.writes)++;
    if (auto* block = map_.find(txn.address)) {
      const auto word = (txn.address - block->base()) / 4;
      if (txn.kind == BusKind::kRead) {
        txn.data = block->read(word, now);
      } else {
        block->write(word, txn.data, now);
      }
    } else {
      txn.decode_error = true;
      ++st.decode_errors;
    }
    result.completed.push_back(txn);
  }

  if (!in_flight_) {
    std::vector<bool> requests(pending_.size());
    for (std::size_t m = 0; m < pending_.size(); ++m) requests[m] = pending_[m].has_value();
    if (const auto winner = arbitrate(arbiter_, requests)) {
      auto txn = *pending_[*winner];
      pending_[*winner].reset();
      txn.issue_cycle = now + 1;
      txn.complete_cycle = now + transfer_cycles_;
      auto& st = stats_[*winner];
      const auto wait = txn.grant_wait();
      ++st.wait_histogram[wait];
      st.max_wait = std::max(st.max_wait, wait);
      in_flight_ = txn;

      BusGrant grant{txn, {}};
      for (std::size_t m = 0; m < pending_.size(); ++m) {
        if (pending_[m]) grant.waiting.push_back(m);
      }
      result.granted = std::move(grant);
    }
  }
  return result;
}

bool BusSegment::idle() const {
  if (in_flight_) return false;
  for (const auto& p : pending_) {
    if (p) return false;
  }
  return true;
}

}  // namespace pels
