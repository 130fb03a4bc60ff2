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

#include "pels/event_vector.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace pels {

EventVector::EventVector(std::size_t width)
    : width_(width), groups_((width + kGroupBits - 1) / kGroupBits, 0u) {}

bool EventVector::test(std::size_t line) const {
  if (line >= width_) return false;
  return (groups_[line / kGroupBits] >> (line % kGroupBits)) & 1u;
}

void EventVector::set(std::size_t line, bool value) {
  if (line >= width_) {
    throw std::out_of_range(fmt::format("event line {} outside width {}", line, width_));
  }
  const std::uint32_t bit = 1u << (line % kGroupBits);
  if (value) {
    groups_[line / kGroupBits] |= bit;
  } else {
    groups_[line / kGroupBits] &= ~bit;
  }
}

void EventVector::clear_all() { std::fill(groups_.begin(), groups_.end(), 0u); }

bool EventVector::any() const {
  return std::any_of(groups_.begin(), groups_.end(), [](std::uint32_t g) { return g != 0; });
}

std::size_t EventVector::count() const {
  std::size_t n = 0;
  for (auto g : groups_) n += static_cast<std::size_t>(std::popcount(g));
  return n;
}

std::uint32_t EventVector::group(std::size_t index) const {
  return index < groups_.size() ? groups_[index] : 0u;
}

void EventVector::set_group(std::size_t index, std::uint32_t bits) {
  if (index >= groups_.size()) {
    throw std::out_of_range(fmt::format("event group {} outside {} groups", index, groups_.size()));
  }
  groups_[index] = bits;
  mask_tail();
}

EventVector& EventVector::operator|=(const EventVector& other) {
  const auto n = std::min(groups_.size(), other.groups_.size());
  for (std::size_t i = 0; i < n; ++i) groups_[i] |= other.groups_[i];
  mask_tail();
  return *this;
}

EventVector& EventVector::operator&=(const EventVector& other) {
  for (std::size_t i = 0; i < groups_.size(); ++i) groups_[i] &= other.group(i);
  return *this;
}

std::string EventVector::to_hex() const {
  if (groups_.empty()) return "0x0";
  std::string out = "0x";
  std::size_t top = groups_.size();
  while (top > 1 && groups_[top - 1] == 0) --top;
  out += fmt::format("{:x}", groups_[top - 1]);
  for (std::size_t i = top - 1; i-- > 0;) out += fmt::format("{:08x}", groups_[i]);
  return out;
}

EventVector EventVector::from_hex(std::string_view text, std::size_t width) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
  if (text.empty()) throw std::invalid_argument("empty hex event vector");
  EventVector v(width);
  std::size_t bit = 0;
  for (auto it = text.rbegin(); it != text.rend(); ++it) {
    const char c = *it;
    if (c == '_') continue;
    unsigned nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument(fmt::format("invalid hex digit '{}'", c));
    }
    for (unsigned b = 0; b < 4; ++b, ++bit) {
      if ((nibble >> b) & 1u) {
        if (bit >= width) {
          throw std::out_of_range(fmt::format("event bit {} outside width {}", bit, width));
        }
        v.set(bit);
      }
    }
  }
  return v;
}

EventVector EventVector::from_lines(const std::vector<std::size_t>& lines, std::size_t width) {
  EventVector v(width);
  for (auto line : lines) v.set(line);
  return v;
}

void EventVector::mask_tail() {
  const auto rem = width_ % kGroupBits;
  if (rem != 0 && !groups_.empty()) groups_.back() &= (1u << rem) - 1u;
}

}  // namespace pels
