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

#ifndef PELS_EVENT_VECTOR_HPP_
#define PELS_EVENT_VECTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pels {

using Cycle = std::uint64_t;

// Fixed-width bit vector for single-wire event lines. Storage is organized in
// 32-bit groups so that an ACTION's group index addresses one word directly.
class EventVector {
 public:
  static constexpr std::size_t kGroupBits = 32;

  EventVector() = default;
  explicit EventVector(std::size_t width);

  std::size_t width() const { return width_; }
  std::size_t num_groups() const { return groups_.size(); }

  bool test(std::size_t line) const;
  void set(std::size_t line, bool value = true);
  void clear_all();

  bool any() const;
  bool none() const { return !any(); }
  std::size_t count() const;

  // Lines beyond width() in the last group are always masked off.
  std::uint32_t group(std::size_t index) const;
  void set_group(std::size_t index, std::uint32_t bits);

  EventVector& operator|=(const EventVector& other);
  EventVector& operator&=(const EventVector& other);
  friend EventVector operator|(EventVector a, const EventVector& b) { return a |= b; }
  friend EventVector operator&(EventVector a, const EventVector& b) { return a &= b; }
  friend bool operator==(const EventVector& a, const EventVector& b) = default;

  // Most-significant group first, "0x" prefixed, no separators.
  std::string to_hex() const;
  // Accepts "0x..." hex of any length; bits at or above width are an error.
  static EventVector from_hex(std::string_view text, std::size_t width);
  static EventVector from_lines(const std::vector<std::size_t>& lines, std::size_t width);

 private:
  void mask_tail();

  std::size_t width_ = 0;
  std::vector<std::uint32_t> groups_;
};

}  // namespace pels

#endif  // PELS_EVENT_VECTOR_HPP_
