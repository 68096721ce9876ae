// Copyright 2026 The Graphzip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

#include "graphzip/bytes.hpp"

namespace graphzip {

namespace detail {

inline constexpr std::uint32_t kCastagnoliReflected = 0x82F63B78u;

constexpr std::array<std::uint32_t, 256> make_crc32c_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? (c >> 1) ^ kCastagnoliReflected : c >> 1;
    t[i] = c;
  }
  return t;
}

inline constexpr auto kCrc32cTable = make_crc32c_table();

}  // namespace detail

/// Incremental CRC32C (Castagnoli). Feed with update(); value() finalizes.
class Crc32c {
 public:
  void update(ByteView data) {
    for (auto b : data) state_ = detail::kCrc32cTable[(state_ ^ b) & 0xFF] ^ (state_ >> 8);
  }
  std::uint32_t value() const { return state_ ^ 0xFFFFFFFFu; }

 private:
  std::uint32_t state_ = 0xFFFFFFFFu;
};

inline std::uint32_t crc32c(ByteView data) {
  Crc32c c;
  c.update(data);
  return c.value();
}

}  // namespace graphzip
