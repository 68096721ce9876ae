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

// Byte buffers, little-endian loads/stores, LEB128 varints and a bounds-checked
// reader used for every untrusted parse.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphzip/error.hpp"

namespace graphzip {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string_view as_chars(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

/// Loads a `width`-byte little-endian unsigned value (width <= 8).
inline std::uint64_t load_le(const std::uint8_t* p, unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

inline void store_le(std::uint8_t* p, unsigned width, std::uint64_t v) {
  for (unsigned i = 0; i < width; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

inline void append_le(Bytes& out, unsigned width, std::uint64_t v) {
  for (unsigned i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint64_t width_mask(unsigned width) {
  return width >= 8 ? ~std::uint64_t{0} : (std::uint64_t{1} << (8 * width)) - 1;
}

/// Number of significant bits in v; 0 for v == 0.
inline unsigned bit_length(std::uint64_t v) {
  unsigned n = 0;
  while (v) {
    ++n;
    v >>= 1;
  }
  return n;
}

inline constexpr std::size_t kMaxVarintLen64 = 10;

inline std::size_t varint_size(std::uint64_t v) {
  std::size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

inline void put_varint(Bytes& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

/// Forward-only cursor over an untrusted buffer. Every accessor checks bounds
/// and raises Errc::truncated (or the supplied code) instead of reading past
/// the end. Varints must be minimally encoded so that parsing is canonical.
class ByteReader {
 public:
  explicit ByteReader(ByteView data, Errc eof_code = Errc::truncated)
      : data_(data), eof_code_(eof_code) {}

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }
  bool empty() const { return pos_ == data_.size(); }

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  std::uint64_t fixed_le(unsigned width) {
    need(width);
    auto v = load_le(data_.data() + pos_, width);
    pos_ += width;
    return v;
  }

  ByteView take(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (unsigned shift = 0, i = 0; i < kMaxVarintLen64; ++i, shift += 7) {
      std::uint8_t b = u8();
      if (i == kMaxVarintLen64 - 1 && b > 1) fail(Errc::corrupt, "varint overflows 64 bits");
      v |= std::uint64_t{b & 0x7Fu} << shift;
      if (!(b & 0x80)) {
        if (b == 0 && i > 0) fail(Errc::corrupt, "non-canonical varint");
        return v;
      }
    }
    fail(Errc::corrupt, "varint too long");
  }

  /// Varint that must not exceed `max`; `what` names the field for diagnostics.
  std::uint64_t varint_max(std::uint64_t max, const char* what) {
    auto v = varint();
    if (v > max) fail(Errc::corrupt, std::string(what) + " out of range");
    return v;
  }

 private:
  void need(std::size_t n) {
    if (n > remaining()) fail(eof_code_, "unexpected end of data");
  }

  ByteView data_;
  std::size_t pos_ = 0;
  Errc eof_code_;
};

}  // namespace graphzip
