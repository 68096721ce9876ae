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

// Shared helpers for codec bindings: header cursors, bit packing, port shorthands.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "graphzip/codec.hpp"

namespace graphzip::codecs {

/// Wire identifiers. Frozen for format version 1.
enum WireId : std::uint32_t {
  kSerialToRecord = 1,
  kRecordToSerial = 2,
  kSerialToNumericLE = 3,
  kSerialToNumericBE = 4,
  kNumericToSerial = 5,
  kStringsSeparate = 6,
  kDispatch = 7,
  kSplit = 8,
  kConcat = 9,
  kDelta = 10,
  kZigzag = 11,
  kTokenize = 12,
  kTranspose = 13,
  kBitpack = 14,
  kRangePack = 15,
  kConstant = 16,
  kParseInt = 17,
  kFloatDeconstruct = 18,
  kHuffman = 19,
  kFieldLz = 20,
  kByteLz = 21,
};

inline constexpr TypePattern kSerialPort = TypePattern::of(Kind::serial);
inline constexpr TypePattern kStringsPort = TypePattern::of(Kind::strings);
inline constexpr TypePattern kNumericPort = TypePattern::of(Kind::numeric);
inline constexpr TypePattern kRecordPort = TypePattern::of(Kind::record);

inline TypePattern numeric_port(std::uint32_t w) { return TypePattern::of(Kind::numeric, w); }

inline ByteReader header_reader(ByteView h) { return ByteReader(h, Errc::corrupt); }

inline void header_done(const ByteReader& r) {
  require(r.empty(), Errc::corrupt, "trailing bytes in node header");
}

inline void require_outputs(StreamSpan outs, std::size_t n, const char* codec) {
  if (outs.size() != n) fail(Errc::corrupt, std::string(codec) + ": wrong number of outputs");
}

/// Copies a stream, charging its size against the decode limits.
inline Stream charged_copy(const Stream& s, DecodeLimits& limits) {
  limits.charge(s.byte_size());
  return s;
}

inline std::uint64_t ceil_div8(std::uint64_t bits) { return bits / 8 + (bits % 8 != 0); }

/// Writes fixed-width bit fields least-significant bit first.
class LsbBitWriter {
 public:
  explicit LsbBitWriter(Bytes& out) : out_(out) {}

  void put(std::uint64_t v, unsigned bits) {
    while (bits) {
      unsigned t = bits > 32 ? 32 : bits;
      acc_ |= (v & ((std::uint64_t{1} << t) - 1)) << n_;
      n_ += t;
      v >>= t;
      bits -= t;
      while (n_ >= 8) {
        out_.push_back(static_cast<std::uint8_t>(acc_));
        acc_ >>= 8;
        n_ -= 8;
      }
    }
  }

  void finish() {
    if (n_) out_.push_back(static_cast<std::uint8_t>(acc_));
    acc_ = 0;
    n_ = 0;
  }

 private:
  Bytes& out_;
  std::uint64_t acc_ = 0;
  unsigned n_ = 0;
};

class LsbBitReader {
 public:
  explicit LsbBitReader(ByteView data) : data_(data) {}

  std::uint64_t get(unsigned bits) {
    std::uint64_t v = 0;
    unsigned got = 0;
    while (got < bits) {
      if (n_ == 0) {
        require(pos_ < data_.size(), Errc::corrupt, "bit stream underrun");
        acc_ = data_[pos_++];
        n_ = 8;
      }
      unsigned t = std::min(n_, bits - got);
      v |= (acc_ & ((1u << t) - 1)) << got;
      acc_ >>= t;
      n_ -= t;
      got += t;
    }
    return v;
  }

  /// True when every byte was consumed and the unused tail bits are zero.
  bool clean_end() const { return pos_ == data_.size() && acc_ == 0; }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
  std::uint64_t acc_ = 0;
  unsigned n_ = 0;
};

/// Packs `values` at `bits` bits each, LSB first, zero-padding the last byte.
template <class Get>
Bytes pack_bits(std::uint64_t count, unsigned bits, Get&& get) {
  Bytes out;
  out.reserve(ceil_div8(count * bits));
  LsbBitWriter w(out);
  for (std::uint64_t i = 0; i < count; ++i) w.put(get(i), bits);
  w.finish();
  return out;
}

}  // namespace graphzip::codecs
