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

// Fixed-width bit packing: bitpack, range_pack and constant.

#pragma once

#include "graphzip/codecs/common.hpp"

namespace graphzip::codecs {

namespace bitpack {

/// Bit width used to pack values whose maximum is `max`.
inline unsigned pack_width(std::uint64_t max) { return std::max(1u, bit_length(max)); }

/// Maximum element value (as unsigned); 0 for an empty stream.
inline std::uint64_t max_value(const Stream& s) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < s.count; ++i) m = std::max(m, s.value(i));
  return m;
}

inline std::vector<TypePattern> serial_out(PatternSpan, const Params&) { return {kSerialPort}; }

inline std::vector<StreamType> serial_out_types(TypeSpan, ByteView) { return {StreamType::serial()}; }

/// Unpacks `count` values of `bits` bits, checking exact payload size and zero padding.
inline std::vector<std::uint64_t> unpack_checked(ByteView payload, std::uint64_t count, unsigned bits,
                                                 DecodeLimits& limits, unsigned out_width) {
  if (count > payload.size() * 8 / bits || ceil_div8(count * bits) != payload.size())
    fail(Errc::corrupt, "bit-packed payload size does not match header");
  limits.charge(count, out_width);
  std::vector<std::uint64_t> v(count);
  LsbBitReader r(payload);
  for (auto& x : v) x = r.get(bits);
  if (!r.clean_end()) fail(Errc::corrupt, "non-zero bit-packing padding");
  return v;
}

// --- bitpack -------------------------------------------------------------------

inline Encoded bitpack_encode(StreamSpan in, const Params&) {
  const auto& s = in[0];
  unsigned b = pack_width(max_value(s));
  Encoded e;
  e.outputs.push_back(Stream::serial(pack_bits(s.count, b, [&](std::uint64_t i) { return s.value(i); })));
  e.header.push_back(static_cast<std::uint8_t>(b));
  put_varint(e.header, s.count);
  return e;
}

inline std::vector<StreamType> bitpack_types(TypeSpan in, ByteView h) {
  auto r = header_reader(h);
  auto b = r.u8();
  r.varint();
  header_done(r);
  if (b == 0 || b > 8 * in[0].width) fail(Errc::corrupt, "bitpack: invalid bit width");
  return {StreamType::serial()};
}

inline std::vector<Stream> bitpack_decode(StreamSpan out, ByteView h, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 1, "bitpack");
  auto r = header_reader(h);
  unsigned b = r.u8();
  auto n = r.varint();
  if (b == 0 || b > 8 * in[0].width) fail(Errc::corrupt, "bitpack: invalid bit width");
  auto v = unpack_checked(out[0].content, n, b, limits, in[0].width);
  return {Stream::numeric(in[0].width, v)};
}

// --- range_pack ------------------------------------------------------------------

inline Encoded range_pack_encode(StreamSpan in, const Params&) {
  const auto& s = in[0];
  if (s.count == 0) fail(Errc::codec_precondition, "range_pack: empty input");
  std::uint64_t lo = s.value(0), hi = lo;
  for (std::size_t i = 1; i < s.count; ++i) {
    lo = std::min(lo, s.value(i));
    hi = std::max(hi, s.value(i));
  }
  unsigned b = pack_width(hi - lo);
  unsigned w = s.type.width;
  Encoded e;
  e.outputs.push_back(Stream::serial(pack_bits(s.count, b, [&](std::uint64_t i) { return s.value(i) - lo; })));
  append_le(e.header, w, lo);
  e.header.push_back(static_cast<std::uint8_t>(b));
  put_varint(e.header, s.count);
  return e;
}

inline std::vector<StreamType> range_pack_types(TypeSpan in, ByteView h) {
  auto r = header_reader(h);
  r.fixed_le(in[0].width);
  auto b = r.u8();
  r.varint();
  header_done(r);
  if (b == 0 || b > 8 * in[0].width) fail(Errc::corrupt, "range_pack: invalid bit width");
  return {StreamType::serial()};
}

inline std::vector<Stream> range_pack_decode(StreamSpan out, ByteView h, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 1, "range_pack");
  unsigned w = in[0].width;
  auto r = header_reader(h);
  auto lo = r.fixed_le(w);
  unsigned b = r.u8();
  auto n = r.varint();
  if (b == 0 || b > 8 * w || n == 0) fail(Errc::corrupt, "range_pack: invalid header");
  auto v = unpack_checked(out[0].content, n, b, limits, w);
  auto mask = width_mask(w);
  for (auto& x : v) {
    if (x > mask - lo) fail(Errc::corrupt, "range_pack: value exceeds element width");
    x += lo;
  }
  return {Stream::numeric(w, v)};
}

// --- constant ----------------------------------------------------------------------

inline Encoded constant_encode(StreamSpan in, const Params&) {
  const auto& s = in[0];
  auto es = s.type.element_size();
  if (s.count == 0) fail(Errc::codec_precondition, "constant: empty input");
  for (std::size_t i = 1; i < s.count; ++i)
    if (!std::equal(s.content.begin(), s.content.begin() + es, s.content.begin() + i * es))
      fail(Errc::codec_precondition, "constant: input is not constant");
  Encoded e;
  e.header.assign(s.content.begin(), s.content.begin() + es);
  put_varint(e.header, s.count);
  e.outputs.push_back(Stream::serial(Bytes{}));
  return e;
}

inline std::pair<ByteView, std::uint64_t> constant_header(ByteView h, StreamType t) {
  auto r = header_reader(h);
  auto value = r.take(t.element_size());
  auto n = r.varint();
  header_done(r);
  if (n == 0) fail(Errc::corrupt, "constant: zero count");
  return {value, n};
}

inline std::vector<StreamType> constant_types(TypeSpan in, ByteView h) {
  constant_header(h, in[0]);
  return {StreamType::serial()};
}

inline std::vector<Stream> constant_decode(StreamSpan out, ByteView h, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 1, "constant");
  if (!out[0].content.empty()) fail(Errc::corrupt, "constant: non-empty payload");
  auto [value, n] = constant_header(h, in[0]);
  limits.charge(n, value.size());
  Bytes b;
  b.reserve(n * value.size());
  for (std::uint64_t i = 0; i < n; ++i) b.insert(b.end(), value.begin(), value.end());
  return {Stream::fixed(in[0], std::move(b))};
}

}  // namespace bitpack

inline std::vector<CodecSpec> bitpack_codecs() {
  using namespace bitpack;
  return {
      {kBitpack, "bitpack", {kNumericPort}, false, "numeric(w) -> serial", bitpack_encode, serial_out, bitpack_types,
       bitpack_decode},
      {kRangePack, "range_pack", {kNumericPort}, false, "numeric(w) -> serial", range_pack_encode, serial_out,
       range_pack_types, range_pack_decode},
      {kConstant, "constant", {TypePattern::fixed()}, false, "serial|record(k)|numeric(w) -> serial (empty)",
       constant_encode, serial_out, constant_types, constant_decode},
  };
}

}  // namespace graphzip::codecs
