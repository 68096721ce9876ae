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

// Type conversions between serial bytes, records, numerics and strings.

#pragma once

#include "graphzip/codecs/common.hpp"

namespace graphzip::codecs {

namespace conversion {

inline std::uint64_t width_param(const Params& p, bool numeric) {
  auto w = p.get_int("width", 0);
  if (numeric ? !valid_numeric_width(static_cast<std::uint64_t>(w)) : (w < 1 || w > 0xFFFFFFFF))
    fail(Errc::codec_precondition, numeric ? "numeric width must be 1, 2, 4 or 8" : "record width must be >= 1");
  return static_cast<std::uint64_t>(w);
}

inline std::uint64_t header_width(ByteView header, bool numeric) {
  auto r = header_reader(header);
  auto w = r.varint_max(0xFFFFFFFF, "width");
  header_done(r);
  if (numeric ? !valid_numeric_width(w) : w < 1) fail(Errc::corrupt, "invalid width in conversion header");
  return w;
}

inline void byteswap_elements(Bytes& b, unsigned w) {
  for (std::size_t i = 0; i + w <= b.size(); i += w) std::reverse(b.begin() + i, b.begin() + i + w);
}

// --- serial -> record(k) ---------------------------------------------------

inline Encoded serial_to_record_encode(StreamSpan in, const Params& p) {
  auto k = width_param(p, false);
  if (in[0].content.size() % k) fail(Errc::codec_precondition, "serial_to_record: indivisible length");
  Encoded e;
  e.outputs.push_back(Stream::fixed(StreamType::record(k), in[0].content));
  put_varint(e.header, k);
  return e;
}

inline std::vector<TypePattern> serial_to_record_patterns(PatternSpan, const Params& p) {
  return {TypePattern::of(Kind::record, static_cast<std::uint32_t>(p.get_int("width", 0)))};
}

inline std::vector<StreamType> serial_to_record_types(TypeSpan, ByteView h) {
  return {StreamType::record(header_width(h, false))};
}

inline std::vector<Stream> to_serial_decode(StreamSpan out, ByteView, TypeSpan, DecodeLimits& limits) {
  require_outputs(out, 1, "conversion");
  limits.charge(out[0].content.size());
  return {Stream::serial(out[0].content)};
}

// --- record(k) -> serial ---------------------------------------------------

inline Encoded record_to_serial_encode(StreamSpan in, const Params&) {
  Encoded e;
  e.outputs.push_back(Stream::serial(in[0].content));
  return e;
}

inline std::vector<TypePattern> serial_pattern(PatternSpan, const Params&) { return {kSerialPort}; }

inline std::vector<StreamType> serial_types(TypeSpan, ByteView h) {
  require(h.empty(), Errc::corrupt, "unexpected node header");
  return {StreamType::serial()};
}

inline std::vector<Stream> to_fixed_decode(StreamSpan out, ByteView, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 1, "conversion");
  if (out[0].content.size() % in[0].width) fail(Errc::corrupt, "serial length not a multiple of width");
  limits.charge(out[0].content.size());
  return {Stream::fixed(in[0], out[0].content)};
}

// --- serial -> numeric (LE / BE) -------------------------------------------

template <bool BigEndian>
Encoded serial_to_numeric_encode(StreamSpan in, const Params& p) {
  auto w = static_cast<unsigned>(width_param(p, true));
  if (in[0].content.size() % w) fail(Errc::codec_precondition, "serial_to_numeric: indivisible length");
  Bytes b = in[0].content;
  if constexpr (BigEndian) byteswap_elements(b, w);
  Encoded e;
  e.outputs.push_back(Stream::fixed(StreamType::numeric(w), std::move(b)));
  put_varint(e.header, w);
  return e;
}

inline std::vector<TypePattern> serial_to_numeric_patterns(PatternSpan, const Params& p) {
  return {numeric_port(static_cast<std::uint32_t>(p.get_int("width", 0)))};
}

inline std::vector<StreamType> serial_to_numeric_types(TypeSpan, ByteView h) {
  return {StreamType::numeric(header_width(h, true))};
}

template <bool BigEndian>
std::vector<Stream> numeric_to_serial_bytes_decode(StreamSpan out, ByteView, TypeSpan, DecodeLimits& limits) {
  require_outputs(out, 1, "conversion");
  limits.charge(out[0].content.size());
  Bytes b = out[0].content;
  if constexpr (BigEndian) byteswap_elements(b, out[0].type.width);
  return {Stream::serial(std::move(b))};
}

// --- numeric -> serial (LE) --------------------------------------------------

inline Encoded numeric_to_serial_encode(StreamSpan in, const Params&) {
  Encoded e;
  e.outputs.push_back(Stream::serial(in[0].content));
  return e;
}

// --- strings -> (serial content, numeric(4) lengths) ------------------------

inline Encoded separate_encode(StreamSpan in, const Params&) {
  Encoded e;
  e.outputs.push_back(Stream::serial(in[0].content));
  Stream lens;
  lens.type = StreamType::numeric(4);
  lens.count = in[0].count;
  lens.content.resize(in[0].lengths.size() * 4);
  for (std::size_t i = 0; i < in[0].lengths.size(); ++i) store_le(&lens.content[i * 4], 4, in[0].lengths[i]);
  e.outputs.push_back(std::move(lens));
  return e;
}

inline std::vector<TypePattern> separate_patterns(PatternSpan, const Params&) {
  return {kSerialPort, numeric_port(4)};
}

inline std::vector<StreamType> separate_types(TypeSpan, ByteView h) {
  require(h.empty(), Errc::corrupt, "unexpected node header");
  return {StreamType::serial(), StreamType::numeric(4)};
}

inline std::vector<Stream> separate_decode(StreamSpan out, ByteView, TypeSpan, DecodeLimits& limits) {
  require_outputs(out, 2, "strings_separate");
  const auto& content = out[0];
  const auto& lens = out[1];
  std::vector<std::uint32_t> lengths(lens.count);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < lens.count; ++i) {
    lengths[i] = static_cast<std::uint32_t>(lens.value(i));
    total += lengths[i];
  }
  if (total != content.content.size()) fail(Errc::corrupt, "string lengths do not cover content");
  limits.charge(content.content.size() + lengths.size() * 4);
  return {Stream::strings(content.content, std::move(lengths))};
}

}  // namespace conversion

inline std::vector<CodecSpec> conversion_codecs() {
  using namespace conversion;
  return {
      {kSerialToRecord, "serial_to_record", {kSerialPort}, false, "serial -> record(k)", serial_to_record_encode,
       serial_to_record_patterns, serial_to_record_types, to_serial_decode},
      {kRecordToSerial, "record_to_serial", {kRecordPort}, false, "record(k) -> serial", record_to_serial_encode,
       serial_pattern, serial_types, to_fixed_decode},
      {kSerialToNumericLE, "serial_to_numeric_le", {kSerialPort}, false, "serial -> numeric(w) [LE]",
       serial_to_numeric_encode<false>, serial_to_numeric_patterns, serial_to_numeric_types,
       numeric_to_serial_bytes_decode<false>},
      {kSerialToNumericBE, "serial_to_numeric_be", {kSerialPort}, false, "serial -> numeric(w) [BE]",
       serial_to_numeric_encode<true>, serial_to_numeric_patterns, serial_to_numeric_types,
       numeric_to_serial_bytes_decode<true>},
      {kNumericToSerial, "numeric_to_serial", {kNumericPort}, false, "numeric(w) -> serial [LE]",
       numeric_to_serial_encode, serial_pattern, serial_types, to_fixed_decode},
      {kStringsSeparate, "strings_separate", {kStringsPort}, false, "strings -> serial, numeric(4)",
       separate_encode, separate_patterns, separate_types, separate_decode},
  };
}

}  // namespace graphzip::codecs
