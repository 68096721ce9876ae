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

// Representation transforms: delta, zigzag, tokenize, transpose, parse_int and
// float_deconstruct.

#pragma once

#include <charconv>
#include <string_view>
#include <unordered_map>

#include "graphzip/codecs/common.hpp"

namespace graphzip::codecs {

namespace transform {

inline std::vector<TypePattern> same_pattern(PatternSpan in, const Params&) { return {in[0]}; }

inline std::vector<StreamType> same_type(TypeSpan in, ByteView h) {
  require(h.empty(), Errc::corrupt, "unexpected node header");
  return {in[0]};
}

// --- delta -------------------------------------------------------------------

inline void delta_kernel(std::span<std::uint8_t> data, unsigned w) {
  auto mask = width_mask(w);
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i + w <= data.size(); i += w) {
    auto cur = load_le(&data[i], w);
    store_le(&data[i], w, (cur - prev) & mask);
    prev = cur;
  }
}

inline void undelta_kernel(std::span<std::uint8_t> data, unsigned w) {
  auto mask = width_mask(w);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i + w <= data.size(); i += w) {
    acc = (acc + load_le(&data[i], w)) & mask;
    store_le(&data[i], w, acc);
  }
}

inline Encoded delta_encode(StreamSpan in, const Params&) {
  Encoded e;
  e.outputs.push_back(in[0]);
  delta_kernel(e.outputs[0].content, in[0].type.width);
  return e;
}

inline std::vector<Stream> delta_decode(StreamSpan out, ByteView, TypeSpan, DecodeLimits& limits) {
  require_outputs(out, 1, "delta");
  auto s = charged_copy(out[0], limits);
  undelta_kernel(s.content, s.type.width);
  return {std::move(s)};
}

// --- zigzag --------------------------------------------------------------------

inline std::uint64_t zigzag_value(std::uint64_t x, unsigned w) {
  auto mask = width_mask(w);
  bool negative = (x >> (8 * w - 1)) & 1;
  return ((x << 1) & mask) ^ (negative ? mask : 0);
}

inline std::uint64_t unzigzag_value(std::uint64_t z, unsigned w) {
  auto mask = width_mask(w);
  return (z >> 1) ^ ((z & 1) ? mask : 0);
}

inline Encoded zigzag_encode(StreamSpan in, const Params&) {
  Encoded e;
  e.outputs.push_back(in[0]);
  auto& s = e.outputs[0];
  unsigned w = s.type.width;
  for (std::size_t i = 0; i < s.count; ++i) store_le(&s.content[i * w], w, zigzag_value(s.value(i), w));
  return e;
}

inline std::vector<Stream> zigzag_decode(StreamSpan out, ByteView, TypeSpan, DecodeLimits& limits) {
  require_outputs(out, 1, "zigzag");
  auto s = charged_copy(out[0], limits);
  unsigned w = s.type.width;
  for (std::size_t i = 0; i < s.count; ++i) store_le(&s.content[i * w], w, unzigzag_value(s.value(i), w));
  return {std::move(s)};
}

// --- tokenize ------------------------------------------------------------------

/// Smallest numeric width able to index `alphabet_size` entries.
inline unsigned index_width(std::uint64_t alphabet_size) {
  std::uint64_t top = alphabet_size ? alphabet_size - 1 : 0;
  if (top <= 0xFF) return 1;
  if (top <= 0xFFFF) return 2;
  if (top <= 0xFFFFFFFFull) return 4;
  return 8;
}

struct Tokens {
  Stream alphabet;
  Stream indices;
};

/// Splits a stream into its unique elements (first-appearance order) and the
/// index of each element in that alphabet.
inline Tokens tokenize_kernel(const Stream& in) {
  Tokens t;
  t.alphabet.type = in.type;
  std::unordered_map<std::string_view, std::uint64_t> seen;
  std::vector<std::uint64_t> idx;
  idx.reserve(in.count);
  const char* base = reinterpret_cast<const char*>(in.content.data());
  std::size_t off = 0;
  for (std::size_t i = 0; i < in.count; ++i) {
    std::size_t len = in.type.kind == Kind::strings ? in.lengths[i] : in.type.element_size();
    std::string_view key(base + off, len);
    off += len;
    auto [it, inserted] = seen.emplace(key, seen.size());
    if (inserted) {
      t.alphabet.content.insert(t.alphabet.content.end(), key.begin(), key.end());
      if (in.type.kind == Kind::strings) t.alphabet.lengths.push_back(static_cast<std::uint32_t>(len));
      ++t.alphabet.count;
    }
    idx.push_back(it->second);
  }
  t.indices = Stream::numeric(index_width(t.alphabet.count), idx);
  return t;
}

inline Encoded tokenize_encode(StreamSpan in, const Params&) {
  auto t = tokenize_kernel(in[0]);
  Encoded e;
  e.header.push_back(static_cast<std::uint8_t>(t.indices.type.width));
  e.outputs.push_back(std::move(t.alphabet));
  e.outputs.push_back(std::move(t.indices));
  return e;
}

inline std::vector<TypePattern> tokenize_patterns(PatternSpan in, const Params&) { return {in[0], kNumericPort}; }

inline std::vector<StreamType> tokenize_types(TypeSpan in, ByteView h) {
  auto r = header_reader(h);
  auto w = r.u8();
  header_done(r);
  if (!valid_numeric_width(w)) fail(Errc::corrupt, "tokenize: invalid index width");
  return {in[0], StreamType::numeric(w)};
}

inline std::vector<Stream> tokenize_decode(StreamSpan out, ByteView, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 2, "tokenize");
  const auto& alpha = out[0];
  const auto& idx = out[1];
  bool strings = in[0].kind == Kind::strings;
  std::vector<std::size_t> offsets;
  if (strings) {
    offsets.resize(alpha.count + 1, 0);
    for (std::size_t i = 0; i < alpha.count; ++i) offsets[i + 1] = offsets[i] + alpha.lengths[i];
  }
  std::uint64_t es = in[0].element_size();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < idx.count; ++i) {
    auto v = idx.value(i);
    if (v >= alpha.count) fail(Errc::corrupt, "tokenize: index out of range");
    total += strings ? alpha.lengths[v] : es;
    if (total > limits.max_bytes()) fail(Errc::limit_exceeded, "decoded output exceeds the size limit");
  }
  limits.charge(total);
  if (strings) limits.charge(idx.count, 4);
  Stream s;
  s.type = in[0];
  s.count = idx.count;
  s.content.reserve(total);
  for (std::size_t i = 0; i < idx.count; ++i) {
    auto v = idx.value(i);
    if (strings) {
      s.content.insert(s.content.end(), alpha.content.begin() + offsets[v], alpha.content.begin() + offsets[v + 1]);
      s.lengths.push_back(alpha.lengths[v]);
    } else {
      s.content.insert(s.content.end(), alpha.content.begin() + v * es, alpha.content.begin() + (v + 1) * es);
    }
  }
  return {std::move(s)};
}

// --- transpose -------------------------------------------------------------------

inline Bytes transpose_kernel(ByteView in, std::size_t k, std::size_t n) {
  Bytes out(in.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t lane = 0; lane < k; ++lane) out[lane * n + i] = in[i * k + lane];
  return out;
}

inline Bytes untranspose_kernel(ByteView in, std::size_t k, std::size_t n) {
  Bytes out(in.size());
  for (std::size_t lane = 0; lane < k; ++lane)
    for (std::size_t i = 0; i < n; ++i) out[i * k + lane] = in[lane * n + i];
  return out;
}

inline Encoded transpose_encode(StreamSpan in, const Params&) {
  auto k = in[0].type.width;
  Encoded e;
  e.outputs.push_back(Stream::serial(transpose_kernel(in[0].content, k, in[0].count)));
  put_varint(e.header, k);
  put_varint(e.header, in[0].count);
  return e;
}

inline std::vector<TypePattern> serial_out(PatternSpan, const Params&) { return {kSerialPort}; }

inline std::vector<StreamType> transpose_types(TypeSpan in, ByteView h) {
  auto r = header_reader(h);
  auto k = r.varint();
  r.varint();
  header_done(r);
  if (k != in[0].width) fail(Errc::corrupt, "transpose: header width does not match input type");
  return {StreamType::serial()};
}

inline std::vector<Stream> transpose_decode(StreamSpan out, ByteView h, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 1, "transpose");
  auto r = header_reader(h);
  auto k = r.varint();
  auto n = r.varint();
  if (k != in[0].width || n > out[0].content.size() || n * k != out[0].content.size())
    fail(Errc::corrupt, "transpose: size mismatch");
  limits.charge(out[0].content.size());
  return {Stream::fixed(in[0], untranspose_kernel(out[0].content, k, n))};
}

// --- parse_int -------------------------------------------------------------------

/// Parses canonical signed decimal text ("0", "-5", "123"; no '+', no leading
/// zeros, no "-0") into a 64-bit two's-complement value.
inline bool parse_canonical_int(std::string_view s, std::int64_t& out) {
  if (s.empty() || s.size() > 20) return false;
  std::size_t digits = s[0] == '-' ? 1 : 0;
  if (digits == s.size()) return false;
  if (s[digits] == '0' && (s.size() - digits > 1 || digits == 1)) return false;
  for (std::size_t i = digits; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline Encoded parse_int_encode(StreamSpan in, const Params&) {
  const auto& s = in[0];
  Stream nums;
  nums.type = StreamType::numeric(8);
  nums.count = s.count;
  nums.content.resize(s.count * 8);
  std::size_t off = 0;
  for (std::size_t i = 0; i < s.count; ++i) {
    std::string_view text(reinterpret_cast<const char*>(s.content.data()) + off, s.lengths[i]);
    off += s.lengths[i];
    std::int64_t v;
    if (!parse_canonical_int(text, v))
      fail(Errc::codec_precondition, "parse_int: element " + std::to_string(i) + " is not a canonical integer");
    store_le(&nums.content[i * 8], 8, static_cast<std::uint64_t>(v));
  }
  Encoded e;
  e.outputs.push_back(std::move(nums));
  return e;
}

inline std::vector<TypePattern> parse_int_patterns(PatternSpan, const Params&) { return {numeric_port(8)}; }

inline std::vector<StreamType> parse_int_types(TypeSpan, ByteView h) {
  require(h.empty(), Errc::corrupt, "unexpected node header");
  return {StreamType::numeric(8)};
}

inline std::vector<Stream> parse_int_decode(StreamSpan out, ByteView, TypeSpan, DecodeLimits& limits) {
  require_outputs(out, 1, "parse_int");
  const auto& nums = out[0];
  limits.charge(nums.count, 24);
  Stream s;
  s.type = StreamType::strings();
  s.count = nums.count;
  s.lengths.reserve(nums.count);
  char buf[24];
  for (std::size_t i = 0; i < nums.count; ++i) {
    auto v = static_cast<std::int64_t>(nums.value(i));
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    s.content.insert(s.content.end(), buf, end);
    s.lengths.push_back(static_cast<std::uint32_t>(end - buf));
  }
  return {std::move(s)};
}

// --- float_deconstruct ------------------------------------------------------------

inline constexpr unsigned kMantissaBits = 23;

inline Encoded float_deconstruct_encode(StreamSpan in, const Params&) {
  const auto& s = in[0];
  auto n = s.count;
  Encoded e;
  e.outputs.push_back(Stream::serial(pack_bits(n, 1, [&](std::uint64_t i) { return s.value(i) >> 31; })));
  Bytes exps(n);
  for (std::size_t i = 0; i < n; ++i) exps[i] = static_cast<std::uint8_t>(s.value(i) >> kMantissaBits);
  e.outputs.push_back(Stream::fixed(StreamType::numeric(1), std::move(exps)));
  e.outputs.push_back(
      Stream::serial(pack_bits(n, kMantissaBits, [&](std::uint64_t i) { return s.value(i) & 0x7FFFFF; })));
  put_varint(e.header, n);
  return e;
}

inline std::vector<TypePattern> float_deconstruct_patterns(PatternSpan, const Params&) {
  return {kSerialPort, numeric_port(1), kSerialPort};
}

inline std::vector<StreamType> float_deconstruct_types(TypeSpan, ByteView h) {
  auto r = header_reader(h);
  r.varint();
  header_done(r);
  return {StreamType::serial(), StreamType::numeric(1), StreamType::serial()};
}

inline std::vector<Stream> float_deconstruct_decode(StreamSpan out, ByteView h, TypeSpan, DecodeLimits& limits) {
  require_outputs(out, 3, "float_deconstruct");
  auto r = header_reader(h);
  auto n = r.varint();
  const auto& sign = out[0];
  const auto& exps = out[1];
  const auto& mant = out[2];
  if (exps.count != n || sign.content.size() != ceil_div8(n) || mant.content.size() != ceil_div8(n * kMantissaBits))
    fail(Errc::corrupt, "float_deconstruct: plane sizes do not match element count");
  limits.charge(n, 4);
  LsbBitReader sr(sign.content), mr(mant.content);
  Stream s;
  s.type = StreamType::numeric(4);
  s.count = n;
  s.content.resize(n * 4);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t v = (sr.get(1) << 31) | (std::uint64_t{exps.content[i]} << kMantissaBits) | mr.get(kMantissaBits);
    store_le(&s.content[i * 4], 4, v);
  }
  if (!sr.clean_end() || !mr.clean_end()) fail(Errc::corrupt, "float_deconstruct: non-zero padding");
  return {std::move(s)};
}

}  // namespace transform

inline std::vector<CodecSpec> transform_codecs() {
  using namespace transform;
  const TypePattern tokenizable{std::uint8_t(TypePattern::bit(Kind::record) | TypePattern::bit(Kind::numeric) |
                                             TypePattern::bit(Kind::strings)),
                                0};
  const TypePattern recordlike{std::uint8_t(TypePattern::bit(Kind::record) | TypePattern::bit(Kind::numeric)), 0};
  return {
      {kDelta, "delta", {kNumericPort}, false, "numeric(w) -> numeric(w)", delta_encode, same_pattern, same_type,
       delta_decode},
      {kZigzag, "zigzag", {kNumericPort}, false, "numeric(w) -> numeric(w)", zigzag_encode, same_pattern, same_type,
       zigzag_decode},
      {kTokenize, "tokenize", {tokenizable}, false, "T -> T (alphabet), numeric(w) (indices)", tokenize_encode,
       tokenize_patterns, tokenize_types, tokenize_decode},
      {kTranspose, "transpose", {recordlike}, false, "record(k)|numeric(k) -> serial", transpose_encode, serial_out,
       transpose_types, transpose_decode},
      {kParseInt, "parse_int", {kStringsPort}, false, "strings -> numeric(8)", parse_int_encode, parse_int_patterns,
       parse_int_types, parse_int_decode},
      {kFloatDeconstruct, "float_deconstruct", {numeric_port(4)}, false,
       "numeric(4) -> serial (sign), numeric(1) (exponent), serial (mantissa)", float_deconstruct_encode,
       float_deconstruct_patterns, float_deconstruct_types, float_deconstruct_decode},
  };
}

}  // namespace graphzip::codecs
