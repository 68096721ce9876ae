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

// Canonical, length-limited Huffman coding over byte symbols.

#pragma once

#include <array>

#include "graphzip/codecs/common.hpp"

namespace graphzip::codecs {

namespace huffman {

inline constexpr unsigned kMaxCodeLength = 12;
inline constexpr std::size_t kLengthTableBytes = 128;

using Histogram = std::array<std::uint64_t, 256>;
using CodeLengths = std::array<std::uint8_t, 256>;

inline Histogram histogram(ByteView data) {
  Histogram h{};
  for (auto b : data) ++h[b];
  return h;
}

/// Optimal code lengths bounded by `limit` bits (package-merge). A lone
/// symbol gets length 1.
inline CodeLengths code_lengths(const Histogram& hist, unsigned limit = kMaxCodeLength) {
  CodeLengths lens{};
  std::vector<unsigned> symbols;
  for (unsigned s = 0; s < 256; ++s)
    if (hist[s]) symbols.push_back(s);
  if (symbols.empty()) return lens;
  if (symbols.size() == 1) {
    lens[symbols[0]] = 1;
    return lens;
  }
  std::stable_sort(symbols.begin(), symbols.end(), [&](unsigned a, unsigned b) { return hist[a] < hist[b]; });

  // Each item is a leaf (symbol >= 0) or a package of two earlier items.
  struct Item {
    std::uint64_t weight;
    int symbol;
    std::uint32_t left, right;
  };
  std::vector<Item> pool;
  std::vector<std::uint32_t> leaves;
  for (auto s : symbols) {
    leaves.push_back(static_cast<std::uint32_t>(pool.size()));
    pool.push_back({hist[s], static_cast<int>(s), 0, 0});
  }
  std::vector<std::uint32_t> list = leaves;
  for (unsigned level = 1; level < limit; ++level) {
    std::vector<std::uint32_t> packages;
    for (std::size_t i = 0; i + 1 < list.size(); i += 2) {
      packages.push_back(static_cast<std::uint32_t>(pool.size()));
      pool.push_back({pool[list[i]].weight + pool[list[i + 1]].weight, -1, list[i], list[i + 1]});
    }
    std::vector<std::uint32_t> merged;
    merged.reserve(leaves.size() + packages.size());
    std::merge(leaves.begin(), leaves.end(), packages.begin(), packages.end(), std::back_inserter(merged),
               [&](std::uint32_t a, std::uint32_t b) { return pool[a].weight < pool[b].weight; });
    list = std::move(merged);
  }
  std::vector<std::uint32_t> stack(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(2 * symbols.size() - 2));
  while (!stack.empty()) {
    auto& it = pool[stack.back()];
    stack.pop_back();
    if (it.symbol >= 0) {
      ++lens[static_cast<unsigned>(it.symbol)];
    } else {
      stack.push_back(it.left);
      stack.push_back(it.right);
    }
  }
  return lens;
}

inline std::uint64_t payload_bits(const Histogram& hist, const CodeLengths& lens) {
  std::uint64_t bits = 0;
  for (unsigned s = 0; s < 256; ++s) bits += hist[s] * lens[s];
  return bits;
}

/// Canonical codes: ordered by (length, symbol).
inline std::array<std::uint32_t, 256> canonical_codes(const CodeLengths& lens) {
  std::array<std::uint32_t, 256> codes{};
  std::array<std::uint32_t, kMaxCodeLength + 2> count{}, next{};
  for (auto l : lens) ++count[l];
  count[0] = 0;
  std::uint32_t code = 0;
  for (unsigned l = 1; l <= kMaxCodeLength; ++l) {
    code = (code + count[l - 1]) << 1;
    next[l] = code;
  }
  for (unsigned s = 0; s < 256; ++s)
    if (lens[s]) codes[s] = next[lens[s]]++;
  return codes;
}

class MsbBitWriter {
 public:
  explicit MsbBitWriter(Bytes& out) : out_(out) {}
  void put(std::uint32_t code, unsigned bits) {
    acc_ = (acc_ << bits) | code;
    n_ += bits;
    while (n_ >= 8) {
      n_ -= 8;
      out_.push_back(static_cast<std::uint8_t>(acc_ >> n_));
    }
  }
  void finish() {
    if (n_) out_.push_back(static_cast<std::uint8_t>(acc_ << (8 - n_)));
    n_ = 0;
  }

 private:
  Bytes& out_;
  std::uint64_t acc_ = 0;
  unsigned n_ = 0;
};

inline Encoded huffman_encode(StreamSpan in, const Params&) {
  const auto& data = in[0].content;
  if (data.empty()) fail(Errc::codec_precondition, "huffman: empty input");
  auto hist = histogram(data);
  auto lens = code_lengths(hist);
  auto codes = canonical_codes(lens);
  Encoded e;
  e.header.resize(kLengthTableBytes);
  for (unsigned s = 0; s < 256; s += 2) e.header[s / 2] = static_cast<std::uint8_t>(lens[s] | (lens[s + 1] << 4));
  put_varint(e.header, data.size());
  Bytes payload;
  payload.reserve(ceil_div8(payload_bits(hist, lens)));
  MsbBitWriter w(payload);
  for (auto b : data) w.put(codes[b], lens[b]);
  w.finish();
  e.outputs.push_back(Stream::serial(std::move(payload)));
  return e;
}

inline std::pair<CodeLengths, std::uint64_t> read_header(ByteView h) {
  auto r = header_reader(h);
  auto table = r.take(kLengthTableBytes);
  auto n = r.varint();
  header_done(r);
  CodeLengths lens{};
  std::uint64_t kraft = 0;  // in units of 2^-kMaxCodeLength
  for (unsigned s = 0; s < 256; ++s) {
    lens[s] = (s & 1) ? table[s / 2] >> 4 : table[s / 2] & 0x0F;
    if (lens[s] > kMaxCodeLength) fail(Errc::corrupt, "huffman: code length exceeds limit");
    if (lens[s]) kraft += std::uint64_t{1} << (kMaxCodeLength - lens[s]);
  }
  if (kraft == 0 || kraft > (std::uint64_t{1} << kMaxCodeLength)) fail(Errc::corrupt, "huffman: invalid code lengths");
  if (n == 0) fail(Errc::corrupt, "huffman: zero element count");
  return {lens, n};
}

inline std::vector<TypePattern> huffman_patterns(PatternSpan, const Params&) { return {kSerialPort}; }

inline std::vector<StreamType> huffman_types(TypeSpan, ByteView h) {
  read_header(h);
  return {StreamType::serial()};
}

inline std::vector<Stream> huffman_decode(StreamSpan out, ByteView h, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 1, "huffman");
  auto [lens, n] = read_header(h);
  const auto& payload = out[0].content;
  if (n > payload.size() * 8) fail(Errc::corrupt, "huffman: element count exceeds payload");
  limits.charge(n);

  constexpr std::uint32_t kTableSize = 1u << kMaxCodeLength;
  std::vector<std::uint16_t> table(kTableSize, 0);  // (len << 8 | symbol); len 0 = invalid
  auto codes = canonical_codes(lens);
  for (unsigned s = 0; s < 256; ++s) {
    if (!lens[s]) continue;
    auto shift = kMaxCodeLength - lens[s];
    for (std::uint32_t i = codes[s] << shift; i < (codes[s] + 1) << shift; ++i)
      table[i] = static_cast<std::uint16_t>((lens[s] << 8) | s);
  }

  Bytes result;
  result.reserve(n);
  const std::uint64_t total_bits = payload.size() * 8;
  std::uint64_t pos = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    std::uint32_t window = 0;
    for (unsigned i = 0; i < kMaxCodeLength; ++i) {
      auto bit = pos + i;
      std::uint32_t v = bit < total_bits ? (payload[bit >> 3] >> (7 - (bit & 7))) & 1 : 0;
      window = (window << 1) | v;
    }
    auto entry = table[window];
    unsigned len = entry >> 8;
    if (len == 0 || pos + len > total_bits) fail(Errc::corrupt, "huffman: invalid code in payload");
    result.push_back(static_cast<std::uint8_t>(entry & 0xFF));
    pos += len;
  }
  if (ceil_div8(pos) != payload.size()) fail(Errc::corrupt, "huffman: trailing payload bytes");
  if ((pos & 7) && (payload.back() & ((1u << (8 - (pos & 7))) - 1)))
    fail(Errc::corrupt, "huffman: non-zero padding");
  return {Stream::fixed(in[0], std::move(result))};
}

}  // namespace huffman

inline CodecSpec huffman_codec() {
  using namespace huffman;
  const TypePattern bytes_like{std::uint8_t(TypePattern::bit(Kind::serial) | TypePattern::bit(Kind::numeric)), 1};
  return {kHuffman, "huffman", {bytes_like}, false, "serial|numeric(1) -> serial", huffman_encode,
          huffman_patterns, huffman_types, huffman_decode};
}

}  // namespace graphzip::codecs
