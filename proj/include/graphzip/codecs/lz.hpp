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

// Element-granular LZ77 (field_lz) and its byte-granular twin (byte_lz).

#pragma once

#include <cstring>

#include "graphzip/codecs/common.hpp"

namespace graphzip::codecs {

namespace lz {

struct MatchParams {
  std::uint32_t min_match = 2;
  std::uint32_t window_log = 20;
  std::uint32_t chain_depth = 64;
};

struct Sequence {
  std::uint32_t literal_run;
  std::uint32_t match_length;
  std::uint32_t offset;
  friend bool operator==(const Sequence&, const Sequence&) = default;
};

struct Parse {
  Bytes literals;  // literal elements, concatenated
  std::vector<Sequence> sequences;
};

inline constexpr unsigned kHashLog = 16;

inline std::uint32_t hash_bytes(const std::uint8_t* p, std::size_t len) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) h = (h ^ p[i]) * 0x100000001b3ull;
  return static_cast<std::uint32_t>(h >> (64 - kHashLog));
}

/// Greedy hash-chain parse over `n` elements of `k` bytes. At each position the
/// longest match of at least `min_match` elements wins; equal lengths keep the
/// nearest candidate. Matches may overlap the current position.
inline Parse parse(ByteView data, std::size_t k, const MatchParams& mp) {
  const std::size_t n = k ? data.size() / k : 0;
  const std::size_t window = std::size_t{1} << mp.window_log;
  const std::size_t mm = mp.min_match;
  constexpr std::uint32_t kNone = 0xFFFFFFFF;
  std::vector<std::uint32_t> head(std::size_t{1} << kHashLog, kNone);
  std::vector<std::uint32_t> prev(n, kNone);
  auto elem = [&](std::size_t i) { return data.data() + i * k; };
  auto insert = [&](std::size_t i) {
    if (i + mm > n) return;
    auto h = hash_bytes(elem(i), mm * k);
    prev[i] = head[h];
    head[h] = static_cast<std::uint32_t>(i);
  };

  Parse out;
  std::size_t anchor = 0, i = 0;
  while (i < n) {
    std::size_t best_len = 0, best_off = 0;
    if (i + mm <= n) {
      auto cand = head[hash_bytes(elem(i), mm * k)];
      for (std::uint32_t depth = 0; cand != kNone && depth < mp.chain_depth; ++depth, cand = prev[cand]) {
        std::size_t off = i - cand;
        if (off > window) break;
        std::size_t len = 0;
        while (i + len < n && std::memcmp(elem(cand + len), elem(i + len), k) == 0) ++len;
        if (len > best_len) {
          best_len = len;
          best_off = off;
        }
      }
    }
    if (best_len >= mm) {
      out.sequences.push_back({static_cast<std::uint32_t>(i - anchor), static_cast<std::uint32_t>(best_len),
                               static_cast<std::uint32_t>(best_off)});
      out.literals.insert(out.literals.end(), elem(anchor), elem(i));
      for (std::size_t j = i; j < i + best_len; ++j) insert(j);
      i += best_len;
      anchor = i;
    } else {
      insert(i);
      ++i;
    }
  }
  if (anchor < n) {
    out.sequences.push_back({static_cast<std::uint32_t>(n - anchor), 0, 0});
    out.literals.insert(out.literals.end(), elem(anchor), elem(n));
  }
  return out;
}

/// Replays sequences over `k`-byte elements. Validates every offset and run
/// against what has been produced so far.
inline Bytes replay(ByteView literals, std::size_t k, const std::vector<Sequence>& seqs, DecodeLimits& limits) {
  std::uint64_t total = 0, lit_total = 0;
  for (const auto& s : seqs) {
    if ((s.match_length == 0) != (s.offset == 0)) fail(Errc::corrupt, "lz: inconsistent sequence");
    total += std::uint64_t{s.literal_run} + s.match_length;
    lit_total += s.literal_run;
  }
  if (lit_total * k != literals.size()) fail(Errc::corrupt, "lz: literal count mismatch");
  limits.charge(total, k);
  Bytes out;
  out.reserve(total * k);
  std::size_t lit = 0;
  for (const auto& s : seqs) {
    std::size_t run = std::size_t{s.literal_run} * k;
    out.insert(out.end(), literals.begin() + lit, literals.begin() + lit + run);
    lit += run;
    std::size_t produced = out.size() / k;
    if (s.offset > produced) fail(Errc::corrupt, "lz: offset exceeds history");
    std::size_t src = (produced - s.offset) * k;
    for (std::size_t b = 0; b < std::size_t{s.match_length} * k; ++b) out.push_back(out[src + b]);
  }
  return out;
}

inline MatchParams match_params(const Params& p, std::int64_t default_min_match) {
  MatchParams mp;
  auto mm = p.get_int("min_match", default_min_match);
  auto wl = p.get_int("window_log", 20);
  if (mm < 1 || mm > 1024) fail(Errc::codec_precondition, "lz: min_match must be in 1..1024");
  if (wl < 1 || wl > 30) fail(Errc::codec_precondition, "lz: window_log must be in 1..30");
  mp.min_match = static_cast<std::uint32_t>(mm);
  mp.window_log = static_cast<std::uint32_t>(wl);
  return mp;
}

inline void append_sequence_streams(Encoded& e, const std::vector<Sequence>& seqs) {
  std::vector<std::uint64_t> runs, lens, offs;
  for (const auto& s : seqs) {
    runs.push_back(s.literal_run);
    lens.push_back(s.match_length);
    offs.push_back(s.offset);
  }
  e.outputs.push_back(Stream::numeric(4, runs));
  e.outputs.push_back(Stream::numeric(4, lens));
  e.outputs.push_back(Stream::numeric(4, offs));
}

inline std::vector<Sequence> read_sequence_streams(StreamSpan s) {
  if (s[0].count != s[1].count || s[0].count != s[2].count)
    fail(Errc::corrupt, "lz: sequence streams differ in size");
  std::vector<Sequence> seqs(s[0].count);
  for (std::size_t i = 0; i < seqs.size(); ++i)
    seqs[i] = {static_cast<std::uint32_t>(s[0].value(i)), static_cast<std::uint32_t>(s[1].value(i)),
               static_cast<std::uint32_t>(s[2].value(i))};
  return seqs;
}

inline void check_lz_size(std::uint64_t n) {
  if (n > 0xFFFFFFFFull) fail(Errc::codec_precondition, "lz: input too large");
}

// --- field_lz --------------------------------------------------------------------

inline Encoded field_lz_encode(StreamSpan in, const Params& p) {
  const auto& s = in[0];
  check_lz_size(s.count);
  auto k = s.type.element_size();
  auto parsed = parse(s.content, k, match_params(p, 2));
  Encoded e;
  e.outputs.push_back(Stream::fixed(s.type, std::move(parsed.literals)));
  append_sequence_streams(e, parsed.sequences);
  return e;
}

inline std::vector<TypePattern> field_lz_patterns(PatternSpan in, const Params&) {
  return {in[0], numeric_port(4), numeric_port(4), numeric_port(4)};
}

inline std::vector<StreamType> field_lz_types(TypeSpan in, ByteView h) {
  require(h.empty(), Errc::corrupt, "unexpected node header");
  auto n4 = StreamType::numeric(4);
  return {in[0], n4, n4, n4};
}

inline std::vector<Stream> field_lz_decode(StreamSpan out, ByteView, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 4, "field_lz");
  auto bytes = replay(out[0].content, in[0].element_size(), read_sequence_streams(out.subspan(1)), limits);
  return {Stream::fixed(in[0], std::move(bytes))};
}

// --- byte_lz -----------------------------------------------------------------------

inline Encoded byte_lz_encode(StreamSpan in, const Params& p) {
  const auto& s = in[0];
  check_lz_size(s.content.size());
  auto parsed = parse(s.content, 1, match_params(p, 4));
  Encoded e;
  e.outputs.push_back(Stream::serial(std::move(parsed.literals)));
  append_sequence_streams(e, parsed.sequences);
  if (s.type.kind == Kind::strings) {
    check_lz_size(s.count);
    e.outputs.push_back(Stream::numeric(4, std::vector<std::uint64_t>(s.lengths.begin(), s.lengths.end())));
  }
  return e;
}

inline std::vector<TypePattern> byte_lz_patterns(PatternSpan in, const Params&) {
  std::vector<TypePattern> out{kSerialPort, numeric_port(4), numeric_port(4), numeric_port(4)};
  if (in[0] == kStringsPort) out.push_back(numeric_port(4));
  return out;
}

inline std::vector<StreamType> byte_lz_types(TypeSpan in, ByteView h) {
  require(h.empty(), Errc::corrupt, "unexpected node header");
  auto n4 = StreamType::numeric(4);
  std::vector<StreamType> out{StreamType::serial(), n4, n4, n4};
  if (in[0].kind == Kind::strings) out.push_back(n4);
  return out;
}

inline std::vector<Stream> byte_lz_decode(StreamSpan out, ByteView, TypeSpan in, DecodeLimits& limits) {
  bool strings = in[0].kind == Kind::strings;
  require_outputs(out, strings ? 5 : 4, "byte_lz");
  auto bytes = replay(out[0].content, 1, read_sequence_streams(out.subspan(1, 3)), limits);
  if (!strings) {
    if (bytes.size() % in[0].element_size()) fail(Errc::corrupt, "byte_lz: content not a multiple of width");
    return {Stream::fixed(in[0], std::move(bytes))};
  }
  const auto& lens = out[4];
  limits.charge(lens.count, 4);
  std::vector<std::uint32_t> lengths(lens.count);
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < lens.count; ++i) {
    lengths[i] = static_cast<std::uint32_t>(lens.value(i));
    sum += lengths[i];
  }
  if (sum != bytes.size()) fail(Errc::corrupt, "byte_lz: string lengths do not cover content");
  return {Stream::strings(std::move(bytes), std::move(lengths))};
}

}  // namespace lz

inline std::vector<CodecSpec> lz_codecs() {
  using namespace lz;
  const TypePattern recordlike{std::uint8_t(TypePattern::bit(Kind::record) | TypePattern::bit(Kind::numeric)), 0};
  return {
      {kFieldLz, "field_lz", {recordlike}, false,
       "record(k)|numeric(k) -> literals, numeric(4) x 3 (runs, match lengths, offsets)", field_lz_encode,
       field_lz_patterns, field_lz_types, field_lz_decode},
      {kByteLz, "byte_lz", {TypePattern::any()}, false,
       "T -> serial literals, numeric(4) x 3 [, numeric(4) lengths for strings]", byte_lz_encode, byte_lz_patterns,
       byte_lz_types, byte_lz_decode},
  };
}

}  // namespace graphzip::codecs
