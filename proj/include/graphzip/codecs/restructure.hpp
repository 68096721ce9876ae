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

// Data restructuring: dispatch, split and concat.

#pragma once

#include "graphzip/codecs/common.hpp"

namespace graphzip::codecs {

namespace restructure {

inline constexpr std::int64_t kMaxDispatchTargets = 256;

enum DispatchMode : std::uint8_t {
  kDispatchSerial = 0,   // n serial outputs + targets + lengths
  kDispatchStrings = 1,  // n strings outputs (one element per run) + targets
};

/// Routing instructions, as produced by a parser and consumed by dispatch.
struct DispatchPlan {
  std::vector<std::uint8_t> targets;
  std::vector<std::uint32_t> lengths;
};

/// Routes byte runs of `input` to `n` outputs. Kernel for the dispatch codec.
inline std::vector<Stream> dispatch_kernel(ByteView input, const DispatchPlan& plan, unsigned n, DispatchMode mode) {
  std::vector<Stream> outs(n);
  for (auto& o : outs) o.type = mode == kDispatchStrings ? StreamType::strings() : StreamType::serial();
  std::size_t pos = 0;
  for (std::size_t i = 0; i < plan.targets.size(); ++i) {
    auto& o = outs[plan.targets[i]];
    auto len = plan.lengths[i];
    o.content.insert(o.content.end(), input.begin() + pos, input.begin() + pos + len);
    if (mode == kDispatchStrings) o.lengths.push_back(len);
    pos += len;
  }
  for (auto& o : outs) o.count = mode == kDispatchStrings ? o.lengths.size() : o.content.size();
  return outs;
}

inline Encoded dispatch_encode(StreamSpan in, const Params& p) {
  auto n = p.get_int("n", 0);
  auto mode = p.get_int("mode", kDispatchSerial);
  if (n < 1 || n > kMaxDispatchTargets) fail(Errc::codec_precondition, "dispatch: n must be in 1..256");
  if (mode != kDispatchSerial && mode != kDispatchStrings) fail(Errc::codec_precondition, "dispatch: bad mode");
  const auto& targets = p.get_ints("targets");
  const auto& lengths = p.get_ints("lengths");
  if (targets.size() != lengths.size()) fail(Errc::codec_precondition, "dispatch: instruction arrays differ in size");
  DispatchPlan plan;
  plan.targets.reserve(targets.size());
  plan.lengths.reserve(lengths.size());
  std::uint64_t covered = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n) fail(Errc::codec_precondition, "dispatch: target out of range");
    if (lengths[i] < 0 || lengths[i] > 0xFFFFFFFFll ||
        static_cast<std::uint64_t>(lengths[i]) > in[0].content.size() - covered)
      fail(Errc::codec_precondition, "dispatch: coverage mismatch");
    plan.targets.push_back(static_cast<std::uint8_t>(targets[i]));
    plan.lengths.push_back(static_cast<std::uint32_t>(lengths[i]));
    covered += static_cast<std::uint64_t>(lengths[i]);
  }
  if (covered != in[0].content.size()) fail(Errc::codec_precondition, "dispatch: coverage mismatch");
  Encoded e;
  e.outputs = dispatch_kernel(in[0].content, plan, static_cast<unsigned>(n), static_cast<DispatchMode>(mode));
  e.outputs.push_back(Stream::fixed(StreamType::numeric(1), Bytes(plan.targets.begin(), plan.targets.end())));
  if (mode == kDispatchSerial) {
    Stream lens;
    lens.type = StreamType::numeric(4);
    lens.count = plan.lengths.size();
    lens.content.resize(plan.lengths.size() * 4);
    for (std::size_t i = 0; i < plan.lengths.size(); ++i) store_le(&lens.content[i * 4], 4, plan.lengths[i]);
    e.outputs.push_back(std::move(lens));
  }
  put_varint(e.header, static_cast<std::uint64_t>(n));
  e.header.push_back(static_cast<std::uint8_t>(mode));
  return e;
}

inline std::vector<TypePattern> dispatch_patterns(PatternSpan, const Params& p) {
  auto n = p.get_int("n", 0);
  auto mode = p.get_int("mode", kDispatchSerial);
  if (n < 1 || n > kMaxDispatchTargets) fail(Errc::graph_invalid, "dispatch: n must be in 1..256");
  std::vector<TypePattern> out(static_cast<std::size_t>(n), mode == kDispatchStrings ? kStringsPort : kSerialPort);
  out.push_back(numeric_port(1));
  if (mode == kDispatchSerial) out.push_back(numeric_port(4));
  return out;
}

inline std::pair<unsigned, DispatchMode> dispatch_header(ByteView h) {
  auto r = header_reader(h);
  auto n = r.varint_max(kMaxDispatchTargets, "dispatch target count");
  auto mode = r.u8();
  header_done(r);
  if (n < 1 || mode > kDispatchStrings) fail(Errc::corrupt, "invalid dispatch header");
  return {static_cast<unsigned>(n), static_cast<DispatchMode>(mode)};
}

inline std::vector<StreamType> dispatch_types(TypeSpan, ByteView h) {
  auto [n, mode] = dispatch_header(h);
  std::vector<StreamType> out(n, mode == kDispatchStrings ? StreamType::strings() : StreamType::serial());
  out.push_back(StreamType::numeric(1));
  if (mode == kDispatchSerial) out.push_back(StreamType::numeric(4));
  return out;
}

inline std::vector<Stream> dispatch_decode(StreamSpan out, ByteView h, TypeSpan, DecodeLimits& limits) {
  auto [n, mode] = dispatch_header(h);
  require_outputs(out, n + (mode == kDispatchSerial ? 2 : 1), "dispatch");
  const auto& targets = out[n];
  if (mode == kDispatchSerial && out[n + 1].count != targets.count)
    fail(Errc::corrupt, "dispatch instruction streams differ in size");
  std::uint64_t total = 0;
  for (unsigned i = 0; i < n; ++i) total += out[i].content.size();
  limits.charge(total);
  Bytes result;
  result.reserve(total);
  std::vector<std::size_t> byte_pos(n, 0), elem_pos(n, 0);
  for (std::size_t i = 0; i < targets.count; ++i) {
    auto t = targets.content[i];
    if (t >= n) fail(Errc::corrupt, "dispatch target out of range");
    const auto& src = out[t];
    std::uint64_t len;
    if (mode == kDispatchSerial) {
      len = out[n + 1].value(i);
    } else {
      if (elem_pos[t] >= src.lengths.size()) fail(Errc::corrupt, "dispatch output exhausted");
      len = src.lengths[elem_pos[t]++];
    }
    if (len > src.content.size() - byte_pos[t]) fail(Errc::corrupt, "dispatch run exceeds output");
    result.insert(result.end(), src.content.begin() + byte_pos[t], src.content.begin() + byte_pos[t] + len);
    byte_pos[t] += len;
  }
  for (unsigned i = 0; i < n; ++i) {
    if (byte_pos[i] != out[i].content.size()) fail(Errc::corrupt, "dispatch output not fully consumed");
    if (mode == kDispatchStrings && elem_pos[i] != out[i].lengths.size())
      fail(Errc::corrupt, "dispatch output not fully consumed");
  }
  return {Stream::serial(std::move(result))};
}

// --- split -----------------------------------------------------------------

inline Encoded split_encode(StreamSpan in, const Params& p) {
  const auto& sizes = p.get_ints("sizes");
  if (sizes.empty()) fail(Errc::codec_precondition, "split: no segments");
  std::uint64_t total = 0;
  for (auto s : sizes) {
    if (s < 0 || static_cast<std::uint64_t>(s) > in[0].content.size() - total)
      fail(Errc::codec_precondition, "split: sizes do not sum to input length");
    total += static_cast<std::uint64_t>(s);
  }
  if (total != in[0].content.size()) fail(Errc::codec_precondition, "split: sizes do not sum to input length");
  Encoded e;
  put_varint(e.header, sizes.size());
  std::size_t pos = 0;
  for (auto s : sizes) {
    put_varint(e.header, static_cast<std::uint64_t>(s));
    e.outputs.push_back(Stream::serial(Bytes(in[0].content.begin() + pos, in[0].content.begin() + pos + s)));
    pos += static_cast<std::size_t>(s);
  }
  return e;
}

inline std::vector<TypePattern> split_patterns(PatternSpan, const Params& p) {
  auto m = p.get_ints("sizes").size();
  if (m == 0) fail(Errc::graph_invalid, "split: no segments");
  return std::vector<TypePattern>(m, kSerialPort);
}

inline std::vector<std::uint64_t> split_header(ByteView h) {
  auto r = header_reader(h);
  auto m = r.varint_max(h.size(), "split segment count");
  if (m == 0) fail(Errc::corrupt, "split: no segments");
  std::vector<std::uint64_t> sizes(m);
  for (auto& s : sizes) s = r.varint();
  header_done(r);
  return sizes;
}

inline std::vector<StreamType> split_types(TypeSpan, ByteView h) {
  return std::vector<StreamType>(split_header(h).size(), StreamType::serial());
}

inline std::vector<Stream> split_decode(StreamSpan out, ByteView h, TypeSpan, DecodeLimits& limits) {
  auto sizes = split_header(h);
  require_outputs(out, sizes.size(), "split");
  Bytes result;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (out[i].content.size() != sizes[i]) fail(Errc::corrupt, "split segment size mismatch");
    limits.charge(sizes[i]);
    result.insert(result.end(), out[i].content.begin(), out[i].content.end());
  }
  return {Stream::serial(std::move(result))};
}

// --- concat ----------------------------------------------------------------

inline Encoded concat_encode(StreamSpan in, const Params&) {
  Stream joined;
  joined.type = in[0].type;
  Stream sizes;
  sizes.type = StreamType::numeric(4);
  for (const auto& s : in) {
    if (!(s.type == joined.type)) fail(Errc::codec_precondition, "concat: inputs have different types");
    if (s.count > 0xFFFFFFFFull) fail(Errc::codec_precondition, "concat: input too large");
    joined.content.insert(joined.content.end(), s.content.begin(), s.content.end());
    joined.lengths.insert(joined.lengths.end(), s.lengths.begin(), s.lengths.end());
    joined.count += s.count;
    append_le(sizes.content, 4, s.count);
    ++sizes.count;
  }
  Encoded e;
  e.outputs.push_back(std::move(joined));
  e.outputs.push_back(std::move(sizes));
  return e;
}

inline std::vector<TypePattern> concat_patterns(PatternSpan in, const Params&) {
  for (const auto& p : in)
    if (!p.intersects(in[0])) fail(Errc::graph_invalid, "concat: inputs have incompatible types");
  return {in[0], numeric_port(4)};
}

inline std::vector<StreamType> concat_types(TypeSpan in, ByteView h) {
  require(h.empty(), Errc::corrupt, "unexpected node header");
  for (const auto& t : in)
    if (!(t == in[0])) fail(Errc::corrupt, "concat inputs have different types");
  return {in[0], StreamType::numeric(4)};
}

inline std::vector<Stream> concat_decode(StreamSpan out, ByteView, TypeSpan in, DecodeLimits& limits) {
  require_outputs(out, 2, "concat");
  const auto& joined = out[0];
  const auto& sizes = out[1];
  if (sizes.count != in.size()) fail(Errc::corrupt, "concat size table does not match input count");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sizes.count; ++i) total += sizes.value(i);
  if (total != joined.count) fail(Errc::corrupt, "concat sizes do not cover content");
  limits.charge(joined.byte_size());
  std::vector<Stream> result;
  std::size_t elem = 0, byte = 0;
  for (std::size_t i = 0; i < sizes.count; ++i) {
    auto n = sizes.value(i);
    Stream s;
    s.type = in[i];
    s.count = n;
    std::uint64_t nbytes;
    if (in[i].kind == Kind::strings) {
      s.lengths.assign(joined.lengths.begin() + elem, joined.lengths.begin() + elem + n);
      nbytes = 0;
      for (auto l : s.lengths) nbytes += l;
    } else {
      nbytes = n * in[i].element_size();
    }
    s.content.assign(joined.content.begin() + byte, joined.content.begin() + byte + nbytes);
    elem += n;
    byte += nbytes;
    result.push_back(std::move(s));
  }
  return result;
}

}  // namespace restructure

inline std::vector<CodecSpec> restructure_codecs() {
  using namespace restructure;
  return {
      {kDispatch, "dispatch", {kSerialPort}, false, "serial -> n x (serial|strings), numeric(1) [, numeric(4)]",
       dispatch_encode, dispatch_patterns, dispatch_types, dispatch_decode},
      {kSplit, "split", {kSerialPort}, false, "serial -> m x serial", split_encode, split_patterns, split_types,
       split_decode},
      {kConcat, "concat", {TypePattern::any()}, true, "m x T -> T, numeric(4)", concat_encode, concat_patterns,
       concat_types, concat_decode},
  };
}

}  // namespace graphzip::codecs
