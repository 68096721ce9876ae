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

// Self-describing frame format.
//
//   frame  := "GMC1" version:varint flags:u8 chunk_count:varint chunk*
//   chunk  := root_count:varint type* node_count:varint node* leaf* crc32c:u32le?
//   type   := tag:u8 width:varint?          (width for record and numeric)
//   node   := wire_id:varint header_len:varint header input_count:varint index:varint*
//   leaf   := type count:varint length:varint* content   (lengths for strings)
//
// Node outputs take consecutive stream indices after the roots, in node order.
// Leaves are the streams no node consumes, in ascending index.

#pragma once

#include <sstream>

#include "graphzip/crc32c.hpp"
#include "graphzip/resolved.hpp"

namespace graphzip {

inline constexpr std::array<std::uint8_t, 4> kFrameMagic = {'G', 'M', 'C', '1'};
inline constexpr std::uint8_t kFlagChecksum = 0x01;

struct FrameOptions {
  bool checksum = false;
};

// --- sizes ---------------------------------------------------------------------

inline std::uint64_t type_record_size(StreamType t) {
  return 1 + (t.kind == Kind::record || t.kind == Kind::numeric ? varint_size(t.width) : 0);
}

inline std::uint64_t node_record_size(std::uint32_t wire_id, std::size_t header_size,
                                      const std::vector<std::uint64_t>& inputs) {
  std::uint64_t n = varint_size(wire_id) + varint_size(header_size) + header_size + varint_size(inputs.size());
  for (auto i : inputs) n += varint_size(i);
  return n;
}

inline std::uint64_t leaf_record_size(const Stream& s) {
  std::uint64_t n = type_record_size(s.type) + varint_size(s.count) + s.content.size();
  for (auto l : s.lengths) n += varint_size(l);
  return n;
}

// --- writing ---------------------------------------------------------------------

inline void put_type(Bytes& out, StreamType t) {
  out.push_back(static_cast<std::uint8_t>(t.kind));
  if (t.kind == Kind::record || t.kind == Kind::numeric) put_varint(out, t.width);
}

/// CRC32C over the regenerated roots: each root's content, followed by its
/// element lengths as u32le when it is a strings stream.
inline std::uint32_t content_checksum(std::span<const Stream> roots) {
  Crc32c crc;
  for (const auto& r : roots) {
    crc.update(r.content);
    for (auto l : r.lengths) {
      std::uint8_t b[4];
      store_le(b, 4, l);
      crc.update(ByteView(b, 4));
    }
  }
  return crc.value();
}

inline void write_chunk(Bytes& out, const ResolvedGraph& g, const std::vector<Stream>& leaves, bool checksum) {
  validate_resolved(g);
  if (leaves.size() != g.leaves.size()) fail(Errc::invalid_argument, "leaf/graph mismatch: leaf count");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    leaves[i].check();
    if (!(leaves[i].type == g.stream_types[g.leaves[i]]))
      fail(Errc::invalid_argument, "leaf/graph mismatch: leaf " + std::to_string(i) + " type");
  }
  put_varint(out, g.root_types.size());
  for (const auto& t : g.root_types) put_type(out, t);
  put_varint(out, g.nodes.size());
  std::uint64_t next = g.root_types.size();
  for (const auto& node : g.nodes) {
    for (auto in : node.inputs)
      if (in >= next) fail(Errc::invalid_argument, "nodes are not in encode order");
    for (auto o : node.outputs)
      if (o != next++) fail(Errc::invalid_argument, "node outputs are not consecutively numbered");
    put_varint(out, node.wire_id);
    put_varint(out, node.header.size());
    out.insert(out.end(), node.header.begin(), node.header.end());
    put_varint(out, node.inputs.size());
    for (auto in : node.inputs) put_varint(out, in);
  }
  for (const auto& leaf : leaves) {
    put_type(out, leaf.type);
    put_varint(out, leaf.count);
    for (auto l : leaf.lengths) put_varint(out, l);
    out.insert(out.end(), leaf.content.begin(), leaf.content.end());
  }
  if (checksum) {
    auto roots = decompress_resolved(g, leaves);
    append_le(out, 4, content_checksum(roots));
  }
}

inline void write_frame_header(Bytes& out, std::uint64_t chunks, bool checksum) {
  out.insert(out.end(), kFrameMagic.begin(), kFrameMagic.end());
  put_varint(out, kFormatVersion);
  out.push_back(checksum ? kFlagChecksum : 0);
  put_varint(out, chunks);
}

/// Serializes one resolved graph and its leaf payloads as a single-chunk frame.
inline Bytes write_frame(const ResolvedGraph& g, const std::vector<Stream>& leaves, FrameOptions opts = {}) {
  Bytes out;
  write_frame_header(out, 1, opts.checksum);
  write_chunk(out, g, leaves, opts.checksum);
  return out;
}

// --- parsing ---------------------------------------------------------------------

struct ParsedChunk {
  ResolvedGraph graph;
  std::vector<Stream> leaves;
  std::optional<std::uint32_t> checksum;
};

struct ParsedFrame {
  std::uint64_t version = 0;
  bool checksum = false;
  std::vector<ParsedChunk> chunks;
};

namespace detail {

inline StreamType read_type(ByteReader& r) {
  auto tag = r.u8();
  switch (tag) {
    case 0: return StreamType::serial();
    case 3: return StreamType::strings();
    case 1: {
      auto k = r.varint();
      if (k < 1 || k > 0xFFFFFFFFull) fail(Errc::corrupt, "invalid record width");
      return StreamType::record(k);
    }
    case 2: {
      auto w = r.varint();
      if (!valid_numeric_width(w)) fail(Errc::corrupt, "invalid numeric width");
      return StreamType::numeric(w);
    }
    default: fail(Errc::corrupt, "unknown stream type tag " + std::to_string(tag));
  }
}

inline ParsedChunk read_chunk(ByteReader& r, bool checksum, const Budget& limits, const CodecRegistry& reg) {
  ParsedChunk c;
  auto& g = c.graph;
  auto roots = r.varint_max(r.remaining(), "root count");
  for (std::uint64_t i = 0; i < roots; ++i) g.root_types.push_back(read_type(r));
  g.stream_types = g.root_types;
  std::vector<char> consumed(roots, 0);
  auto nodes = r.varint();
  if (nodes > limits.max_nodes) fail(Errc::limit_exceeded, "node count exceeds the limit");
  if (nodes > r.remaining()) fail(Errc::truncated, "unexpected end of data");
  for (std::uint64_t i = 0; i < nodes; ++i) {
    ResolvedNode node;
    auto id = r.varint();
    const auto& spec = reg.at(id);
    node.wire_id = spec.wire_id;
    auto hlen = r.varint();
    if (hlen > r.remaining()) fail(Errc::truncated, "unexpected end of data");
    auto h = r.take(static_cast<std::size_t>(hlen));
    node.header.assign(h.begin(), h.end());
    auto nin = r.varint_max(r.remaining(), "input count");
    if (!spec.accepts_arity(nin)) fail(Errc::graph_invalid, std::string(spec.name) + ": bad arity");
    std::vector<StreamType> in_types;
    for (std::uint64_t p = 0; p < nin; ++p) {
      auto s = r.varint();
      if (s >= g.stream_types.size()) fail(Errc::graph_invalid, "input references an unproduced stream");
      if (consumed[s]) fail(Errc::graph_invalid, "stream consumed twice");
      consumed[s] = 1;
      if (!spec.input_pattern(p).matches(g.stream_types[s]))
        fail(Errc::graph_invalid, std::string(spec.name) + ": input type mismatch");
      node.inputs.push_back(s);
      in_types.push_back(g.stream_types[s]);
    }
    std::vector<StreamType> out;
    try {
      out = spec.out_types(in_types, node.header);
    } catch (const Error& e) {
      if (e.code() == Errc::invalid_argument) fail(Errc::corrupt, std::string(spec.name) + ": " + e.what());
      throw;
    }
    for (const auto& t : out) {
      node.outputs.push_back(g.stream_types.size());
      g.stream_types.push_back(t);
      consumed.push_back(0);
    }
    g.nodes.push_back(std::move(node));
  }
  for (std::size_t s = 0; s < g.stream_types.size(); ++s) {
    if (consumed[s]) continue;
    g.leaves.push_back(s);
    Stream leaf;
    leaf.type = read_type(r);
    if (!(leaf.type == g.stream_types[s])) fail(Errc::corrupt, "leaf type does not match the graph");
    leaf.count = r.varint();
    std::uint64_t bytes = 0;
    if (leaf.type.kind == Kind::strings) {
      if (leaf.count > r.remaining()) fail(Errc::truncated, "unexpected end of data");
      leaf.lengths.reserve(leaf.count);
      for (std::uint64_t i = 0; i < leaf.count; ++i) {
        auto l = r.varint_max(0xFFFFFFFF, "string length");
        leaf.lengths.push_back(static_cast<std::uint32_t>(l));
        bytes += l;
      }
    } else {
      auto es = leaf.type.element_size();
      if (leaf.count > r.remaining() / es) fail(Errc::truncated, "unexpected end of data");
      bytes = leaf.count * es;
    }
    if (bytes > r.remaining()) fail(Errc::truncated, "unexpected end of data");
    auto content = r.take(static_cast<std::size_t>(bytes));
    leaf.content.assign(content.begin(), content.end());
    c.leaves.push_back(std::move(leaf));
  }
  if (checksum) c.checksum = static_cast<std::uint32_t>(r.fixed_le(4));
  return c;
}

}  // namespace detail

/// Parses frame structure and leaf payloads without running any decoder.
inline ParsedFrame parse_frame(ByteView bytes, const Budget& limits = {}, const CodecRegistry* reg = nullptr) {
  ByteReader r(bytes);
  ParsedFrame f;
  if (bytes.size() < kFrameMagic.size() || !std::equal(kFrameMagic.begin(), kFrameMagic.end(), bytes.begin()))
    fail(Errc::bad_magic, "not a graphzip frame (bad magic)");
  r.take(kFrameMagic.size());
  f.version = r.varint();
  if (f.version != kFormatVersion)
    fail(Errc::unsupported_version, "unsupported format version " + std::to_string(f.version));
  const auto& registry_v = reg ? *reg : registry(f.version);
  auto flags = r.u8();
  if (flags & ~kFlagChecksum) fail(Errc::corrupt, "undefined frame flag bits set");
  f.checksum = flags & kFlagChecksum;
  auto chunks = r.varint_max(r.remaining(), "chunk count");
  for (std::uint64_t i = 0; i < chunks; ++i) f.chunks.push_back(detail::read_chunk(r, f.checksum, limits, registry_v));
  if (!r.empty()) fail(Errc::corrupt, "trailing bytes after the last chunk");
  return f;
}

/// Universal decoder: regenerates the root streams of every chunk, in order.
inline std::vector<Stream> read_frame(ByteView bytes, const Budget& limits = {}) {
  auto f = parse_frame(bytes, limits);
  DecodeLimits dl(limits.max_total_stream_bytes);
  std::vector<Stream> out;
  for (auto& c : f.chunks) {
    auto roots = decompress_resolved(c.graph, std::move(c.leaves), dl);
    if (c.checksum && *c.checksum != content_checksum(roots))
      fail(Errc::checksum_mismatch, "content checksum mismatch");
    for (auto& r : roots) out.push_back(std::move(r));
  }
  return out;
}

/// Re-serializes a parsed frame; canonical frames reproduce their input bytes.
inline Bytes write_parsed_frame(const ParsedFrame& f) {
  Bytes out;
  write_frame_header(out, f.chunks.size(), f.checksum);
  for (const auto& c : f.chunks) write_chunk(out, c.graph, c.leaves, f.checksum);
  return out;
}

// --- inspection --------------------------------------------------------------------

struct FrameReport {
  struct Node {
    std::uint32_t wire_id;
    std::string codec;
    std::size_t header_bytes;
    std::vector<std::uint64_t> inputs, outputs;
  };
  struct Leaf {
    std::uint64_t index;
    StreamType type;
    std::uint64_t count;
    std::uint64_t bytes;
  };
  struct Chunk {
    std::vector<StreamType> root_types;
    std::vector<Node> nodes;
    std::vector<StreamType> stream_types;
    std::vector<Leaf> leaves;
  };
  std::uint64_t version = 0;
  bool checksum = false;
  std::uint64_t frame_bytes = 0;
  std::vector<Chunk> chunks;

  /// One-line summary per chunk, e.g. "0 nodes, 1 leaf (serial, 3 bytes)".
  std::string summary() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      const auto& ch = chunks[c];
      if (c) os << "; ";
      os << ch.nodes.size() << (ch.nodes.size() == 1 ? " node, " : " nodes, ") << ch.leaves.size()
         << (ch.leaves.size() == 1 ? " leaf" : " leaves");
      if (ch.leaves.size() == 1) os << " (" << ch.leaves[0].type.to_string() << ", " << ch.leaves[0].bytes << " bytes)";
    }
    return os.str();
  }
};

inline FrameReport inspect_frame(ByteView bytes) {
  auto f = parse_frame(bytes);
  FrameReport rep;
  rep.version = f.version;
  rep.checksum = f.checksum;
  rep.frame_bytes = bytes.size();
  for (const auto& c : f.chunks) {
    FrameReport::Chunk ch;
    ch.root_types = c.graph.root_types;
    ch.stream_types = c.graph.stream_types;
    for (const auto& n : c.graph.nodes)
      ch.nodes.push_back({n.wire_id, registry().at(n.wire_id).name, n.header.size(), n.inputs, n.outputs});
    for (std::size_t i = 0; i < c.leaves.size(); ++i)
      ch.leaves.push_back({c.graph.leaves[i], c.leaves[i].type, c.leaves[i].count, c.leaves[i].content.size()});
    rep.chunks.push_back(std::move(ch));
  }
  return rep;
}

}  // namespace graphzip
