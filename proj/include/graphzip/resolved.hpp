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

// Resolved graphs: the selector-free trace of one compression, and the
// universal decoder that inverts it.

#pragma once

#include <optional>
#include <queue>

#include "graphzip/registry.hpp"

namespace graphzip {

/// Limits applied while compressing or decoding.
struct Budget {
  std::uint64_t max_nodes = 10000;
  std::uint64_t max_expansion_depth = 64;
  std::uint64_t max_total_stream_bytes = std::uint64_t{1} << 30;

  /// Default compression budget for an input of `input_bytes`.
  static Budget for_input(std::uint64_t input_bytes) {
    Budget b;
    b.max_total_stream_bytes = std::max<std::uint64_t>(64 * input_bytes, std::uint64_t{1} << 20);
    return b;
  }
};

struct ResolvedNode {
  std::uint32_t wire_id = 0;
  Bytes header;
  std::vector<std::uint64_t> inputs;
  std::vector<std::uint64_t> outputs;
  friend bool operator==(const ResolvedNode&, const ResolvedNode&) = default;
};

/// Streams 0..root_types.size()-1 are the root inputs; node outputs follow.
struct ResolvedGraph {
  std::vector<StreamType> root_types;
  std::vector<ResolvedNode> nodes;
  std::vector<StreamType> stream_types;
  std::vector<std::uint64_t> leaves;
  friend bool operator==(const ResolvedGraph&, const ResolvedGraph&) = default;
};

/// Kahn's algorithm over `n` vertices; among ready vertices the smallest index
/// goes first. Throws Errc::graph_invalid on a cycle.
inline std::vector<std::size_t> topo_sort(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& deps) {
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (auto [from, to] : deps) {
    succ[from].push_back(to);
    ++indegree[to];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (!indegree[i]) ready.push(i);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    auto v = ready.top();
    ready.pop();
    order.push_back(v);
    for (auto s : succ[v])
      if (--indegree[s] == 0) ready.push(s);
  }
  if (order.size() != n) fail(Errc::graph_invalid, "cycle detected");
  return order;
}

/// Encode order of the resolved nodes: a node follows every producer of its inputs.
inline std::vector<std::size_t> topological_order(const ResolvedGraph& g) {
  std::vector<std::int64_t> producer(g.stream_types.size(), -1);
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (auto s : g.nodes[i].outputs) {
      if (s >= producer.size()) fail(Errc::graph_invalid, "output stream index out of range");
      producer[s] = static_cast<std::int64_t>(i);
    }
  std::vector<std::pair<std::size_t, std::size_t>> deps;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (auto s : g.nodes[i].inputs) {
      if (s >= producer.size()) fail(Errc::graph_invalid, "input stream index out of range");
      if (producer[s] >= 0) deps.emplace_back(static_cast<std::size_t>(producer[s]), i);
    }
  return topo_sort(g.nodes.size(), deps);
}

/// Checks a resolved graph against the codec registry: known codecs, stream
/// indices produced exactly once and consumed at most once, types consistent
/// with decode-side typing, acyclic, and leaves equal to the unconsumed streams.
inline void validate_resolved(const ResolvedGraph& g, const CodecRegistry& reg = registry()) {
  const auto n = g.stream_types.size();
  if (g.root_types.size() > n) fail(Errc::graph_invalid, "fewer streams than roots");
  for (std::size_t i = 0; i < g.root_types.size(); ++i)
    if (!(g.root_types[i] == g.stream_types[i])) fail(Errc::graph_invalid, "root type mismatch");
  std::vector<char> produced(n, 0), consumed(n, 0);
  for (std::size_t i = 0; i < g.root_types.size(); ++i) produced[i] = 1;
  for (const auto& node : g.nodes)
    for (auto s : node.outputs) {
      if (s >= n || produced[s]) fail(Errc::graph_invalid, "stream produced twice or out of range");
      produced[s] = 1;
    }
  for (std::size_t s = 0; s < n; ++s)
    if (!produced[s]) fail(Errc::graph_invalid, "stream " + std::to_string(s) + " has no producer");
  auto order = topological_order(g);
  for (auto i : order) {
    const auto& node = g.nodes[i];
    const auto& spec = reg.at(node.wire_id);
    if (!spec.accepts_arity(node.inputs.size())) fail(Errc::graph_invalid, std::string(spec.name) + ": bad arity");
    std::vector<StreamType> in;
    for (std::size_t p = 0; p < node.inputs.size(); ++p) {
      auto s = node.inputs[p];
      if (consumed[s]) fail(Errc::graph_invalid, "stream " + std::to_string(s) + " consumed twice");
      consumed[s] = 1;
      if (!spec.input_pattern(p).matches(g.stream_types[s]))
        fail(Errc::graph_invalid, std::string(spec.name) + ": input type mismatch");
      in.push_back(g.stream_types[s]);
    }
    auto out = spec.out_types(in, node.header);
    if (out.size() != node.outputs.size()) fail(Errc::graph_invalid, std::string(spec.name) + ": output count mismatch");
    for (std::size_t p = 0; p < out.size(); ++p)
      if (!(out[p] == g.stream_types[node.outputs[p]]))
        fail(Errc::graph_invalid, std::string(spec.name) + ": output type mismatch");
  }
  std::vector<std::uint64_t> leaves;
  for (std::size_t s = 0; s < n; ++s)
    if (!consumed[s]) leaves.push_back(s);
  if (leaves != g.leaves) fail(Errc::graph_invalid, "leaf set does not match unconsumed streams");
}

/// Universal decoder: runs codec decoders in reverse topological order and
/// returns the regenerated root streams.
inline std::vector<Stream> decompress_resolved(const ResolvedGraph& g, std::vector<Stream> leaves, DecodeLimits& limits,
                                               const CodecRegistry& reg = registry()) {
  validate_resolved(g, reg);
  if (leaves.size() != g.leaves.size()) fail(Errc::graph_invalid, "leaf count mismatch");
  std::vector<std::optional<Stream>> slots(g.stream_types.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    leaves[i].check();
    if (!(leaves[i].type == g.stream_types[g.leaves[i]])) fail(Errc::graph_invalid, "leaf type mismatch");
    slots[g.leaves[i]] = std::move(leaves[i]);
  }
  auto order = topological_order(g);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& node = g.nodes[*it];
    const auto& spec = reg.at(node.wire_id);
    std::vector<Stream> outs;
    outs.reserve(node.outputs.size());
    for (auto s : node.outputs) {
      if (!slots[s]) fail(Errc::corrupt, "missing stream " + std::to_string(s));
      outs.push_back(std::move(*slots[s]));
      slots[s].reset();
    }
    std::vector<StreamType> in_types;
    for (auto s : node.inputs) in_types.push_back(g.stream_types[s]);
    std::vector<Stream> ins;
    try {
      ins = spec.decode(outs, node.header, in_types, limits);
    } catch (const Error& e) {
      if (e.code() == Errc::invalid_argument) fail(Errc::corrupt, std::string(spec.name) + ": " + e.what());
      throw;
    }
    if (ins.size() != node.inputs.size()) fail(Errc::corrupt, std::string(spec.name) + ": wrong decoded arity");
    for (std::size_t p = 0; p < ins.size(); ++p) {
      ins[p].check();
      if (!(ins[p].type == in_types[p])) fail(Errc::corrupt, std::string(spec.name) + ": decoded type mismatch");
      slots[node.inputs[p]] = std::move(ins[p]);
    }
  }
  std::vector<Stream> roots;
  for (std::size_t i = 0; i < g.root_types.size(); ++i) {
    if (!slots[i]) fail(Errc::corrupt, "root stream not regenerated");
    roots.push_back(std::move(*slots[i]));
  }
  return roots;
}

inline std::vector<Stream> decompress_resolved(const ResolvedGraph& g, std::vector<Stream> leaves,
                                               const Budget& limits = {}) {
  DecodeLimits dl(limits.max_total_stream_bytes);
  return decompress_resolved(g, std::move(leaves), dl);
}

}  // namespace graphzip
