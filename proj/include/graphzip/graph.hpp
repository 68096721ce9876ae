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

// Compressor graphs: DAGs of codec nodes and function-graph nodes, plus
// static validation.

#pragma once

#include <string>
#include <vector>

#include "graphzip/resolved.hpp"

namespace graphzip {

/// Port address. `node == kRoot` refers to the graph's root inputs.
struct PortRef {
  static constexpr int kRoot = -1;
  int node = kRoot;
  std::uint32_t port = 0;
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

struct Edge {
  PortRef src;
  PortRef dst;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A named graph plus its parameters: a standard graph, a selector, or a
/// graph defined by a configuration.
struct GraphRef {
  std::string name;
  Params params;
  friend bool operator==(const GraphRef&, const GraphRef&) = default;
};

struct GraphNode {
  enum class Kind { codec, selector, graph };
  Kind kind = Kind::codec;
  std::uint32_t wire_id = 0;         // codec
  GraphRef ref;                      // selector / graph
  std::vector<GraphRef> candidates;  // selector
  Params params;                     // codec
  friend bool operator==(const GraphNode&, const GraphNode&) = default;

  bool is_sink() const { return kind != Kind::codec; }
};

/// A compressor description. Selector and graph nodes are sinks with variadic
/// inputs; at compression time they expand into the subgraph they choose.
struct CompressorGraph {
  std::vector<TypePattern> root_types;
  std::vector<GraphNode> nodes;
  std::vector<Edge> edges;
  friend bool operator==(const CompressorGraph&, const CompressorGraph&) = default;

  static PortRef input(std::uint32_t i) { return {PortRef::kRoot, i}; }

  int add_codec(std::uint32_t wire_id, Params p = {}) {
    GraphNode n;
    n.kind = GraphNode::Kind::codec;
    n.wire_id = wire_id;
    n.params = std::move(p);
    return push(std::move(n));
  }

  int add_codec(std::string_view name, Params p = {}) {
    const auto* spec = registry().find(name);
    if (!spec) fail(Errc::unknown_codec, "unknown codec '" + std::string(name) + "'");
    return add_codec(spec->wire_id, std::move(p));
  }

  int add_graph(std::string name, Params p = {}) {
    GraphNode n;
    n.kind = GraphNode::Kind::graph;
    n.ref = {std::move(name), std::move(p)};
    return push(std::move(n));
  }

  int add_selector(std::string name, std::vector<GraphRef> candidates, Params p = {}) {
    GraphNode n;
    n.kind = GraphNode::Kind::selector;
    n.ref = {std::move(name), std::move(p)};
    n.candidates = std::move(candidates);
    return push(std::move(n));
  }

  void connect(PortRef src, PortRef dst) { edges.push_back({src, dst}); }
  void connect(PortRef src, int node, std::uint32_t port = 0) { edges.push_back({src, {node, port}}); }

  /// Routes every root input, in order, into ports 0.. of `node`.
  void feed_roots(int node) {
    for (std::uint32_t i = 0; i < root_types.size(); ++i) connect(input(i), node, i);
  }

 private:
  int push(GraphNode n) {
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size() - 1);
  }
};

/// Graph applying the named graph to inputs of the given types.
inline CompressorGraph ref_graph(const std::vector<StreamType>& types, GraphRef ref) {
  CompressorGraph g;
  for (const auto& t : types) g.root_types.push_back(TypePattern::exactly(t));
  int n = g.add_graph(std::move(ref.name), std::move(ref.params));
  g.feed_roots(n);
  return g;
}

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

struct GraphShape {
  std::vector<std::vector<const Edge*>> in_edges;  // per node, indexed by port
  std::vector<std::size_t> order;                  // topological
  bool ok = false;
};

inline std::string port_name(PortRef p) {
  if (p.node == PortRef::kRoot) return "root input " + std::to_string(p.port);
  return "node " + std::to_string(p.node) + " port " + std::to_string(p.port);
}

/// Structural checks shared by validation and execution.
inline GraphShape shape_of(const CompressorGraph& g, ValidationReport& report) {
  GraphShape sh;
  const auto n = g.nodes.size();
  sh.in_edges.resize(n);
  std::vector<std::pair<std::size_t, std::size_t>> deps;
  std::size_t before = report.violations.size();
  for (const auto& e : g.edges) {
    bool bad = false;
    if (e.src.node == PortRef::kRoot) {
      if (e.src.port >= g.root_types.size()) {
        report.violations.push_back("edge source " + port_name(e.src) + " does not exist");
        bad = true;
      }
    } else if (e.src.node < 0 || static_cast<std::size_t>(e.src.node) >= n) {
      report.violations.push_back("edge source node " + std::to_string(e.src.node) + " does not exist");
      bad = true;
    }
    if (e.dst.node < 0 || static_cast<std::size_t>(e.dst.node) >= n) {
      report.violations.push_back("edge target node " + std::to_string(e.dst.node) + " does not exist");
      bad = true;
    }
    if (bad) continue;
    auto& ins = sh.in_edges[static_cast<std::size_t>(e.dst.node)];
    if (ins.size() <= e.dst.port) ins.resize(e.dst.port + 1, nullptr);
    if (ins[e.dst.port]) {
      report.violations.push_back(port_name(e.dst) + " has more than one incoming edge");
      continue;
    }
    ins[e.dst.port] = &e;
    if (e.src.node != PortRef::kRoot)
      deps.emplace_back(static_cast<std::size_t>(e.src.node), static_cast<std::size_t>(e.dst.node));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = g.nodes[i];
    std::size_t arity = sh.in_edges[i].size();
    if (node.kind == GraphNode::Kind::codec) {
      const auto* spec = registry().find(node.wire_id);
      if (!spec) {
        report.violations.push_back("node " + std::to_string(i) + ": unknown codec wire id " +
                                    std::to_string(node.wire_id));
        continue;
      }
      if (!spec->variadic) arity = std::max(arity, spec->inputs.size());
      if (!spec->accepts_arity(arity))
        report.violations.push_back("node " + std::to_string(i) + " (" + spec->name + "): wrong number of inputs");
      sh.in_edges[i].resize(arity, nullptr);
    } else if (node.ref.name.empty()) {
      report.violations.push_back("node " + std::to_string(i) + ": unnamed graph reference");
    }
    for (std::size_t p = 0; p < sh.in_edges[i].size(); ++p)
      if (!sh.in_edges[i][p])
        report.violations.push_back(port_name({static_cast<int>(i), static_cast<std::uint32_t>(p)}) +
                                    " has no incoming edge");
  }
  try {
    sh.order = topo_sort(n, deps);
  } catch (const Error&) {
    report.violations.push_back("graph contains a cycle");
  }
  sh.ok = report.violations.size() == before;
  return sh;
}

}  // namespace detail

/// Validates DAG shape, single-producer inputs, single-consumer outputs and
/// static port-type compatibility.
inline ValidationReport validate_graph(const CompressorGraph& g) {
  ValidationReport report;
  auto sh = detail::shape_of(g, report);
  if (!sh.ok) return report;
  std::vector<std::vector<TypePattern>> out_patterns(g.nodes.size());
  std::vector<std::vector<int>> uses(g.nodes.size());
  std::vector<int> root_uses(g.root_types.size(), 0);
  for (auto i : sh.order) {
    const auto& node = g.nodes[i];
    std::vector<TypePattern> in;
    bool known = true;
    for (const auto* e : sh.in_edges[i]) {
      if (e->src.node == PortRef::kRoot) {
        if (++root_uses[e->src.port] > 1)
          report.violations.push_back(detail::port_name(e->src) + " is consumed more than once");
        in.push_back(g.root_types[e->src.port]);
        continue;
      }
      auto src = static_cast<std::size_t>(e->src.node);
      if (e->src.port >= out_patterns[src].size()) {
        report.violations.push_back("edge source " + detail::port_name(e->src) + " does not exist");
        known = false;
        continue;
      }
      auto& u = uses[src];
      if (u.size() <= e->src.port) u.resize(e->src.port + 1, 0);
      if (++u[e->src.port] > 1)
        report.violations.push_back(detail::port_name(e->src) + " is consumed more than once");
      in.push_back(out_patterns[src][e->src.port]);
    }
    if (!known || node.is_sink()) continue;
    const auto& spec = registry().at(node.wire_id);
    for (std::size_t p = 0; p < in.size(); ++p)
      if (!in[p].intersects(spec.input_pattern(p)))
        report.violations.push_back("type mismatch on edge into node " + std::to_string(i) + " (" + spec.name +
                                    ") port " + std::to_string(p) + ": " + in[p].to_string() + " cannot feed " +
                                    spec.input_pattern(p).to_string());
    try {
      out_patterns[i] = spec.out_patterns(in, node.params);
    } catch (const Error& e) {
      report.violations.push_back("node " + std::to_string(i) + " (" + spec.name + "): " + e.what());
    }
  }
  return report;
}

}  // namespace graphzip
