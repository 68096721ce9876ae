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

// Compression engine: executes a compressor graph over concrete inputs,
// expands selector and graph nodes, and records the resolved graph.

#pragma once

#include <functional>
#include <map>
#include <optional>

#include "graphzip/frame.hpp"
#include "graphzip/graph.hpp"

namespace graphzip {

/// A backend: a chain of stage names applied to one stream.
struct Pipeline {
  std::vector<std::string> stages;
  friend bool operator==(const Pipeline&, const Pipeline&) = default;
  friend auto operator<=>(const Pipeline&, const Pipeline&) = default;

  std::string to_string() const {
    std::string s;
    for (const auto& st : stages) s += (s.empty() ? "" : ">") + st;
    return s.empty() ? "(empty)" : s;
  }
};

/// Trained grouping of tagged units into clusters, each with its own pipeline.
struct ClusterConfig {
  std::map<std::string, std::uint32_t> assignment;
  std::vector<Pipeline> pipelines;  // indexed by cluster id
  std::optional<std::uint32_t> default_cluster;
  friend bool operator==(const ClusterConfig&, const ClusterConfig&) = default;
};

class Context;

/// Standard graph or selector implemented in code: inspects the concrete
/// inputs (via the context) and returns the subgraph to apply to them.
using Builtin = std::function<CompressorGraph(Context&, const Params&, std::span<const GraphRef> candidates)>;

struct GraphLibrary {
  std::map<std::string, Builtin> builtins;
  std::map<std::string, CompressorGraph> graphs;  // configuration-defined
  std::map<std::string, Pipeline> backends;        // by slot
  std::map<std::string, ClusterConfig> clusters;   // by slot

  bool has(const std::string& name) const { return builtins.count(name) || graphs.count(name); }
};

/// Receives the inputs of every graph or selector node expanded during a real
/// (non-trial) compression.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void observe(const GraphRef& ref, StreamSpan inputs) = 0;
};

struct Compressed {
  ResolvedGraph graph;
  std::vector<Stream> leaves;

  Bytes frame(FrameOptions opts = {}) const { return write_frame(graph, leaves, opts); }
};

class Resolver;

/// What a builtin sees while choosing its subgraph.
class Context {
 public:
  Context(Resolver& r, const std::vector<Stream>& inputs, const std::vector<std::uint64_t>& ids, std::uint64_t depth)
      : r_(r), inputs_(inputs), ids_(ids), depth_(depth) {}

  StreamSpan inputs() const { return inputs_; }
  const std::vector<std::uint64_t>& input_ids() const { return ids_; }
  std::vector<StreamType> input_types() const {
    std::vector<StreamType> t;
    for (const auto& s : inputs_) t.push_back(s.type);
    return t;
  }
  const GraphLibrary& library() const;

  /// Exact frame bytes that applying `g` to the current inputs would add
  /// (node records plus leaf records); nullopt when it fails a precondition
  /// or the budget.
  std::optional<std::uint64_t> measure(const CompressorGraph& g);
  std::optional<std::uint64_t> measure(const GraphRef& ref) { return measure(ref_graph(input_types(), ref)); }

 private:
  Resolver& r_;
  const std::vector<Stream>& inputs_;
  const std::vector<std::uint64_t>& ids_;
  std::uint64_t depth_;
};

class Resolver {
 public:
  Resolver(const GraphLibrary& lib, const Budget& budget, Observer* observer = nullptr)
      : lib_(lib), budget_(budget), observer_(observer) {}

  const GraphLibrary& library() const { return lib_; }

  Compressed run(const CompressorGraph& g, std::vector<Stream> inputs) {
    auto report = validate_graph(g);
    if (!report.ok()) fail(Errc::graph_invalid, report.violations.front());
    std::vector<std::uint64_t> ids;
    for (auto& s : inputs) {
      s.check();
      ids.push_back(add_stream(std::move(s)));
    }
    exec(g, ids, 0, Errc::invalid_argument, "root");
    Compressed out;
    for (std::size_t i = 0; i < ids.size(); ++i) out.graph.root_types.push_back(types_[i]);
    out.graph.nodes = std::move(nodes_);
    out.graph.stream_types = types_;
    for (std::uint64_t id = 0; id < slots_.size(); ++id) {
      if (slots_[id].consumed) continue;
      out.graph.leaves.push_back(id);
      out.leaves.push_back(std::move(*slots_[id].owned));
    }
    return out;
  }

  std::optional<std::uint64_t> measure(const CompressorGraph& g, const std::vector<Stream>& inputs,
                                       const std::vector<std::uint64_t>& ids, std::uint64_t depth) {
    Budget rest = budget_;
    rest.max_nodes = budget_.max_nodes - node_count();
    rest.max_total_stream_bytes = budget_.max_total_stream_bytes - bytes_;
    Resolver trial(lib_, rest, nullptr);
    trial.trial_ = true;
    trial.base_ = next_id();
    for (std::size_t i = 0; i < ids.size(); ++i) trial.external_[ids[i]] = {&inputs[i], false};
    try {
      trial.exec(g, ids, depth + 1, Errc::selector_mismatch, "trial");
    } catch (const Error& e) {
      switch (e.code()) {
        case Errc::codec_precondition:
        case Errc::budget_exceeded:
        case Errc::selector_mismatch: return std::nullopt;
        default: throw;
      }
    }
    return trial.cost();
  }

 private:
  struct Slot {
    std::optional<Stream> owned;
    bool consumed = false;
  };
  struct External {
    const Stream* stream;
    bool consumed;
  };

  std::uint64_t next_id() const { return base_ + slots_.size(); }
  std::uint64_t node_count() const { return nodes_.size(); }

  std::uint64_t add_stream(Stream s) {
    auto sz = s.byte_size();
    if (sz > budget_.max_total_stream_bytes - bytes_) fail(Errc::budget_exceeded, "total stream bytes exceed budget");
    bytes_ += sz;
    types_.push_back(s.type);
    slots_.push_back({std::move(s), false});
    return next_id() - 1;
  }

  void consume(std::uint64_t id) {
    bool* flag;
    if (id >= base_) {
      if (id - base_ >= slots_.size()) fail(Errc::graph_invalid, "stream index out of range");
      flag = &slots_[id - base_].consumed;
    } else {
      auto it = external_.find(id);
      if (it == external_.end()) fail(Errc::graph_invalid, "stream index out of range");
      flag = &it->second.consumed;
    }
    if (*flag) fail(Errc::graph_invalid, "stream " + std::to_string(id) + " consumed twice");
    *flag = true;
  }

  const Stream& peek(std::uint64_t id) const {
    if (id >= base_) return *slots_[id - base_].owned;
    return *external_.at(id).stream;
  }

  /// Moves a local stream out (or copies a borrowed one) for handing to a codec or builtin.
  Stream take(std::uint64_t id) {
    if (id >= base_) return std::move(*slots_[id - base_].owned);
    return *external_.at(id).stream;
  }

  void put_back(std::uint64_t id, Stream s) {
    if (id >= base_) slots_[id - base_].owned = std::move(s);
  }

  std::uint64_t cost() const {
    std::uint64_t c = 0;
    for (const auto& n : nodes_) c += node_record_size(n.wire_id, n.header.size(), n.inputs);
    for (const auto& s : slots_)
      if (!s.consumed) c += leaf_record_size(*s.owned);
    for (const auto& [id, e] : external_)
      if (!e.consumed) c += leaf_record_size(*e.stream);
    return c;
  }

  CompressorGraph expand(const GraphNode& node, const std::vector<Stream>& inputs, const std::vector<std::uint64_t>& ids,
                         std::uint64_t depth) {
    const auto& name = node.ref.name;
    if (auto it = lib_.graphs.find(name); it != lib_.graphs.end()) return it->second;
    auto it = lib_.builtins.find(name);
    if (it == lib_.builtins.end()) fail(Errc::graph_invalid, "unknown graph '" + name + "'");
    Context ctx(*this, inputs, ids, depth);
    return it->second(ctx, node.ref.params, node.candidates);
  }

  void exec(const CompressorGraph& g, const std::vector<std::uint64_t>& in_ids, std::uint64_t depth, Errc mismatch,
            const std::string& path) {
    if (depth > budget_.max_expansion_depth) fail(Errc::budget_exceeded, "expansion depth exceeds budget");
    ValidationReport report;
    auto sh = detail::shape_of(g, report);
    if (!sh.ok) fail(Errc::graph_invalid, path + ": " + report.violations.front());
    if (in_ids.size() != g.root_types.size())
      fail(mismatch, path + ": graph expects " + std::to_string(g.root_types.size()) + " inputs, got " +
                         std::to_string(in_ids.size()));
    for (std::size_t i = 0; i < in_ids.size(); ++i)
      if (!g.root_types[i].matches(peek(in_ids[i]).type))
        fail(mismatch, path + ": input " + std::to_string(i) + " has type " + peek(in_ids[i]).type.to_string() +
                           ", graph expects " + g.root_types[i].to_string());

    std::vector<std::vector<std::uint64_t>> outs(g.nodes.size());
    for (auto i : sh.order) {
      const auto& node = g.nodes[i];
      std::vector<std::uint64_t> ids;
      for (const auto* e : sh.in_edges[i]) {
        std::uint64_t id;
        if (e->src.node == PortRef::kRoot) {
          id = in_ids[e->src.port];
        } else {
          const auto& src = outs[static_cast<std::size_t>(e->src.node)];
          if (e->src.port >= src.size()) fail(Errc::graph_invalid, path + ": edge from a missing output port");
          id = src[e->src.port];
        }
        consume(id);
        ids.push_back(id);
      }
      std::vector<Stream> inputs;
      inputs.reserve(ids.size());
      for (auto id : ids) inputs.push_back(take(id));

      if (node.kind == GraphNode::Kind::codec) {
        const auto& spec = registry().at(node.wire_id);
        std::string where = path + "/" + spec.name + "#" + std::to_string(i);
        Encoded enc;
        try {
          check_inputs(spec, inputs);
          enc = spec.encode(inputs, node.params);
        } catch (const Error& e) {
          fail(e.code(), where + ": " + e.what());
        }
        if (node_count() + 1 > budget_.max_nodes) fail(Errc::budget_exceeded, "node count exceeds budget");
        ResolvedNode rn{node.wire_id, std::move(enc.header), ids, {}};
        for (auto& o : enc.outputs) rn.outputs.push_back(add_stream(std::move(o)));
        outs[i] = rn.outputs;
        nodes_.push_back(std::move(rn));
        continue;
      }

      if (observer_ && !trial_) observer_->observe(node.ref, inputs);
      auto sub = expand(node, inputs, ids, depth);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        put_back(ids[k], std::move(inputs[k]));
        unconsume(ids[k]);
      }
      exec(sub, ids, depth + 1, Errc::selector_mismatch, path + "/" + node.ref.name);
    }
  }

  void unconsume(std::uint64_t id) {
    if (id >= base_)
      slots_[id - base_].consumed = false;
    else
      external_.at(id).consumed = false;
  }

  const GraphLibrary& lib_;
  Budget budget_;
  Observer* observer_;
  bool trial_ = false;
  std::uint64_t base_ = 0;
  std::uint64_t bytes_ = 0;
  std::vector<Slot> slots_;
  std::vector<StreamType> types_;
  std::map<std::uint64_t, External> external_;
  std::vector<ResolvedNode> nodes_;

  friend class Context;
};

inline const GraphLibrary& Context::library() const { return r_.library(); }

inline std::optional<std::uint64_t> Context::measure(const CompressorGraph& g) {
  return r_.measure(g, inputs_, ids_, depth_);
}

/// Runs `g` over `inputs`. Deterministic in (graph, inputs, budget, library).
inline Compressed compress(const CompressorGraph& g, std::vector<Stream> inputs, const Budget& budget,
                           const GraphLibrary& lib, Observer* observer = nullptr) {
  Resolver r(lib, budget, observer);
  return r.run(g, std::move(inputs));
}

}  // namespace graphzip
