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

// Standard graphs and selectors: store, entropy, compress, lz, auto,
// best_of, pipeline, backend, probe, float and clustering.

#pragma once

#include <unordered_set>

#include "graphzip/engine.hpp"

namespace graphzip::graphs {

using namespace codecs;

// --- graph building helpers ------------------------------------------------------

/// Graph whose roots are exactly `types`, with no nodes: every input is stored.
inline CompressorGraph store_graph(const std::vector<StreamType>& types) {
  CompressorGraph g;
  for (const auto& t : types) g.root_types.push_back(TypePattern::exactly(t));
  return g;
}

/// Applies `ref` to each input separately.
inline CompressorGraph each(const std::vector<StreamType>& types, const GraphRef& ref) {
  auto g = store_graph(types);
  for (std::uint32_t i = 0; i < types.size(); ++i) g.connect(CompressorGraph::input(i), g.add_graph(ref.name, ref.params));
  return g;
}

/// One codec over all inputs; output i goes to `next[i]` (an empty name
/// leaves it stored). Missing entries use `rest`.
inline CompressorGraph codec_then(const std::vector<StreamType>& types, std::uint32_t wire_id, Params params,
                                  const std::vector<GraphRef>& next, const GraphRef& rest = {}) {
  auto g = store_graph(types);
  const auto& spec = registry().at(wire_id);
  auto outs = spec.out_patterns(g.root_types, params).size();
  int c = g.add_codec(wire_id, std::move(params));
  g.feed_roots(c);
  for (std::uint32_t o = 0; o < outs; ++o) {
    const auto& r = o < next.size() ? next[o] : rest;
    if (r.name.empty()) continue;
    g.connect({c, o}, g.add_graph(r.name, r.params));
  }
  return g;
}

inline GraphRef ref(std::string name, Params p = {}) { return {std::move(name), std::move(p)}; }

/// Distinct elements over total elements.
inline double distinct_ratio(const Stream& s) {
  if (s.count == 0) return 1.0;
  std::unordered_set<std::string_view> seen;
  auto text = as_chars(s.content);
  if (s.type.kind == Kind::strings) {
    std::size_t off = 0;
    for (auto len : s.lengths) {
      seen.insert(text.substr(off, len));
      off += len;
    }
  } else {
    auto es = s.type.element_size();
    for (std::size_t i = 0; i < s.count; ++i) seen.insert(text.substr(i * es, es));
  }
  return static_cast<double>(seen.size()) / static_cast<double>(s.count);
}

inline bool low_cardinality(const Stream& s) { return s.count > 0 && distinct_ratio(s) * 8.0 <= 1.0; }

// --- entropy ---------------------------------------------------------------------

/// Candidate of the entropy selector with its exact frame cost. wire_id 0 = store.
struct EntropyChoice {
  std::uint32_t wire_id = 0;
  std::uint64_t cost = 0;
  friend bool operator==(const EntropyChoice&, const EntropyChoice&) = default;
};

inline std::uint64_t serial_leaf_size(std::uint64_t bytes) { return 1 + varint_size(bytes) + bytes; }

/// Closed-form costs of every applicable candidate for stream `s`, which the
/// frame will know as stream `id`. Ordered by wire id.
inline std::vector<EntropyChoice> entropy_candidates(const Stream& s, std::uint64_t id) {
  std::vector<EntropyChoice> out{{0, leaf_record_size(s)}};
  if (!s.type.fixed_width() || s.count == 0) return out;
  const std::vector<std::uint64_t> in{id};
  if (s.type.kind == Kind::numeric) {
    auto b = bitpack::pack_width(bitpack::max_value(s));
    auto payload = ceil_div8(s.count * b);
    out.push_back({kBitpack, node_record_size(kBitpack, 1 + varint_size(s.count), in) + serial_leaf_size(payload)});
  }
  auto es = s.type.element_size();
  bool constant = true;
  for (std::size_t i = 1; i < s.count && constant; ++i)
    constant = std::equal(s.content.begin(), s.content.begin() + es, s.content.begin() + i * es);
  if (constant)
    out.push_back({kConstant, node_record_size(kConstant, es + varint_size(s.count), in) + serial_leaf_size(0)});
  if (es == 1 && s.type.kind != Kind::record) {
    auto hist = huffman::histogram(s.content);
    auto payload = ceil_div8(huffman::payload_bits(hist, huffman::code_lengths(hist)));
    out.push_back({kHuffman, node_record_size(kHuffman, huffman::kLengthTableBytes + varint_size(s.count), in) +
                                 serial_leaf_size(payload)});
  }
  return out;
}

/// Cheapest candidate; ties go to the lowest wire id.
inline EntropyChoice entropy_choice(const Stream& s, std::uint64_t id) {
  auto c = entropy_candidates(s, id);
  return *std::min_element(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.cost < b.cost; });
}

inline CompressorGraph entropy(Context& ctx, const Params&, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1) return each(types, ref("entropy"));
  const auto& s = ctx.inputs()[0];
  if (s.type.kind == Kind::strings) return codec_then(types, kStringsSeparate, {}, {}, ref("entropy"));
  auto choice = entropy_choice(s, ctx.input_ids()[0]);
  if (choice.wire_id == 0) return store_graph(types);
  return codec_then(types, choice.wire_id, {}, {});
}

// --- selectors ---------------------------------------------------------------------

/// Measures each candidate graph on the current inputs and returns the
/// cheapest; ties keep the earlier candidate.
inline CompressorGraph cheapest(Context& ctx, const std::vector<CompressorGraph>& candidates) {
  std::optional<std::uint64_t> best;
  std::size_t pick = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto c = ctx.measure(candidates[i]);
    if (c && (!best || *c < *best)) {
      best = c;
      pick = i;
    }
  }
  if (!best) fail(Errc::codec_precondition, "no candidate graph applies to the input");
  return candidates[pick];
}

inline CompressorGraph best_of(Context& ctx, const Params&, std::span<const GraphRef> candidates) {
  auto types = ctx.input_types();
  std::vector<CompressorGraph> gs;
  for (const auto& c : candidates) gs.push_back(ref_graph(types, c));
  if (gs.empty()) return store_graph(types);
  return cheapest(ctx, gs);
}

/// Best of entropy and compress.
inline CompressorGraph auto_graph(Context& ctx, const Params&, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1) return each(types, ref("auto"));
  if (ctx.inputs()[0].count == 0) return store_graph(types);
  return cheapest(ctx, {ref_graph(types, ref("entropy")), ref_graph(types, ref("compress"))});
}

// --- lz / compress ---------------------------------------------------------------

inline CompressorGraph lz(Context& ctx, const Params&, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1) return each(types, ref("lz"));
  auto k = types[0].kind;
  auto id = (k == Kind::record || k == Kind::numeric) ? kFieldLz : kByteLz;
  return codec_then(types, id, {}, {}, ref("entropy"));
}

inline CompressorGraph field_lz_path(const std::vector<StreamType>& types) {
  auto g = codec_then(types, kFieldLz, {}, {{}}, ref("entropy"));
  // Literals are transposed first so that entropy coding sees byte planes.
  int t = g.add_codec(kTranspose);
  g.connect({0, 0}, t);
  g.connect({t, 0}, g.add_graph("entropy"));
  return g;
}

inline CompressorGraph compress(Context& ctx, const Params&, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1) return each(types, ref("compress"));
  const auto& s = ctx.inputs()[0];
  if (s.count == 0) return store_graph(types);
  switch (s.type.kind) {
    case Kind::serial: return codec_then(types, kByteLz, {}, {}, ref("entropy"));
    case Kind::strings: return codec_then(types, kStringsSeparate, {}, {}, ref("compress"));
    case Kind::record: {
      auto lz_path = field_lz_path(types);
      if (!low_cardinality(s)) return lz_path;
      auto tok = codec_then(types, kTokenize, {}, {ref("compress"), ref("entropy")});
      return cheapest(ctx, {tok, lz_path});
    }
    case Kind::numeric: {
      std::vector<CompressorGraph> c;
      c.push_back(ref_graph(types, ref("entropy")));
      c.push_back(codec_then(types, kRangePack, {}, {}));
      c.push_back(codec_then(types, kDelta, {}, {ref("entropy")}));
      c.push_back(codec_then(types, kDelta, {}, {ref("lz")}));
      c.push_back(codec_then(types, kFieldLz, {}, {}, ref("entropy")));
      return cheapest(ctx, c);
    }
  }
  return store_graph(types);
}

// --- pipelines -------------------------------------------------------------------

inline bool is_terminal(std::string_view stage) {
  return stage == "entropy" || stage == "lz" || stage == "store" || stage == "compress" || stage == "auto" ||
         stage == "probe" || stage == "float";
}

inline const std::vector<std::string>& transform_stages() {
  static const std::vector<std::string> kStages = {"delta",   "float_deconstruct", "parse_int", "separate",
                                                   "tokenize", "transpose",         "zigzag"};
  return kStages;
}

inline bool all_canonical_ints(const Stream& s) {
  if (s.type.kind != Kind::strings || s.count == 0) return false;
  auto text = as_chars(s.content);
  std::size_t off = 0;
  std::int64_t v;
  for (auto len : s.lengths) {
    if (!transform::parse_canonical_int(text.substr(off, len), v)) return false;
    off += len;
  }
  return true;
}

/// Whether transform `stage` accepts `s`. Unknown names are not applicable.
inline bool stage_applies(std::string_view stage, const Stream& s) {
  auto k = s.type.kind;
  if (stage == "delta" || stage == "zigzag") return k == Kind::numeric;
  if (stage == "float_deconstruct") return s.type == StreamType::numeric(4);
  if (stage == "parse_int") return all_canonical_ints(s);
  if (stage == "separate") return k == Kind::strings;
  if (stage == "tokenize") return k != Kind::serial;
  if (stage == "transpose") return k == Kind::record || k == Kind::numeric;
  return false;
}

/// Result type of applying transform `stage` to `t` (the continuing output).
inline StreamType stage_output(std::string_view stage, StreamType t) {
  if (stage == "parse_int") return StreamType::numeric(8);
  if (stage == "separate" || stage == "transpose") return StreamType::serial();
  if (stage == "float_deconstruct") return StreamType::numeric(1);
  if (stage == "tokenize") return StreamType::numeric(1);  // width depends on alphabet size; kind is what matters
  return t;
}

inline std::uint32_t stage_codec(std::string_view stage) {
  if (stage == "delta") return kDelta;
  if (stage == "zigzag") return kZigzag;
  if (stage == "float_deconstruct") return kFloatDeconstruct;
  if (stage == "parse_int") return kParseInt;
  if (stage == "separate") return kStringsSeparate;
  if (stage == "tokenize") return kTokenize;
  if (stage == "transpose") return kTranspose;
  fail(Errc::config_invalid, "unknown pipeline stage '" + std::string(stage) + "'");
}

/// Output port carrying the value the pipeline continues with.
inline std::uint32_t stage_main_output(std::string_view stage) {
  if (stage == "tokenize" || stage == "float_deconstruct") return 1;
  return 0;
}

inline Params pipeline_params(const Pipeline& p, bool strict) {
  Params q;
  q.set("stages", p.stages);
  q.set("strict", strict ? 1 : 0);
  return q;
}

/// Transforms applied in order, then a terminal stage. Side outputs of a
/// transform go to `auto`. A stage that does not apply is an error when
/// `strict`, otherwise the remainder falls back to `auto`.
inline CompressorGraph pipeline(Context& ctx, const Params& p, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1) return each(types, ref("pipeline", p));
  const auto& stages = p.get_strings("stages");
  bool strict = p.get_int("strict", 0) != 0;
  if (stages.empty()) return store_graph(types);
  const auto& head = stages.front();
  if (is_terminal(head)) {
    if (stages.size() != 1) fail(Errc::config_invalid, "pipeline stage '" + head + "' must be last");
    if (head == "store") return store_graph(types);
    return ref_graph(types, ref(head));
  }
  stage_codec(head);  // rejects unknown names
  if (!stage_applies(head, ctx.inputs()[0])) {
    if (strict)
      fail(Errc::codec_precondition,
           "pipeline stage '" + head + "' does not apply to " + ctx.inputs()[0].type.to_string());
    return ref_graph(types, ref("auto"));
  }
  Pipeline rest{{stages.begin() + 1, stages.end()}};
  auto main = stage_main_output(head);
  auto g = store_graph(types);
  auto wire = stage_codec(head);
  int c = g.add_codec(wire);
  g.feed_roots(c);
  auto outs = registry().at(wire).out_patterns(g.root_types, {}).size();
  for (std::uint32_t o = 0; o < outs; ++o) {
    int n = o == main ? (rest.stages.empty() ? -1 : g.add_graph("pipeline", pipeline_params(rest, strict)))
                      : g.add_graph("auto");
    if (n >= 0) g.connect({c, o}, n);
  }
  return g;
}

/// Trained pipeline for `slot` if the library has one, otherwise the graph
/// named by the `default` parameter.
inline CompressorGraph backend(Context& ctx, const Params& p, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  const auto& lib = ctx.library();
  auto slot = p.get_string("slot", "");
  if (auto it = lib.backends.find(slot); it != lib.backends.end())
    return each(types, ref("pipeline", pipeline_params(it->second, false)));
  auto fallback = p.get_string("default", "auto");
  if (fallback == "store") return store_graph(types);
  return each(types, ref(fallback));
}

// --- column probe ----------------------------------------------------------------

enum class ProbeRoute { integers, tokens, generic };

inline ProbeRoute probe_route(const Stream& s) {
  if (all_canonical_ints(s)) return ProbeRoute::integers;
  if (low_cardinality(s)) return ProbeRoute::tokens;
  return ProbeRoute::generic;
}

/// Column typing for text columns: integers are parsed, low-cardinality
/// columns tokenized, anything else compressed generically. A non-generic
/// route is kept only if it measures no larger than the generic one.
inline CompressorGraph probe(Context& ctx, const Params&, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1) return each(types, ref("probe"));
  const auto& s = ctx.inputs()[0];
  if (s.type.kind != Kind::strings) return ref_graph(types, ref("auto"));
  auto generic = ref_graph(types, ref("compress"));
  switch (probe_route(s)) {
    case ProbeRoute::integers: return cheapest(ctx, {codec_then(types, kParseInt, {}, {ref("auto")}), generic});
    case ProbeRoute::tokens:
      return cheapest(ctx, {codec_then(types, kTokenize, {}, {ref("compress"), ref("entropy")}), generic});
    case ProbeRoute::generic: break;
  }
  return generic;
}

/// Floats: sign, exponent and mantissa planes compressed separately.
inline CompressorGraph float_graph(Context& ctx, const Params&, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1) return each(types, ref("float"));
  if (!(types[0] == StreamType::numeric(4)) || ctx.inputs()[0].count == 0) return ref_graph(types, ref("auto"));
  return codec_then(types, kFloatDeconstruct, {}, {}, ref("auto"));
}

// --- clustering ------------------------------------------------------------------

/// Groups tagged inputs (parameter `tags`, one per input) by the trained
/// cluster configuration of `slot`. Members of a cluster are concatenated in
/// ascending tag order and sent to the cluster's pipeline. Without a trained
/// configuration every input is its own cluster using graph `default`.
inline CompressorGraph clustering(Context& ctx, const Params& p, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  const auto& tags = p.get_strings("tags");
  if (tags.size() != types.size()) fail(Errc::config_invalid, "clustering: one tag per input required");
  auto slot = p.get_string("slot", "");
  auto fallback = ref(p.get_string("default", "auto"));
  const auto& lib = ctx.library();
  auto it = lib.clusters.find(slot);
  if (it == lib.clusters.end()) return each(types, fallback);
  const auto& cfg = it->second;

  std::map<std::uint32_t, std::map<std::string, std::uint32_t>> members;  // cluster -> tag -> input
  for (std::uint32_t i = 0; i < tags.size(); ++i) {
    std::uint32_t cluster;
    if (auto a = cfg.assignment.find(tags[i]); a != cfg.assignment.end())
      cluster = a->second;
    else if (cfg.default_cluster)
      cluster = *cfg.default_cluster;
    else
      fail(Errc::config_invalid, "clustering: tag '" + tags[i] + "' has no cluster and there is no default");
    if (cluster >= cfg.pipelines.size()) fail(Errc::config_invalid, "clustering: cluster id out of range");
    if (!members[cluster].emplace(tags[i], i).second)
      fail(Errc::config_invalid, "clustering: duplicate tag '" + tags[i] + "'");
  }

  auto g = store_graph(types);
  for (const auto& [cluster, m] : members) {
    const auto& pl = cfg.pipelines[cluster];
    GraphRef next = pl.stages.empty() ? fallback : ref("pipeline", pipeline_params(pl, false));
    if (m.size() == 1) {
      g.connect(CompressorGraph::input(m.begin()->second), g.add_graph(next.name, next.params));
      continue;
    }
    auto first = types[m.begin()->second];
    for (const auto& [tag, i] : m)
      if (!(types[i] == first))
        fail(Errc::codec_precondition, "clustering: cluster " + std::to_string(cluster) + " mixes " +
                                           first.to_string() + " and " + types[i].to_string());
    int c = g.add_codec(kConcat);
    std::uint32_t port = 0;
    for (const auto& [tag, i] : m) g.connect(CompressorGraph::input(i), c, port++);
    g.connect({c, 0}, g.add_graph(next.name, next.params));
    g.connect({c, 1}, g.add_graph("entropy"));
  }
  return g;
}

// --- library ---------------------------------------------------------------------

inline CompressorGraph store_builtin(Context& ctx, const Params&, std::span<const GraphRef>) {
  return store_graph(ctx.input_types());
}

}  // namespace graphzip::graphs

namespace graphzip {

/// Library holding the standard graphs. Frontends add their own entries.
inline GraphLibrary standard_library() {
  GraphLibrary lib;
  lib.builtins["store"] = graphs::store_builtin;
  lib.builtins["entropy"] = graphs::entropy;
  lib.builtins["compress"] = graphs::compress;
  lib.builtins["lz"] = graphs::lz;
  lib.builtins["auto"] = graphs::auto_graph;
  lib.builtins["best_of"] = graphs::best_of;
  lib.builtins["pipeline"] = graphs::pipeline;
  lib.builtins["backend"] = graphs::backend;
  lib.builtins["probe"] = graphs::probe;
  lib.builtins["float"] = graphs::float_graph;
  lib.builtins["clustering"] = graphs::clustering;
  return lib;
}

/// Compresses with the standard library and the default budget for the input size.
inline Compressed compress(const CompressorGraph& g, std::vector<Stream> inputs) {
  std::uint64_t total = 0;
  for (const auto& s : inputs) total += s.byte_size();
  static const GraphLibrary lib = standard_library();
  return compress(g, std::move(inputs), Budget::for_input(total), lib);
}

}  // namespace graphzip
