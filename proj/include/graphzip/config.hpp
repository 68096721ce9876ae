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

// Serializable compressor configurations (*.gmc.json).
//
// Document schema, config_version 1. Keys are sorted, indentation is two
// spaces, integers only:
//
//   {
//     "backends": { "<slot>": ["<stage>", ...] },
//     "clusters": { "<slot>": { "assignment": { "<tag>": <id> },
//                               "default": <id>,            (optional)
//                               "pipelines": [["<stage>", ...], ...] } },
//     "config_version": 1,
//     "entry": "<graph name>",
//     "graphs": { "<name>": {
//         "edges": [ { "from": [<node>, <port>], "to": [<node>, <port>] } ],
//         "inputs": ["serial" | "strings" | "record(4)" | "numeric" | "any" | ...],
//         "nodes": [ { "codec": <wire id>, "params": {...} }
//                  | { "graph": "<name>", "params": {...} }
//                  | { "selector": "<name>", "candidates": [{"graph": "<name>", "params": {...}}], "params": {...} } ]
//     } }
//   }
//
// Node -1 in an edge endpoint is the graph's root input list. Empty "params"
// objects are omitted. Parameter values are integers, strings, or arrays of one
// of the two.

#pragma once

#include <charconv>

#include "json.hpp"

#include "graphzip/graphs.hpp"

namespace graphzip {

inline constexpr std::int64_t kConfigVersion = 1;

struct CompressorConfig {
  std::string entry = "main";
  std::map<std::string, CompressorGraph> graphs;
  std::map<std::string, ClusterConfig> clusters;
  std::map<std::string, Pipeline> backends;
  friend bool operator==(const CompressorConfig&, const CompressorConfig&) = default;

  const CompressorGraph& entry_graph() const {
    auto it = graphs.find(entry);
    if (it == graphs.end()) fail(Errc::config_invalid, "entry graph '" + entry + "' is not defined");
    return it->second;
  }

  /// `base` extended with this configuration's graphs and trained artifacts.
  GraphLibrary library(GraphLibrary base) const {
    for (const auto& [k, v] : graphs) base.graphs[k] = v;
    for (const auto& [k, v] : clusters) base.clusters[k] = v;
    for (const auto& [k, v] : backends) base.backends[k] = v;
    return base;
  }
};

/// Parses "serial", "record(4)", "numeric|strings", "any", "fixed", ...
inline TypePattern parse_type_pattern(std::string_view text) {
  if (text == "any") return TypePattern::any();
  if (text == "fixed") return TypePattern::fixed();
  TypePattern p{0, 0};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto bar = text.find('|', pos);
    auto part = text.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
    std::uint32_t width = 0;
    if (auto open = part.find('('); open != std::string_view::npos) {
      if (part.back() != ')') fail(Errc::config_invalid, "bad type pattern '" + std::string(text) + "'");
      auto digits = part.substr(open + 1, part.size() - open - 2);
      auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), width);
      if (ec != std::errc{} || end != digits.data() + digits.size() || width == 0)
        fail(Errc::config_invalid, "bad width in type pattern '" + std::string(text) + "'");
      part = part.substr(0, open);
    }
    Kind k;
    if (part == "serial") k = Kind::serial;
    else if (part == "strings") k = Kind::strings;
    else if (part == "record") k = Kind::record;
    else if (part == "numeric") k = Kind::numeric;
    else fail(Errc::config_invalid, "unknown stream kind in type pattern '" + std::string(text) + "'");
    if (width) {
      if ((k != Kind::record && k != Kind::numeric) || (p.width && p.width != width) ||
          (k == Kind::numeric && !valid_numeric_width(width)))
        fail(Errc::config_invalid, "bad width in type pattern '" + std::string(text) + "'");
      p.width = width;
    }
    p.kinds |= TypePattern::bit(k);
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  if (p.to_string() != text)
    fail(Errc::config_invalid, "type pattern '" + std::string(text) + "' is not in canonical form");
  return p;
}

namespace config_detail {

using nlohmann::json;

inline json params_to_json(const Params& p) {
  json j = json::object();
  for (const auto& [k, v] : p.values()) {
    std::visit([&](const auto& x) { j[k] = x; }, v);
  }
  return j;
}

inline Params params_from_json(const json& j) {
  Params p;
  if (!j.is_object()) fail(Errc::config_invalid, "params must be an object");
  for (const auto& [k, v] : j.items()) {
    if (v.is_number_integer()) {
      p.set(k, v.get<std::int64_t>());
    } else if (v.is_string()) {
      p.set(k, v.get<std::string>());
    } else if (v.is_array()) {
      if (v.empty() || v.front().is_number_integer()) {
        Params::IntList l;
        for (const auto& x : v) {
          if (!x.is_number_integer()) fail(Errc::config_invalid, "param '" + k + "' mixes element kinds");
          l.push_back(x.get<std::int64_t>());
        }
        p.set(k, std::move(l));
      } else {
        Params::StringList l;
        for (const auto& x : v) {
          if (!x.is_string()) fail(Errc::config_invalid, "param '" + k + "' mixes element kinds");
          l.push_back(x.get<std::string>());
        }
        p.set(k, std::move(l));
      }
    } else {
      fail(Errc::config_invalid, "param '" + k + "' has an unsupported value");
    }
  }
  return p;
}

inline json ref_to_json(const char* key, const GraphRef& r) {
  json j = json::object();
  j[key] = r.name;
  if (!r.params.empty()) j["params"] = params_to_json(r.params);
  return j;
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::config_invalid, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string string_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_string()) fail(Errc::config_invalid, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t int_field(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) fail(Errc::config_invalid, std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

inline void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const auto* a : allowed) ok |= k == a;
    if (!ok) fail(Errc::config_invalid, where + ": unknown field '" + k + "'");
  }
}

inline GraphRef ref_from_json(const json& j, const char* key) {
  if (!j.is_object()) fail(Errc::config_invalid, "graph reference must be an object");
  GraphRef r{string_field(j, key), {}};
  if (j.contains("params")) r.params = params_from_json(j.at("params"));
  return r;
}

inline json port_json(PortRef p) { return json::array({p.node, p.port}); }

inline PortRef port_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    fail(Errc::config_invalid, "edge endpoint must be [node, port]");
  auto node = j[0].get<std::int64_t>();
  auto port = j[1].get<std::int64_t>();
  if (node < -1 || node > 1'000'000 || port < 0 || port > 0xFFFF) fail(Errc::config_invalid, "edge endpoint out of range");
  return {static_cast<int>(node), static_cast<std::uint32_t>(port)};
}

inline json graph_to_json(const CompressorGraph& g) {
  json j = json::object();
  j["inputs"] = json::array();
  for (const auto& t : g.root_types) j["inputs"].push_back(t.to_string());
  j["nodes"] = json::array();
  for (const auto& n : g.nodes) {
    json node;
    switch (n.kind) {
      case GraphNode::Kind::codec:
        node = json::object();
        node["codec"] = n.wire_id;
        if (!n.params.empty()) node["params"] = params_to_json(n.params);
        break;
      case GraphNode::Kind::graph: node = ref_to_json("graph", n.ref); break;
      case GraphNode::Kind::selector:
        node = ref_to_json("selector", n.ref);
        node["candidates"] = json::array();
        for (const auto& c : n.candidates) node["candidates"].push_back(ref_to_json("graph", c));
        break;
    }
    j["nodes"].push_back(std::move(node));
  }
  j["edges"] = json::array();
  for (const auto& e : g.edges) j["edges"].push_back({{"from", port_json(e.src)}, {"to", port_json(e.dst)}});
  return j;
}

inline CompressorGraph graph_from_json(const json& j, const std::string& name) {
  if (!j.is_object()) fail(Errc::config_invalid, "graph '" + name + "' must be an object");
  only_keys(j, {"edges", "inputs", "nodes"}, "graph '" + name + "'");
  for (const auto* key : {"edges", "inputs", "nodes"})
    if (!field(j, key).is_array()) fail(Errc::config_invalid, "graph '" + name + "': " + key + " must be an array");
  CompressorGraph g;
  for (const auto& t : field(j, "inputs")) {
    if (!t.is_string()) fail(Errc::config_invalid, "graph '" + name + "': inputs must be strings");
    g.root_types.push_back(parse_type_pattern(t.get<std::string>()));
  }
  for (const auto& n : field(j, "nodes")) {
    GraphNode node;
    if (!n.is_object()) fail(Errc::config_invalid, "graph '" + name + "': node must be an object");
    if (n.contains("codec")) {
      only_keys(n, {"codec", "params"}, "graph '" + name + "' node");
      auto id = int_field(n, "codec");
      if (id < 0 || id > 0xFFFFFFFFll) fail(Errc::config_invalid, "codec id out of range");
      node.kind = GraphNode::Kind::codec;
      node.wire_id = static_cast<std::uint32_t>(id);
      if (n.contains("params")) node.params = params_from_json(n.at("params"));
    } else if (n.contains("graph")) {
      only_keys(n, {"graph", "params"}, "graph '" + name + "' node");
      node.kind = GraphNode::Kind::graph;
      node.ref = ref_from_json(n, "graph");
    } else if (n.contains("selector")) {
      only_keys(n, {"candidates", "params", "selector"}, "graph '" + name + "' node");
      node.kind = GraphNode::Kind::selector;
      node.ref = ref_from_json(n, "selector");
      const auto& cands = field(n, "candidates");
      if (!cands.is_array()) fail(Errc::config_invalid, "candidates must be an array");
      for (const auto& c : cands) {
        only_keys(c, {"graph", "params"}, "candidate");
        node.candidates.push_back(ref_from_json(c, "graph"));
      }
    } else {
      fail(Errc::config_invalid, "graph '" + name + "': node needs one of codec, graph, selector");
    }
    g.nodes.push_back(std::move(node));
  }
  for (const auto& e : field(j, "edges")) {
    only_keys(e, {"from", "to"}, "edge");
    g.edges.push_back({port_from_json(field(e, "from")), port_from_json(field(e, "to"))});
  }
  return g;
}

inline json pipeline_json(const Pipeline& p) { return p.stages; }

inline Pipeline pipeline_from_json(const json& j) {
  if (!j.is_array()) fail(Errc::config_invalid, "pipeline must be an array of stage names");
  Pipeline p;
  for (const auto& s : j) {
    if (!s.is_string()) fail(Errc::config_invalid, "pipeline stage must be a string");
    p.stages.push_back(s.get<std::string>());
  }
  return p;
}

inline void check_pipeline(const Pipeline& p, const std::string& where) {
  for (std::size_t i = 0; i < p.stages.size(); ++i) {
    const auto& s = p.stages[i];
    bool terminal = graphs::is_terminal(s);
    bool transform = std::count(graphs::transform_stages().begin(), graphs::transform_stages().end(), s) != 0;
    if (!terminal && !transform) fail(Errc::config_invalid, where + ": unknown stage '" + s + "'");
    if (terminal && i + 1 != p.stages.size()) fail(Errc::config_invalid, where + ": stage '" + s + "' must be last");
  }
}

}  // namespace config_detail

inline std::string serialize_config(const CompressorConfig& c) {
  using config_detail::json;
  json j = json::object();
  j["config_version"] = kConfigVersion;
  j["entry"] = c.entry;
  j["graphs"] = json::object();
  for (const auto& [name, g] : c.graphs) j["graphs"][name] = config_detail::graph_to_json(g);
  j["backends"] = json::object();
  for (const auto& [slot, p] : c.backends) j["backends"][slot] = config_detail::pipeline_json(p);
  j["clusters"] = json::object();
  for (const auto& [slot, cc] : c.clusters) {
    json x = json::object();
    x["assignment"] = json::object();
    for (const auto& [tag, id] : cc.assignment) x["assignment"][tag] = id;
    if (cc.default_cluster) x["default"] = *cc.default_cluster;
    x["pipelines"] = json::array();
    for (const auto& p : cc.pipelines) x["pipelines"].push_back(config_detail::pipeline_json(p));
    j["clusters"][slot] = std::move(x);
  }
  return j.dump(2) + "\n";
}

/// Parses and validates a configuration. Graph references must name a graph of
/// the configuration or an entry of `lib`.
inline CompressorConfig deserialize_config(std::string_view text, const GraphLibrary& lib) {
  using config_detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::config_invalid, std::string("config syntax error: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::config_invalid, "config must be a JSON object");
  config_detail::only_keys(j, {"backends", "clusters", "config_version", "entry", "graphs"}, "config");
  auto version = config_detail::int_field(j, "config_version");
  if (version != kConfigVersion)
    fail(Errc::unsupported_version, "unsupported config_version " + std::to_string(version));
  CompressorConfig c;
  c.entry = config_detail::string_field(j, "entry");
  const auto& graphs = config_detail::field(j, "graphs");
  if (!graphs.is_object()) fail(Errc::config_invalid, "graphs must be an object");
  for (const auto& [name, g] : graphs.items()) c.graphs[name] = config_detail::graph_from_json(g, name);
  if (j.contains("backends")) {
    if (!j["backends"].is_object()) fail(Errc::config_invalid, "backends must be an object");
    for (const auto& [slot, p] : j["backends"].items()) {
      c.backends[slot] = config_detail::pipeline_from_json(p);
      config_detail::check_pipeline(c.backends[slot], "backend '" + slot + "'");
    }
  }
  if (j.contains("clusters")) {
    if (!j["clusters"].is_object()) fail(Errc::config_invalid, "clusters must be an object");
    for (const auto& [slot, x] : j["clusters"].items()) {
      config_detail::only_keys(x, {"assignment", "default", "pipelines"}, "cluster '" + slot + "'");
      ClusterConfig cc;
      if (!config_detail::field(x, "pipelines").is_array()) fail(Errc::config_invalid, "pipelines must be an array");
      for (const auto& p : config_detail::field(x, "pipelines")) cc.pipelines.push_back(config_detail::pipeline_from_json(p));
      auto n = static_cast<std::int64_t>(cc.pipelines.size());
      std::vector<bool> used(cc.pipelines.size(), false);
      const auto& assign = config_detail::field(x, "assignment");
      if (!assign.is_object()) fail(Errc::config_invalid, "assignment must be an object");
      for (const auto& [tag, id] : assign.items()) {
        if (!id.is_number_integer() || id.get<std::int64_t>() < 0 || id.get<std::int64_t>() >= n)
          fail(Errc::config_invalid, "cluster '" + slot + "': tag '" + tag + "' has an invalid cluster id");
        cc.assignment[tag] = static_cast<std::uint32_t>(id.get<std::int64_t>());
        used[cc.assignment[tag]] = true;
      }
      if (x.contains("default")) {
        auto d = config_detail::int_field(x, "default");
        if (d < 0 || d >= n) fail(Errc::config_invalid, "cluster '" + slot + "': default out of range");
        cc.default_cluster = static_cast<std::uint32_t>(d);
        used[*cc.default_cluster] = true;
      }
      for (std::size_t i = 0; i < used.size(); ++i)
        if (!used[i]) fail(Errc::config_invalid, "cluster '" + slot + "': cluster ids are not dense");
      for (std::size_t i = 0; i < cc.pipelines.size(); ++i)
        config_detail::check_pipeline(cc.pipelines[i], "cluster '" + slot + "'");
      c.clusters[slot] = std::move(cc);
    }
  }

  c.entry_graph();
  for (const auto& [name, g] : c.graphs) {
    auto report = validate_graph(g);
    if (!report.ok()) fail(Errc::config_invalid, "graph '" + name + "': " + report.violations.front());
    auto resolves = [&](const std::string& ref) { return c.graphs.count(ref) || lib.has(ref); };
    for (const auto& n : g.nodes) {
      if (n.kind == GraphNode::Kind::codec) continue;
      if (!resolves(n.ref.name))
        fail(Errc::config_invalid, "graph '" + name + "' references undefined graph '" + n.ref.name + "'");
      for (const auto& cand : n.candidates)
        if (!resolves(cand.name))
          fail(Errc::config_invalid, "graph '" + name + "' references undefined graph '" + cand.name + "'");
    }
  }
  return c;
}

/// Compresses one Serial input with a configuration.
inline Compressed compress_with(const CompressorConfig& c, Bytes input, const GraphLibrary& base) {
  auto lib = c.library(base);
  auto budget = Budget::for_input(input.size());
  return compress(c.entry_graph(), {Stream::serial(std::move(input))}, budget, lib);
}

}  // namespace graphzip
