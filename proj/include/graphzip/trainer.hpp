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

// Offline training. A seed configuration is run over sample inputs while an
// observer records what reaches each trainable component: clustering graphs
// (by slot) and backend slots. Each component is then trained on what it saw:
//
//   explore_backends   ranks pipelines (transforms then a terminal) by total
//                      compressed size. Exhaustive up to the enumeration
//                      budget, a seeded genetic search beyond it.
//   train_clustering   greedy agglomerative grouping of tagged streams.
//
// Trained pieces are only kept when they strictly shrink their component's
// output, and the final configuration is never larger than the seed in total.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "graphzip/config.hpp"

namespace graphzip::trainer {

inline constexpr std::uint64_t kGeneticSeed = 0x67726170687a6970ull;  // "graphzip"
inline constexpr std::size_t kPopulation = 32;
inline constexpr std::size_t kGenerations = 20;
inline constexpr std::size_t kElite = 4;

struct CandidateSet {
  std::size_t max_depth = 3;  // transforms before the terminal
  std::vector<std::string> terminals{"entropy", "lz", "store"};
  std::size_t enumeration_budget = 4096;  // pipelines; beyond this the genetic search runs

  /// Transforms admissible for a stream of type `t`.
  std::vector<std::string> transforms_for(StreamType t) const {
    switch (t.kind) {
      case Kind::strings: return {"parse_int", "tokenize", "separate"};
      case Kind::numeric:
        if (t.width == 4) return {"delta", "zigzag", "transpose", "tokenize", "float_deconstruct"};
        return {"delta", "zigzag", "transpose", "tokenize"};
      case Kind::record: return {"tokenize", "transpose"};
      case Kind::serial: break;
    }
    return {};
  }
};

/// Static per-stage weights; lower is cheaper to run. Only used to order
/// pipelines of equal size and to build the Pareto set.
inline std::uint64_t stage_weight(std::string_view s) {
  static const std::map<std::string_view, std::uint64_t> kWeights = {
      {"delta", 1},     {"zigzag", 1},  {"separate", 1}, {"transpose", 2}, {"parse_int", 2},
      {"float_deconstruct", 2}, {"tokenize", 3}, {"store", 0}, {"entropy", 2},   {"lz", 4}};
  auto it = kWeights.find(s);
  return it == kWeights.end() ? 4 : it->second;
}

inline std::uint64_t pipeline_score(const Pipeline& p) {
  std::uint64_t s = 0;
  for (const auto& st : p.stages) s += stage_weight(st);
  return s;
}

inline std::uint64_t body_cost(const Compressed& c) {
  std::uint64_t n = 0;
  for (const auto& node : c.graph.nodes) n += node_record_size(node.wire_id, node.header.size(), node.inputs);
  for (const auto& l : c.leaves) n += leaf_record_size(l);
  return n;
}

/// Bytes `g` produces for `inputs`, or nullopt when it cannot be applied.
inline std::optional<std::uint64_t> graph_cost(const CompressorGraph& g, std::vector<Stream> inputs,
                                               const GraphLibrary& lib) {
  std::uint64_t total = 0;
  for (const auto& s : inputs) total += s.content.size();
  try {
    return body_cost(compress(g, std::move(inputs), Budget::for_input(total), lib));
  } catch (const Error& e) {
    if (e.code() == Errc::codec_precondition || e.code() == Errc::budget_exceeded ||
        e.code() == Errc::selector_mismatch)
      return std::nullopt;
    throw;
  }
}

/// Total bytes of the strict pipeline over `samples`.
inline std::optional<std::uint64_t> pipeline_cost(const Pipeline& p, const std::vector<Stream>& samples,
                                                  const GraphLibrary& lib) {
  std::uint64_t total = 0;
  for (const auto& s : samples) {
    auto g = ref_graph({s.type}, GraphRef{"pipeline", graphs::pipeline_params(p, true)});
    auto c = graph_cost(g, {s}, lib);
    if (!c) return std::nullopt;
    total += *c;
  }
  return total;
}

struct RankedPipeline {
  Pipeline pipeline;
  std::uint64_t size = 0;
  std::uint64_t score = 0;

  auto key() const { return std::make_tuple(size, score, pipeline.to_string()); }
};

struct ExploreResult {
  std::vector<RankedPipeline> ranking;  // ascending (size, score, name)
  std::vector<RankedPipeline> pareto;   // not dominated in (size, score), ascending size
  bool genetic = false;

  const RankedPipeline& best() const { return ranking.front(); }
};

namespace detail {

/// Applies one transform stage to every sample; nullopt if it does not apply.
inline std::optional<std::vector<Stream>> apply_stage(const std::string& stage, const std::vector<Stream>& in) {
  std::vector<Stream> out;
  out.reserve(in.size());
  for (const auto& s : in) {
    if (!graphs::stage_applies(stage, s)) return std::nullopt;
    try {
      const auto& spec = registry().at(graphs::stage_codec(stage));
      auto enc = spec.encode(StreamSpan(&s, 1), Params{});
      out.push_back(std::move(enc.outputs[graphs::stage_main_output(stage)]));
    } catch (const Error& e) {
      if (e.code() != Errc::codec_precondition) throw;
      return std::nullopt;
    }
  }
  return out;
}

inline bool same_kind(const std::vector<Stream>& v) {
  for (const auto& s : v)
    if (s.type.kind != v.front().type.kind || s.type.width != v.front().type.width) return false;
  return true;
}

/// Number of type-correct pipelines, computed from types alone. An upper bound
/// on what the data-driven enumeration visits.
inline std::uint64_t count_pipelines(StreamType t, std::size_t depth, const CandidateSet& c) {
  std::uint64_t n = c.terminals.size();
  if (depth == 0) return n;
  for (const auto& st : c.transforms_for(t)) {
    n += count_pipelines(graphs::stage_output(st, t), depth - 1, c);
    if (n > (std::uint64_t{1} << 40)) break;
  }
  return n;
}

/// Walks the tree of applicable pipelines, caching transformed samples by prefix.
class Tree {
 public:
  Tree(const std::vector<Stream>& samples, const CandidateSet& c) : c_(c) { cache_[""] = samples; }

  const std::vector<Stream>* at(const std::vector<std::string>& prefix) {
    auto key = join(prefix);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second ? &*it->second : nullptr;
    std::vector<std::string> parent(prefix.begin(), prefix.end() - 1);
    const auto* base = at(parent);
    std::optional<std::vector<Stream>> next;
    if (base && !base->empty() && same_kind(*base)) next = apply_stage(prefix.back(), *base);
    auto& slot = cache_[key];
    slot = std::move(next);
    return slot ? &*slot : nullptr;
  }

  /// Transforms that apply after `prefix`.
  std::vector<std::string> options(const std::vector<std::string>& prefix) {
    std::vector<std::string> out;
    if (prefix.size() >= c_.max_depth) return out;
    const auto* cur = at(prefix);
    if (!cur || cur->empty() || !same_kind(*cur)) return out;
    for (const auto& st : c_.transforms_for(cur->front().type)) {
      auto p = prefix;
      p.push_back(st);
      if (at(p)) out.push_back(st);
    }
    return out;
  }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s;
    for (const auto& x : p) s += x + ">";
    return s;
  }

  const CandidateSet& c_;
  std::map<std::string, std::optional<std::vector<Stream>>> cache_;
};

inline std::vector<RankedPipeline> pareto_of(const std::vector<RankedPipeline>& ranking) {
  std::vector<RankedPipeline> out;
  std::uint64_t best_score = UINT64_MAX;
  for (const auto& r : ranking) {  // ascending size, then score
    if (r.score < best_score) {
      out.push_back(r);
      best_score = r.score;
    }
  }
  return out;
}

}  // namespace detail

/// Ranks candidate pipelines for streams of one kind by total compressed size
/// over `samples`.
inline ExploreResult explore_backends(const std::vector<Stream>& samples, const CandidateSet& c,
                                      const GraphLibrary& lib) {
  ExploreResult res;
  if (samples.empty()) fail(Errc::invalid_argument, "explore_backends: no samples");
  detail::Tree tree(samples, c);
  std::map<std::string, RankedPipeline> seen;
  auto evaluate = [&](const Pipeline& p) -> const RankedPipeline* {
    auto name = p.to_string();
    if (auto it = seen.find(name); it != seen.end()) return it->second.size == UINT64_MAX ? nullptr : &it->second;
    auto cost = pipeline_cost(p, samples, lib);
    auto& r = seen[name];
    r = {p, cost.value_or(UINT64_MAX), pipeline_score(p)};
    return cost ? &r : nullptr;
  };

  auto count = detail::count_pipelines(samples.front().type, c.max_depth, c);
  if (count <= c.enumeration_budget) {
    std::function<void(std::vector<std::string>&)> walk = [&](std::vector<std::string>& prefix) {
      for (const auto& t : c.terminals) {
        Pipeline p{prefix};
        p.stages.push_back(t);
        evaluate(p);
      }
      for (const auto& st : tree.options(prefix)) {
        prefix.push_back(st);
        walk(prefix);
        prefix.pop_back();
      }
    };
    std::vector<std::string> root;
    walk(root);
  } else {
    res.genetic = true;
    std::mt19937_64 rng(kGeneticSeed);
    auto grow = [&](std::vector<std::string> prefix) {
      for (;;) {
        auto opts = tree.options(prefix);
        if (opts.empty() || rng() % (opts.size() + 1) == 0) break;
        prefix.push_back(opts[rng() % opts.size()]);
      }
      Pipeline p{prefix};
      p.stages.push_back(c.terminals[rng() % c.terminals.size()]);
      return p;
    };
    auto fitness = [&](const Pipeline& p) {
      const auto* r = evaluate(p);
      return r ? r->key() : std::make_tuple(UINT64_MAX, UINT64_MAX, p.to_string());
    };
    std::vector<Pipeline> pop;
    for (std::size_t i = 0; i < kPopulation; ++i) pop.push_back(grow({}));
    for (std::size_t gen = 0; gen < kGenerations; ++gen) {
      std::stable_sort(pop.begin(), pop.end(), [&](const Pipeline& a, const Pipeline& b) { return fitness(a) < fitness(b); });
      std::vector<Pipeline> next(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(kElite));
      while (next.size() < kPopulation) {
        const auto& a = pop[rng() % pop.size()];
        const auto& b = pop[rng() % pop.size()];
        const auto& parent = fitness(a) <= fitness(b) ? a : b;
        std::vector<std::string> transforms(parent.stages.begin(), parent.stages.end() - 1);
        auto cut = rng() % (transforms.size() + 1);
        transforms.resize(cut);
        next.push_back(grow(transforms));
      }
      pop = std::move(next);
    }
    for (const auto& p : pop) evaluate(p);
  }

  for (auto& [name, r] : seen)
    if (r.size != UINT64_MAX) res.ranking.push_back(r);
  std::sort(res.ranking.begin(), res.ranking.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
  if (res.ranking.empty()) fail(Errc::codec_precondition, "explore_backends: no pipeline applies");
  res.pareto = detail::pareto_of(res.ranking);
  return res;
}

// --- clustering ------------------------------------------------------------------

/// Streams carrying one tag, one entry per sample it appeared in.
struct Unit {
  std::string tag;
  std::vector<std::pair<std::size_t, Stream>> streams;  // (sample index, stream)
};

struct ClusteringResult {
  ClusterConfig config;
  std::uint64_t cost = 0;
  std::size_t merges = 0;
};

namespace detail {

class ClusterSearch {
 public:
  ClusterSearch(const std::vector<Unit>& units, const CandidateSet& c, const GraphLibrary& lib,
                std::string fallback)
      : units_(units), c_(c), lib_(lib), fallback_(std::move(fallback)) {
    for (const auto& u : units_) samples_ = std::max(samples_, max_sample(u) + 1);
  }

  struct Choice {
    Pipeline pipeline;
    std::uint64_t cost = UINT64_MAX;
  };

  /// Members are indices into units, kept in ascending tag order.
  const Choice& best(const std::vector<std::size_t>& members) {
    auto key = key_of(members);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Choice ch;
    // The fallback graph first; a trained pipeline must beat it strictly.
    if (auto cost = cluster_cost(members, Pipeline{})) ch = {Pipeline{}, *cost};
    auto joined = concatenated(members);
    if (!joined.empty() && same_kind(joined)) {
      try {
        auto ex = explore_backends(joined, c_, lib_);
        if (auto cost = cluster_cost(members, ex.best().pipeline); cost && *cost < ch.cost)
          ch = {ex.best().pipeline, *cost};
      } catch (const Error& e) {
        if (e.code() != Errc::codec_precondition) throw;
      }
    }
    return memo_[key] = ch;
  }

  bool compatible(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) const {
    auto t = units_[a.front()].streams.front().second.type;
    for (const auto* m : {&a, &b})
      for (auto i : *m)
        for (const auto& [_, s] : units_[i].streams)
          if (!(s.type == t)) return false;
    return true;
  }

 private:
  static std::size_t max_sample(const Unit& u) {
    std::size_t m = 0;
    for (const auto& [i, _] : u.streams) m = std::max(m, i);
    return m;
  }

  std::string key_of(const std::vector<std::size_t>& members) const {
    std::string k;
    for (auto i : members) k += units_[i].tag + '\x1f';
    return k;
  }

  /// Per sample: the member streams in ascending tag order.
  std::vector<std::vector<const Stream*>> per_sample(const std::vector<std::size_t>& members) const {
    std::vector<std::vector<const Stream*>> out(samples_);
    for (auto i : members)
      for (const auto& [si, s] : units_[i].streams) out[si].push_back(&s);
    return out;
  }

  std::vector<Stream> concatenated(const std::vector<std::size_t>& members) const {
    std::vector<Stream> out;
    for (const auto& group : per_sample(members)) {
      if (group.empty()) continue;
      if (group.size() == 1) {
        out.push_back(*group.front());
        continue;
      }
      std::vector<Stream> in;
      for (const auto* s : group) in.push_back(*s);
      out.push_back(std::move(codecs::restructure::concat_encode(in, {}).outputs[0]));
    }
    return out;
  }

  /// Bytes the clustering graph spends on `members` when they form one cluster
  /// with pipeline `p`.
  std::optional<std::uint64_t> cluster_cost(const std::vector<std::size_t>& members, const Pipeline& p) const {
    auto lib = lib_;
    ClusterConfig cc;
    for (auto i : members) cc.assignment[units_[i].tag] = 0;
    cc.pipelines = {p};
    lib.clusters["\x1ftrial"] = cc;
    std::uint64_t total = 0;
    for (std::size_t si = 0; si < samples_; ++si) {
      std::vector<Stream> in;
      Params::StringList present;
      for (auto i : members)
        for (const auto& [idx, s] : units_[i].streams)
          if (idx == si) {
            in.push_back(s);
            present.push_back(units_[i].tag);
          }
      if (in.empty()) continue;
      std::vector<StreamType> types;
      for (const auto& s : in) types.push_back(s.type);
      Params gp;
      gp.set("slot", "\x1ftrial").set("default", fallback_).set("tags", present);
      auto c = graph_cost(ref_graph(types, GraphRef{"clustering", gp}), std::move(in), lib);
      if (!c) return std::nullopt;
      total += *c;
    }
    return total;
  }

  const std::vector<Unit>& units_;
  const CandidateSet& c_;
  const GraphLibrary& lib_;
  std::string fallback_;
  std::size_t samples_ = 0;
  std::map<std::string, Choice> memo_;
};

}  // namespace detail

/// Greedy agglomerative clustering. Starts from singletons and repeatedly
/// applies the type-compatible merge with the largest strict cost decrease;
/// ties go to the lexicographically smallest pair of smallest tags. Cluster ids
/// follow the smallest tag of each cluster; one extra cluster with an empty
/// pipeline (the fallback graph) serves as the default for unseen tags.
inline ClusteringResult train_clustering(std::vector<Unit> units, const CandidateSet& c, const GraphLibrary& lib,
                                         const std::string& fallback = "probe") {
  if (units.empty()) fail(Errc::invalid_argument, "train_clustering: no units");
  std::sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) { return a.tag < b.tag; });
  for (std::size_t i = 1; i < units.size(); ++i)
    if (units[i].tag == units[i - 1].tag) fail(Errc::invalid_argument, "train_clustering: duplicate tag");
  detail::ClusterSearch search(units, c, lib, fallback);
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < units.size(); ++i) clusters.push_back({i});

  ClusteringResult res;
  for (;;) {
    std::uint64_t best_gain = 0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        if (!search.compatible(clusters[i], clusters[j])) continue;
        auto merged = clusters[i];
        merged.insert(merged.end(), clusters[j].begin(), clusters[j].end());
        std::sort(merged.begin(), merged.end());
        auto ci = search.best(clusters[i]).cost;
        auto cj = search.best(clusters[j]).cost;
        auto cm = search.best(merged).cost;
        if (ci == UINT64_MAX || cj == UINT64_MAX || cm == UINT64_MAX) continue;
        if (ci + cj > cm && ci + cj - cm > best_gain) {
          best_gain = ci + cj - cm;
          bi = i;
          bj = j;
        }
      }
    }
    if (best_gain == 0) break;
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    std::sort(clusters[bi].begin(), clusters[bi].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    ++res.merges;
  }

  // Clusters stay ordered by their smallest tag (unit indices are tag-sorted).
  std::sort(clusters.begin(), clusters.end());
  for (std::uint32_t id = 0; id < clusters.size(); ++id) {
    const auto& ch = search.best(clusters[id]);
    for (auto i : clusters[id]) res.config.assignment[units[i].tag] = id;
    res.config.pipelines.push_back(ch.pipeline);
    if (ch.cost != UINT64_MAX) res.cost += ch.cost;
  }
  res.config.default_cluster = static_cast<std::uint32_t>(clusters.size());
  res.config.pipelines.push_back(Pipeline{});
  return res;
}

// --- orchestration ---------------------------------------------------------------

struct SampleReport {
  std::string name;
  std::uint64_t original = 0, seed = 0, trained = 0;
};

struct TrainReport {
  std::vector<SampleReport> samples;
  std::uint64_t seed_total = 0, trained_total = 0;
  std::vector<std::string> log;
  bool kept_seed = false;
};

struct TrainResult {
  CompressorConfig config;
  TrainReport report;
};

struct Sample {
  std::string name;
  Bytes data;
};

namespace detail {

struct Observations : Observer {
  struct Clustering {
    std::string fallback;
    std::map<std::string, Unit> units;
  };
  std::size_t sample = 0;
  std::map<std::string, Clustering> clusterings;
  std::map<std::string, std::vector<Stream>> backends;
  std::map<std::string, std::string> backend_defaults;

  void observe(const GraphRef& ref, StreamSpan inputs) override {
    if (ref.name == "clustering") {
      auto slot = ref.params.get_string("slot", "");
      const auto& tags = ref.params.get_strings("tags");
      auto& cl = clusterings[slot];
      cl.fallback = ref.params.get_string("default", "auto");
      for (std::size_t i = 0; i < tags.size() && i < inputs.size(); ++i) {
        auto& u = cl.units[tags[i]];
        u.tag = tags[i];
        u.streams.emplace_back(sample, inputs[i]);
      }
    } else if (ref.name == "backend") {
      auto slot = ref.params.get_string("slot", "");
      for (const auto& s : inputs) backends[slot].push_back(s);
      backend_defaults[slot] = ref.params.get_string("default", "auto");
    }
  }
};

inline Observations observe_corpus(const CompressorConfig& c, const std::vector<Sample>& corpus,
                                   const GraphLibrary& base) {
  Observations obs;
  auto lib = c.library(base);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    obs.sample = i;
    try {
      compress(c.entry_graph(), {Stream::serial(corpus[i].data)}, Budget::for_input(corpus[i].data.size()), lib, &obs);
    } catch (const Error& e) {
      fail(e.code(), "sample '" + corpus[i].name + "': " + e.what());
    }
  }
  return obs;
}

inline std::uint64_t frame_size(const CompressorConfig& c, const Bytes& data, const GraphLibrary& base) {
  return compress_with(c, data, base).frame().size();
}

}  // namespace detail

/// Trains `seed` on `corpus`. Samples are processed in name order.
inline TrainResult train(const CompressorConfig& seed, std::vector<Sample> corpus, const GraphLibrary& base,
                         const CandidateSet& cands = {}) {
  if (corpus.empty()) fail(Errc::invalid_argument, "training corpus is empty");
  std::stable_sort(corpus.begin(), corpus.end(), [](const Sample& a, const Sample& b) { return a.name < b.name; });
  TrainResult res;
  res.config = seed;
  auto& log = res.report.log;

  // Clustering slots first: they decide what the backends downstream see.
  auto obs = detail::observe_corpus(seed, corpus, base);
  for (auto& [slot, cl] : obs.clusterings) {
    std::vector<Unit> units;
    for (auto& [tag, u] : cl.units) units.push_back(std::move(u));
    auto lib = res.config.library(base);
    auto trained = train_clustering(units, cands, lib, cl.fallback);
    auto with = lib;
    with.clusters[slot] = trained.config;
    std::uint64_t before = 0, after = 0;
    bool ok = true;
    for (std::size_t si = 0; si < corpus.size() && ok; ++si) {
      std::vector<Stream> in;
      Params::StringList tags;
      for (const auto& u : units)
        for (const auto& [i, s] : u.streams)
          if (i == si) {
            in.push_back(s);
            tags.push_back(u.tag);
          }
      if (in.empty()) continue;
      std::vector<StreamType> types;
      for (const auto& s : in) types.push_back(s.type);
      Params gp;
      gp.set("slot", slot).set("default", cl.fallback).set("tags", tags);
      auto g = ref_graph(types, GraphRef{"clustering", gp});
      auto b = graph_cost(g, in, lib);
      auto a = graph_cost(g, in, with);
      if (!a || !b) {
        ok = false;
        break;
      }
      before += *b;
      after += *a;
    }
    if (ok && after < before) {
      res.config.clusters[slot] = trained.config;
      log.push_back("clustering '" + slot + "': " + std::to_string(units.size()) + " units, " +
                    std::to_string(trained.merges) + " merges, " + std::to_string(before) + " -> " +
                    std::to_string(after) + " bytes");
    } else {
      log.push_back("clustering '" + slot + "': no improvement, kept seed");
    }
  }

  // Backend slots, observed again under the trained clustering.
  obs = detail::observe_corpus(res.config, corpus, base);
  for (const auto& [slot, streams] : obs.backends) {
    if (res.config.backends.count(slot)) continue;
    std::vector<Stream> same;
    for (const auto& s : streams)
      if (s.type == streams.front().type) same.push_back(s);
    if (same.size() != streams.size()) {
      log.push_back("backend '" + slot + "': mixed stream types, kept seed");
      continue;
    }
    auto lib = res.config.library(base);
    ExploreResult ex;
    try {
      ex = explore_backends(streams, cands, lib);
    } catch (const Error& e) {
      if (e.code() != Errc::codec_precondition) throw;
      log.push_back("backend '" + slot + "': no pipeline applies, kept seed");
      continue;
    }
    auto with = lib;
    with.backends[slot] = ex.best().pipeline;
    Params bp;
    bp.set("slot", slot).set("default", obs.backend_defaults[slot]);
    std::uint64_t before = 0, after = 0;
    bool ok = true;
    for (const auto& s : streams) {
      auto g = ref_graph({s.type}, GraphRef{"backend", bp});
      auto b = graph_cost(g, {s}, lib);
      auto a = graph_cost(g, {s}, with);
      if (!a || !b) {
        ok = false;
        break;
      }
      before += *b;
      after += *a;
    }
    if (ok && after < before) {
      res.config.backends[slot] = ex.best().pipeline;
      log.push_back("backend '" + slot + "': " + ex.best().pipeline.to_string() + ", " + std::to_string(before) +
                    " -> " + std::to_string(after) + " bytes" + (ex.genetic ? " (genetic)" : ""));
    } else {
      log.push_back("backend '" + slot + "': no improvement, kept seed");
    }
  }

  // Whole-corpus check: never return something larger than the seed.
  for (const auto& s : corpus) {
    SampleReport r{s.name, s.data.size(), detail::frame_size(seed, s.data, base),
                   detail::frame_size(res.config, s.data, base)};
    res.report.seed_total += r.seed;
    res.report.trained_total += r.trained;
    res.report.samples.push_back(r);
  }
  if (res.report.trained_total > res.report.seed_total) {
    res.config = seed;
    res.report.kept_seed = true;
    res.report.trained_total = res.report.seed_total;
    for (auto& r : res.report.samples) r.trained = r.seed;
    log.push_back("trained configuration was larger in total, kept seed");
  }
  return res;
}

}  // namespace graphzip::trainer
