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

// Acceptance run: one PASS or FAIL line per release criterion, with the
// measured numbers alongside. Exits non-zero when any criterion fails.
//
//   acceptance [name...]   runs only the named criteria

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>

#include "cli.hpp"
#include "graphzip/graphzip.hpp"
#include "sddl_gen.hpp"
#include "test_util.hpp"
#include "trainer_oracle.hpp"

namespace {

using namespace graphzip;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

long max_rss_kib() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return u.ru_maxrss;
}

// --- codec round trips ----------------------------------------------------------

Outcome codec_round_trips() {
  constexpr int kCases = 10000;
  auto start = Clock::now();
  gz_test::Rng rng(20260101);
  std::uint64_t failures = 0, empties = 0;
  std::string first_failure;
  for (const auto& [id, spec] : registry().all()) {
    for (int i = 0; i < kCases; ++i) {
      auto c = gz_test::random_case(id, rng);
      bool empty = true;
      for (const auto& s : c.inputs) empty &= s.content.empty();
      empties += empty;
      std::string err;
      try {
        err = gz_test::codec_round_trip(spec, c);
      } catch (const std::exception& e) {
        err = e.what();
      }
      if (!err.empty()) {
        if (!failures) first_failure = std::string(spec.name) + ": " + err;
        ++failures;
      }
    }
  }
  auto secs = seconds_since(start);
  Outcome o;
  o.pass = failures == 0 && registry().size() == 21 && secs < 120 && empties > 0;
  o.detail = std::to_string(registry().size()) + " codecs x " + std::to_string(kCases) + " cases, " +
             std::to_string(empties) + " empty, " + std::to_string(failures) + " failures, " + fmt(secs) + " s";
  if (failures) o.detail += "; first: " + first_failure;
  return o;
}

// --- universality ---------------------------------------------------------------

std::string csv_rows(gz_test::Rng& rng, int rows, bool with_id = true) {
  static const char* kStates[] = {"PENDING", "ACTIVE", "CLOSED"};
  std::string t = with_id ? "ts,state,id\n" : "ts,state\n";
  std::uint64_t ts = 1700000000000ull + rng() % 1000;
  for (int r = 0; r < rows; ++r) {
    ts += 1 + rng() % 20;
    t += std::to_string(ts) + "," + kStates[rng() % 3];
    if (with_id) t += "," + std::to_string(rng() % 4294967296ull);
    t += "\n";
  }
  return t;
}

Bytes numeric_bytes(gz_test::Rng& rng, std::size_t n) {
  Bytes b;
  std::uint64_t v = rng() % 1000;
  for (std::size_t i = 0; i < n; ++i) {
    v += rng() % 7;
    for (int k = 0; k < 8; ++k) b.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  return b;
}

struct Case {
  std::string label;
  CompressorConfig config;
  Bytes input;
};

CompressorConfig hand_built(unsigned width, const std::vector<std::string>& stages) {
  CompressorConfig c;
  auto& g = c.graphs["main"];
  g.root_types = {TypePattern::of(Kind::serial)};
  int conv = g.add_codec(codecs::kSerialToNumericLE, Params().set("width", static_cast<std::int64_t>(width)));
  g.feed_roots(conv);
  g.connect({conv, 0}, g.add_graph("pipeline", graphs::pipeline_params(Pipeline{stages}, false)));
  return c;
}

std::vector<Case> universality_cases() {
  gz_test::Rng rng(50);
  std::vector<Case> cases;
  auto csv_in = to_bytes(csv_rows(rng, 600));
  auto nums = numeric_bytes(rng, 1500);
  for (const char* p : {"raw", "csv", "numeric-le:1", "numeric-le:2", "numeric-le:4", "numeric-le:8", "numeric-be:1",
                        "numeric-be:2", "numeric-be:4", "numeric-be:8", "f32"})
    cases.push_back({std::string("profile ") + p, seed_config(p), std::string(p) == "csv" ? csv_in : nums});

  const std::vector<std::pair<std::string, std::size_t>> sddl = {
      {"main: u64le[];", 8},
      {"record R { a: u32le -> a; b: u32be -> b; } main: R[];", 8},
      {"record R { k: u8 -> k; v: u16le -> v; pad: bytes(5); } main: R[];", 8},
      {"record R { t: u64le -> t; } main: R[];", 8},
      {"record R { lo: u16le[2] -> lo; hi: u32le -> hi; } main: R[];", 8},
      {"record H { n: u8; } record R { h: H -> head; body: bytes(7) -> body; } main: R[];", 8},
  };
  for (const auto& [desc, unit] : sddl) {
    CompressorConfig c;
    auto& g = c.graphs["main"];
    g.root_types = {TypePattern::of(Kind::serial)};
    g.feed_roots(g.add_graph("sddl", Params().set("description", desc)));
    cases.push_back({"sddl " + desc, c, Bytes(nums.begin(), nums.begin() + (nums.size() / unit) * unit)});
  }

  const std::vector<std::vector<std::string>> pipelines = {
      {"entropy"}, {"lz"}, {"store"}, {"delta", "entropy"}, {"delta", "zigzag", "entropy"}, {"tokenize", "lz"},
  };
  for (unsigned w : {1u, 2u, 4u, 8u})
    for (const auto& p : pipelines) {
      std::string label = "hand-built w" + std::to_string(w);
      for (const auto& s : p) label += " " + s;
      cases.push_back({label, hand_built(w, p), nums});
    }

  // Trained configurations.
  auto lib = full_library();
  auto corpus_of = [&](auto make, int n) {
    std::vector<trainer::Sample> s;
    for (int i = 0; i < n; ++i) s.push_back({"s" + std::to_string(i), make()});
    return s;
  };
  for (std::size_t depth : {0u, 1u, 2u}) {
    trainer::CandidateSet cs;
    cs.max_depth = depth;
    auto corpus = corpus_of([&] { return to_bytes(csv_rows(rng, 200, depth != 1)); }, 3);
    auto r = trainer::train(seed_config("csv"), corpus, lib, cs);
    cases.push_back({"trained csv depth " + std::to_string(depth), r.config, csv_in});
  }
  for (const char* p : {"raw", "numeric-le:8", "numeric-le:4", "numeric-be:8", "f32"}) {
    trainer::CandidateSet cs;
    cs.max_depth = 2;
    auto corpus = corpus_of([&] { return numeric_bytes(rng, 300); }, 2);
    auto r = trainer::train(seed_config(p), corpus, lib, cs);
    cases.push_back({std::string("trained ") + p, r.config, nums});
  }

  // A trained config that kept its seed duplicates a profile case; keep the
  // first of each and top up with further hand-built graphs.
  std::set<std::string> seen;
  std::vector<Case> distinct;
  for (auto& c : cases)
    if (seen.insert(serialize_config(c.config)).second) distinct.push_back(std::move(c));
  const std::vector<std::vector<std::string>> extra = {
      {"zigzag", "entropy"}, {"transpose", "lz"}, {"delta", "lz"}, {"transpose", "entropy"}, {"delta", "tokenize", "entropy"},
  };
  for (std::size_t i = 0; distinct.size() < 50 && i < extra.size() * 4; ++i) {
    unsigned w = 1u << (i % 4);
    const auto& p = extra[i / 4];
    auto config = hand_built(w, p);
    if (!seen.insert(serialize_config(config)).second) continue;
    std::string label = "hand-built w" + std::to_string(w);
    for (const auto& s : p) label += " " + s;
    distinct.push_back({label, config, nums});
  }
  return distinct;
}

Outcome universality() {
  auto start = Clock::now();
  auto cases = universality_cases();
  auto dir = fs::temp_directory_path() / ("graphzip_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto lib = full_library();
  std::set<std::string> configs, shapes;
  std::size_t ok = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    configs.insert(serialize_config(c.config));
    auto frame_path = (dir / ("f" + std::to_string(i) + ".gmz")).string();
    auto out_path = (dir / ("f" + std::to_string(i) + ".out")).string();
    try {
      auto compressed = compress_with(c.config, c.input, lib);
      std::string shape;
      for (const auto& n : compressed.graph.nodes) shape += std::to_string(n.wire_id) + ",";
      shapes.insert(shape);
      cli::write_file_atomic(frame_path, compressed.frame({i % 2 == 1}));
      // The decoder sees only the frame file.
      std::ostringstream out, err;
      int code = cli::run({"decompress", "-o", out_path, frame_path}, out, err);
      if (code == 0 && cli::read_file(out_path) == c.input) ++ok;
      else if (first_failure.empty()) first_failure = c.label + ": " + err.str();
    } catch (const std::exception& e) {
      if (first_failure.empty()) first_failure = c.label + ": " + e.what();
    }
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = cases.size() == 50 && configs.size() == 50 && ok == cases.size();
  o.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " frames byte-identical via decompress, " +
             std::to_string(configs.size()) + " distinct configs, " + std::to_string(shapes.size()) +
             " distinct resolved shapes, " + fmt(seconds_since(start)) + " s";
  if (!first_failure.empty()) o.detail += "; first failure: " + first_failure;
  return o;
}

// --- tokenize example -------------------------------------------------------------------

Outcome tokenize_alphabet() {
  auto e = registry().at(codecs::kTokenize).encode(
      std::vector<Stream>{Stream::strings({"alice", "bob", "bob", "eve", "alice", "bob", "alice"})}, {});
  auto alphabet = e.outputs[0].string_items();
  auto indices = e.outputs[1].values();
  Outcome o;
  o.pass = alphabet == std::vector<std::string>{"alice", "bob", "eve"} &&
           indices == std::vector<std::uint64_t>{0, 1, 1, 2, 0, 1, 0};
  o.detail = "alphabet=[";
  for (std::size_t i = 0; i < alphabet.size(); ++i) o.detail += (i ? "," : "") + alphabet[i];
  o.detail += "] indices=[";
  for (std::size_t i = 0; i < indices.size(); ++i) o.detail += (i ? "," : "") + std::to_string(indices[i]);
  o.detail += "]";
  return o;
}

// --- entropy selector ---------------------------------------------------------------------

// Encodes every candidate for real; smallest frame wins, ties to the lowest id.
std::pair<std::uint32_t, std::size_t> entropy_oracle(const Stream& s) {
  std::pair<std::uint32_t, std::size_t> best{0, 0};
  bool have = false;
  for (std::uint32_t id : {0u, unsigned(codecs::kBitpack), unsigned(codecs::kConstant), unsigned(codecs::kHuffman)}) {
    CompressorGraph g;
    g.root_types = {TypePattern::any()};
    if (id) g.connect(CompressorGraph::input(0), g.add_codec(id));
    try {
      auto size = compress(g, {s}).frame().size();
      if (!have || size < best.second) best = {id, size};
      have = true;
    } catch (const Error&) {
    }
  }
  return best;
}

Stream random_entropy_input(gz_test::Rng& rng) {
  switch (gz_test::uniform(rng, 0, 4)) {
    case 0: return gz_test::random_serial(rng, 3000);
    case 1: return gz_test::random_numeric(rng, gz_test::random_width(rng), 800);
    case 2: return gz_test::random_record(rng, static_cast<unsigned>(gz_test::uniform(rng, 1, 5)), 300);
    case 3: return Stream::serial(Bytes(gz_test::uniform(rng, 0, 500), static_cast<std::uint8_t>(rng())));
    default: {
      Bytes b(gz_test::uniform(rng, 0, 2000));
      auto alphabet = gz_test::uniform(rng, 1, 16);
      for (auto& x : b) x = static_cast<std::uint8_t>(gz_test::uniform(rng, 0, alphabet - 1));
      return Stream::serial(std::move(b));
    }
  }
}

Outcome selector_oracle() {
  gz_test::Rng rng(1000);
  CompressorGraph g;
  g.root_types = {TypePattern::any()};
  g.feed_roots(g.add_graph("entropy"));
  int match = 0;
  std::map<std::uint32_t, int> picks;
  for (int i = 0; i < 1000; ++i) {
    auto s = random_entropy_input(rng);
    auto oracle = entropy_oracle(s);
    auto c = compress(g, {s});
    std::uint32_t id = c.graph.nodes.empty() ? 0 : c.graph.nodes[0].wire_id;
    ++picks[id];
    match += id == oracle.first && c.frame().size() == oracle.second && read_frame(c.frame())[0] == s;
  }
  Outcome o;
  o.pass = match == 1000;
  o.detail = std::to_string(match) + "/1000 exact matches; picks store=" + std::to_string(picks[0]) +
             " bitpack=" + std::to_string(picks[codecs::kBitpack]) + " constant=" +
             std::to_string(picks[codecs::kConstant]) + " huffman=" + std::to_string(picks[codecs::kHuffman]);
  return o;
}

// --- trainer ---------------------------------------------------------------------------

std::vector<trainer::Sample> two_column_corpus(std::uint64_t seed, int kind, int files, int rows) {
  gz_test::Rng rng(seed);
  static const char* kStates[] = {"OPEN", "CLOSED", "PENDING"};
  std::vector<trainer::Sample> corpus;
  std::uint64_t ts = 1700000000000ull;
  for (int f = 0; f < files; ++f) {
    std::string text = kind == 0 ? "ts,state\n" : kind == 1 ? "id,state\n" : "qty,ts\n";
    for (int r = 0; r < rows; ++r) {
      ts += 1 + rng() % 20;
      switch (kind) {
        case 0: text += std::to_string(ts) + "," + kStates[rng() % 3] + "\n"; break;
        case 1: text += std::to_string(rng() % 100000000) + "," + kStates[rng() % 3] + "\n"; break;
        default: text += std::to_string(rng() % 50) + "," + std::to_string(ts) + "\n"; break;
      }
    }
    corpus.push_back({"s" + std::to_string(f), to_bytes(text)});
  }
  return corpus;
}

std::vector<std::uint64_t> g_config_sizes;

Outcome trainer_oracle() {
  auto start = Clock::now();
  auto lib = full_library();
  int identical = 0, monotone = 0, corpora = 0;
  std::string detail;
  const std::vector<std::pair<std::uint64_t, int>> setups = {{11, 0}, {12, 1}, {13, 2}};
  for (const auto& [seed_value, kind] : setups) {
    auto corpus = two_column_corpus(seed_value, kind, 3, 250);
    std::size_t bytes = 0;
    for (const auto& s : corpus) bytes += s.data.size();
    if (bytes > 64 * 1024) return {false, "corpus exceeds 64 KiB"};
    trainer::CandidateSet cs;
    cs.max_depth = 2;
    auto seed = seed_config("csv");
    auto trained = trainer::train(seed, corpus, lib, cs);
    auto oracle = gz_test::csv_config_oracle(seed, corpus, 2, lib);
    auto text = serialize_config(trained.config);
    g_config_sizes.push_back(text.size());
    bool same = text == serialize_config(oracle.config);
    identical += same;
    monotone += trained.report.trained_total <= trained.report.seed_total;
    ++corpora;
    detail += " [" + std::to_string(trained.report.seed_total) + "->" + std::to_string(trained.report.trained_total) +
              (same ? " = oracle" : " != oracle " + std::to_string(oracle.total) + " " + oracle.description) + "]";
  }
  // Monotonicity on corpora the oracle does not cover.
  gz_test::Rng rng(14);
  for (const char* p : {"raw", "numeric-le:4", "csv"}) {
    std::vector<trainer::Sample> corpus;
    for (int i = 0; i < 3; ++i) {
      Bytes b(2000 + i * 400);
      for (auto& x : b) x = static_cast<std::uint8_t>(std::string(p) == "csv" ? "a,b\n1,2\n"[rng() % 8] : rng() % 9);
      corpus.push_back({"m" + std::to_string(i), b});
    }
    trainer::CandidateSet cs;
    cs.max_depth = 2;
    auto r = trainer::train(seed_config(p), corpus, lib, cs);
    g_config_sizes.push_back(serialize_config(r.config).size());
    monotone += r.report.trained_total <= r.report.seed_total;
    ++corpora;
  }
  auto secs = seconds_since(start);
  Outcome o;
  o.pass = identical == static_cast<int>(setups.size()) && monotone == corpora && secs < 600;
  o.detail = std::to_string(identical) + "/" + std::to_string(setups.size()) + " configs byte-identical to oracle, " +
             std::to_string(monotone) + "/" + std::to_string(corpora) + " trained<=seed, " + fmt(secs) + " s;" + detail;
  return o;
}

// --- structured beats generic ------------------------------------------------------------

std::string big_csv(gz_test::Rng& rng, std::size_t min_bytes) {
  static const char* kStates[] = {"PENDING", "ACTIVE", "CLOSED"};
  std::string t = "ts,state,id\n";
  std::uint64_t base = 1700000000000ull;
  for (std::uint64_t i = 0; t.size() < min_bytes; ++i) {
    auto ts = base + i * 1000 + rng() % 50;  // sorted: jitter stays below the step
    t += std::to_string(ts) + "," + kStates[rng() % 3] + "," + std::to_string(rng() % 4294967296ull) + "\n";
  }
  return t;
}

Outcome structured_beats_generic() {
  auto start = Clock::now();
  auto lib = full_library();
  gz_test::Rng rng(1);
  auto input = to_bytes(big_csv(rng, 1000000));

  std::vector<trainer::Sample> corpus;
  gz_test::Rng sample_rng(2);
  for (int i = 0; i < 4; ++i) corpus.push_back({"sample" + std::to_string(i), to_bytes(big_csv(sample_rng, 16000))});
  auto trained = trainer::train(seed_config("csv"), corpus, lib);
  g_config_sizes.push_back(serialize_config(trained.config).size());
  auto trained_size = compress_with(trained.config, input, lib).frame().size();

  CompressorGraph lz;
  lz.root_types = {TypePattern::of(Kind::serial)};
  lz.feed_roots(lz.add_codec(codecs::kByteLz));
  auto lz_size = compress(lz, {Stream::serial(input)}, Budget::for_input(input.size()), lib).frame().size();

  // Threshold check: the brute-force optimum per column, assembled into one
  // cluster config, over the same 1 MB file.
  auto table = csv::parse(input);
  CompressorConfig best = seed_config("csv");
  ClusterConfig cc;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    cc.assignment[table.tags[i]] = static_cast<std::uint32_t>(i);
    cc.pipelines.push_back(gz_test::brute_force_best({table.columns[i]}, 2, lib).pipeline);
  }
  cc.pipelines.push_back(Pipeline{});
  cc.default_cluster = static_cast<std::uint32_t>(table.columns.size());
  best.clusters["csv"] = cc;
  auto oracle_size = compress_with(best, input, lib).frame().size();

  double ratio = double(lz_size) / double(trained_size);
  double oracle_ratio = double(lz_size) / double(oracle_size);
  Outcome o;
  o.pass = trained_size < lz_size;
  o.detail = "input " + std::to_string(input.size()) + " B, byte_lz " + std::to_string(lz_size) + " B, trained " +
             std::to_string(trained_size) + " B, ratio " + fmt(ratio) + "x (oracle pipelines " +
             std::to_string(oracle_size) + " B, " + fmt(oracle_ratio) + "x; 1.5x " +
             (ratio >= 1.5 ? "met" : "not met") + "), " + fmt(seconds_since(start)) + " s";
  return o;
}

// --- frame robustness ---------------------------------------------------------------------

Bytes store_frame(Bytes data, bool checksum) {
  CompressorGraph g;
  g.root_types = {TypePattern::any()};
  return compress(g, {Stream::serial(std::move(data))}).frame({checksum});
}

Compressed tokenized_names() {
  CompressorGraph g;
  g.root_types = {TypePattern::of(Kind::strings)};
  int tok = g.add_codec("tokenize");
  int huf = g.add_codec("huffman");
  int lz = g.add_codec("byte_lz");
  g.connect(CompressorGraph::input(0), tok);
  g.connect({tok, 1}, huf);
  g.connect({tok, 0}, lz);
  return compress(g, {Stream::strings({"alice", "bob", "bob", "eve", "alice", "bob", "alice"})});
}

Outcome frame_robustness() {
  auto start = Clock::now();
  gz_test::Rng rng(77);
  auto lib = full_library();
  std::vector<Bytes> seeds{store_frame(to_bytes("hello"), true), tokenized_names().frame({true})};
  {
    CompressorGraph g;
    g.root_types = {TypePattern::any()};
    g.feed_roots(g.add_graph("compress"));
    seeds.push_back(compress(g, {gz_test::random_numeric(rng, 4)}).frame());
    seeds.push_back(compress_with(seed_config("csv"), to_bytes(csv_rows(rng, 20)), lib).frame({true}));
  }
  Budget limits;
  limits.max_total_stream_bytes = 1 << 20;
  auto rss_before = max_rss_kib();
  std::uint64_t typed = 0, decoded = 0, untyped = 0;
  for (int i = 0; i < 1000000; ++i) {
    auto m = seeds[i % seeds.size()];
    auto edits = gz_test::uniform(rng, 1, 4);
    for (std::uint64_t e = 0; e < edits; ++e) {
      auto pos = gz_test::uniform(rng, 0, m.size() - 1);
      switch (gz_test::uniform(rng, 0, 2)) {
        case 0: m[pos] = static_cast<std::uint8_t>(rng()); break;
        case 1: m.erase(m.begin() + static_cast<std::ptrdiff_t>(pos)); break;
        default: m.insert(m.begin() + static_cast<std::ptrdiff_t>(pos), static_cast<std::uint8_t>(rng())); break;
      }
      if (m.empty()) m.push_back(0);
    }
    try {
      read_frame(m, limits);
      ++decoded;
    } catch (const Error&) {
      ++typed;
    } catch (...) {
      ++untyped;
    }
  }
  auto rss_growth_mib = double(max_rss_kib() - rss_before) / 1024.0;

  Bytes data(1024);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  auto f = store_frame(data, true);
  std::size_t detected = 0;
  for (std::size_t bit = 0; bit < f.size() * 8; ++bit) {
    auto m = f;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      read_frame(m);
    } catch (const Error&) {
      ++detected;
    }
  }
  Outcome o;
  o.pass = untyped == 0 && typed + decoded == 1000000 && rss_growth_mib < 64 && detected == f.size() * 8;
  o.detail = "fuzz 10^6: " + std::to_string(typed) + " typed errors, " + std::to_string(decoded) + " decoded, " +
             std::to_string(untyped) + " untyped, peak RSS growth " + fmt(rss_growth_mib, 1) + " MiB; bit flips " +
             std::to_string(detected) + "/" + std::to_string(f.size() * 8) + " detected; " +
             fmt(seconds_since(start)) + " s";
  return o;
}

// --- format freeze -------------------------------------------------------------------------

Outcome format_freeze() {
  int ok = 0;
  ok += store_frame(to_bytes("abc"), false) == gz_test::read_file(gz_test::golden_path("store_abc.gmz"));
  ok += tokenized_names().frame() == gz_test::read_file(gz_test::golden_path("tokenized_names.gmz"));
  CompressorConfig minimal;
  minimal.graphs["main"].root_types = {TypePattern::any()};
  auto golden = gz_test::read_file(gz_test::golden_path("minimal_config.gmc.json"));
  ok += serialize_config(minimal) == std::string(golden.begin(), golden.end());
  int rejected = 0;
  for (auto frame : {store_frame(to_bytes("abc"), false), tokenized_names().frame({true})}) {
    frame[4] = 99;
    try {
      read_frame(frame);
    } catch (const Error& e) {
      rejected += e.code() == Errc::unsupported_version;
    }
  }
  Outcome o;
  o.pass = ok == 3 && rejected == 2;
  o.detail = std::to_string(ok) + "/3 goldens byte-equal, " + std::to_string(rejected) + "/2 version-99 frames rejected";
  return o;
}

// --- SDDL sandbox ------------------------------------------------------------------------------

Outcome sddl_sandbox() {
  auto start = Clock::now();
  gz_test::Rng rng(424242);
  gz_test::SandboxTally t;
  for (int i = 0; i < 1000000; ++i) gz_test::sandbox_case(rng, t);
  Outcome o;
  o.pass = t.violations == 0 && t.runs == 1000000 && t.succeeded > 0;
  o.detail = std::to_string(t.runs) + " cases, " + std::to_string(t.compiled) + " compiled, " +
             std::to_string(t.succeeded) + " covered exactly, " + std::to_string(t.violations) + " violations, " +
             fmt(seconds_since(start)) + " s";
  return o;
}

// --- config size ----------------------------------------------------------------------------------

Outcome config_compactness() {
  if (g_config_sizes.empty()) {
    // Run standalone: train one desk-scale config.
    auto corpus = two_column_corpus(11, 0, 3, 250);
    trainer::CandidateSet cs;
    cs.max_depth = 2;
    g_config_sizes.push_back(serialize_config(trainer::train(seed_config("csv"), corpus, full_library(), cs).config).size());
  }
  auto largest = *std::max_element(g_config_sizes.begin(), g_config_sizes.end());
  auto smallest = *std::min_element(g_config_sizes.begin(), g_config_sizes.end());
  Outcome o;
  o.pass = largest <= 64 * 1024;
  o.detail = std::to_string(g_config_sizes.size()) + " trained configs, " + std::to_string(smallest) + ".." +
             std::to_string(largest) + " bytes";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"codec-round-trip", codec_round_trips},
      {"universality", universality},
      {"tokenize-alphabet", tokenize_alphabet},
      {"selector-oracle", selector_oracle},
      {"trainer-oracle", trainer_oracle},
      {"structured-beats-generic", structured_beats_generic},
      {"frame-robustness", frame_robustness},
      {"format-freeze", format_freeze},
      {"sddl-sandbox", sddl_sandbox},
      {"config-compactness", config_compactness},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
