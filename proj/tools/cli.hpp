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

// The graphzip command line. `run` takes the arguments after the program name
// and writes reports to `out` and diagnostics to `err`, so tests can drive it
// in-process.
//
// Exit codes:
//   0  success
//   1  usage, profile, config or input parse failure
//   2  I/O failure
//   3  corrupt frame
//   4  unsupported format version

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "graphzip/profiles.hpp"
#include "graphzip/trainer.hpp"

namespace graphzip::cli {

namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kCorrupt = 3, kVersion = 4 };

inline Bytes read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io, "cannot open '" + path + "'");
  Bytes b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) fail(Errc::io, "cannot read '" + path + "'");
  return b;
}

/// Writes `data` next to `path` under a temporary name, then renames it into
/// place. A failed write leaves no file behind.
inline void write_file_atomic(const std::string& path, ByteView data) {
  fs::path target(path);
  auto dir = target.parent_path();
  std::random_device rd;
  auto tmp = (dir.empty() ? fs::path(".") : dir) /
             ("." + target.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(Errc::io, "cannot create '" + tmp.string() + "'");
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      fail(Errc::io, "cannot write '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(Errc::io, "cannot rename into '" + path + "'");
  }
}

/// Decompression output cap from GRAPHZIP_MAX_OUTPUT (bytes), default 1 GiB.
inline std::uint64_t max_output() {
  const char* v = std::getenv("GRAPHZIP_MAX_OUTPUT");
  if (!v || !*v) return std::uint64_t{1} << 30;
  std::uint64_t n = 0;
  std::string s(v);
  if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19)
    fail(Errc::invalid_argument, "GRAPHZIP_MAX_OUTPUT must be a byte count, got '" + s + "'");
  n = std::stoull(s);
  return n;
}

inline int exit_code(Errc c, bool decoding) {
  switch (c) {
    case Errc::io: return kIo;
    case Errc::unsupported_version: return kVersion;
    case Errc::corrupt:
    case Errc::bad_magic:
    case Errc::truncated:
    case Errc::checksum_mismatch:
    case Errc::limit_exceeded:
    case Errc::unknown_codec:
    case Errc::graph_invalid: return decoding ? kCorrupt : kUsage;
    default: return kUsage;
  }
}

inline std::string ratio_text(std::uint64_t original, std::uint64_t compressed) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << (compressed ? double(original) / double(compressed) : 0.0);
  return os.str();
}

struct Options {
  std::string input, output, profile, compressor, samples;
  bool checksum = false, pretty = false;
  std::size_t depth = 3;
};

inline std::string default_output(const std::string& in, bool compressing) {
  if (compressing) return in + ".gmz";
  if (in.size() > 4 && in.ends_with(".gmz")) return in.substr(0, in.size() - 4);
  return in + ".out";
}

inline int cmd_compress(const Options& o, std::ostream& out) {
  if (o.profile.empty() == o.compressor.empty())
    fail(Errc::invalid_argument, "compress needs exactly one of --profile or --compressor");
  auto lib = full_library();
  CompressorConfig config;
  Profile profile;
  if (!o.profile.empty()) {
    profile = parse_profile(o.profile);
    config = seed_config(profile);
  } else {
    auto text = read_file(o.compressor);
    config = deserialize_config(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()), lib);
  }
  auto input = read_file(o.input);
  // The csv graph quietly falls back on malformed text; an explicit csv
  // profile reports it instead.
  if (!o.profile.empty() && profile.kind == Profile::csv && !input.empty()) csv::parse(input);
  auto original = input.size();
  auto frame = compress_with(config, std::move(input), lib).frame({o.checksum});
  auto path = o.output.empty() ? default_output(o.input, true) : o.output;
  write_file_atomic(path, frame);
  if (o.pretty) {
    out << std::left << std::setw(18) << "original size" << original << " bytes\n"
        << std::setw(18) << "compressed size" << frame.size() << " bytes\n"
        << std::setw(18) << "ratio" << ratio_text(original, frame.size()) << "\n";
  } else {
    out << "original_size=" << original << "\ncompressed_size=" << frame.size()
        << "\nratio=" << ratio_text(original, frame.size()) << "\n";
  }
  return kOk;
}

inline int cmd_decompress(const Options& o, std::ostream& out) {
  Budget limits;
  limits.max_total_stream_bytes = max_output();
  auto frame = read_file(o.input);
  auto roots = read_frame(frame, limits);
  Bytes content;
  for (const auto& r : roots) content.insert(content.end(), r.content.begin(), r.content.end());
  auto path = o.output.empty() ? default_output(o.input, false) : o.output;
  write_file_atomic(path, content);
  if (o.pretty)
    out << std::left << std::setw(18) << "frame size" << frame.size() << " bytes\n"
        << std::setw(18) << "output size" << content.size() << " bytes\n";
  else
    out << "compressed_size=" << frame.size() << "\ndecompressed_size=" << content.size() << "\n";
  return kOk;
}

inline int cmd_train(const Options& o, std::ostream& out) {
  auto profile = parse_profile(o.profile);
  std::error_code ec;
  if (!fs::is_directory(o.samples, ec)) fail(Errc::io, "samples directory '" + o.samples + "' not found");
  std::vector<trainer::Sample> corpus;
  for (const auto& e : fs::directory_iterator(o.samples, ec))
    if (e.is_regular_file()) corpus.push_back({e.path().filename().string(), read_file(e.path().string())});
  if (ec) fail(Errc::io, "cannot list '" + o.samples + "'");
  if (corpus.empty()) fail(Errc::invalid_argument, "samples directory '" + o.samples + "' has no files");
  if (profile.kind == Profile::csv)
    for (const auto& s : corpus) {
      try {
        if (!s.data.empty()) csv::parse(s.data);
      } catch (const Error& e) {
        fail(e.code(), "sample '" + s.name + "': " + e.what());
      }
    }
  trainer::CandidateSet cands;
  cands.max_depth = o.depth;
  auto result = trainer::train(seed_config(profile), std::move(corpus), full_library(), cands);
  auto text = serialize_config(result.config);
  write_file_atomic(o.output, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  const auto& rep = result.report;
  if (o.pretty) {
    out << std::left << std::setw(24) << "sample" << std::right << std::setw(12) << "original" << std::setw(12) << "seed"
        << std::setw(12) << "trained" << "\n";
    for (const auto& s : rep.samples)
      out << std::left << std::setw(24) << s.name << std::right << std::setw(12) << s.original << std::setw(12)
          << s.seed << std::setw(12) << s.trained << "\n";
    out << std::left << std::setw(24) << "total" << std::right << std::setw(12) << "" << std::setw(12)
        << rep.seed_total << std::setw(12) << rep.trained_total << "\n";
  } else {
    for (const auto& s : rep.samples)
      out << "sample." << s.name << "=original:" << s.original << ",seed:" << s.seed << ",trained:" << s.trained
          << "\n";
    out << "seed_total=" << rep.seed_total << "\ntrained_total=" << rep.trained_total
        << "\nkept_seed=" << (rep.kept_seed ? 1 : 0) << "\nconfig_size=" << text.size() << "\n";
  }
  return kOk;
}

inline int cmd_inspect(const Options& o, std::ostream& out) {
  auto rep = inspect_frame(read_file(o.input));
  out << "version=" << rep.version << "\nchecksum=" << (rep.checksum ? 1 : 0) << "\nframe_bytes=" << rep.frame_bytes
      << "\nchunks=" << rep.chunks.size() << "\nsummary=" << rep.summary() << "\n";
  for (std::size_t c = 0; c < rep.chunks.size(); ++c) {
    const auto& ch = rep.chunks[c];
    for (std::size_t i = 0; i < ch.nodes.size(); ++i) {
      const auto& n = ch.nodes[i];
      out << "chunk" << c << ".node" << i << "=" << n.codec << " (id " << n.wire_id << ", header " << n.header_bytes
          << " bytes) in:";
      for (auto s : n.inputs) out << " " << s;
      out << " out:";
      for (auto s : n.outputs) out << " " << s;
      out << "\n";
    }
    for (const auto& l : ch.leaves)
      out << "chunk" << c << ".leaf" << l.index << "=" << l.type.to_string() << ", " << l.count << " elements, "
          << l.bytes << " bytes\n";
  }
  return kOk;
}

inline int cmd_list_codecs(const Options& o, std::ostream& out) {
  for (const auto& [id, spec] : registry().all()) {
    if (o.pretty)
      out << std::right << std::setw(3) << id << "  " << std::left << std::setw(22) << spec.name << spec.signature
          << "\n";
    else
      out << id << " " << spec.name << " " << spec.signature << "\n";
  }
  return kOk;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"graphzip: graph-model lossless compression", "graphzip"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--pretty", o.pretty, "Human-readable tables instead of key=value lines");

  auto* compress = app.add_subcommand("compress", "Compress a file with a profile or a trained config");
  compress->add_option("--profile", o.profile, "raw, csv, numeric-le:<w>, numeric-be:<w>, f32 or sddl:<file>");
  compress->add_option("--compressor", o.compressor, "Serialized compressor (*.gmc.json)");
  compress->add_flag("--checksum", o.checksum, "Store a content checksum");
  compress->add_option("-o,--output", o.output, "Output frame (default IN.gmz)");
  compress->add_option("input", o.input, "Input file")->required();
  compress->add_flag("--pretty", o.pretty);

  auto* decompress = app.add_subcommand("decompress", "Decompress any frame; no configuration needed");
  decompress->add_option("-o,--output", o.output, "Output file (default IN without .gmz)");
  decompress->add_option("input", o.input, "Input frame")->required();
  decompress->add_flag("--pretty", o.pretty);

  auto* train = app.add_subcommand("train", "Train a compressor on a directory of samples");
  train->add_option("--profile", o.profile, "Seed profile")->required();
  train->add_option("--samples", o.samples, "Directory of sample files")->required();
  train->add_option("-o,--output", o.output, "Trained config (*.gmc.json)")->required();
  train->add_option("--depth", o.depth, "Maximum transforms per pipeline")->check(CLI::Range(0, 6));
  train->add_flag("--pretty", o.pretty);

  auto* inspect = app.add_subcommand("inspect", "Describe the structure of a frame");
  inspect->add_option("input", o.input, "Input frame")->required();

  auto* list = app.add_subcommand("list-codecs", "List the codecs of the current format version");
  list->add_flag("--pretty", o.pretty);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "graphzip: " << e.what() << "\n";
    return kUsage;
  }

  bool decoding = decompress->parsed() || inspect->parsed();
  try {
    if (compress->parsed()) return cmd_compress(o, out);
    if (decompress->parsed()) return cmd_decompress(o, out);
    if (train->parsed()) return cmd_train(o, out);
    if (inspect->parsed()) return cmd_inspect(o, out);
    return cmd_list_codecs(o, out);
  } catch (const Error& e) {
    err << "graphzip: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code(), decoding);
  } catch (const std::exception& e) {
    err << "graphzip: internal error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace graphzip::cli
