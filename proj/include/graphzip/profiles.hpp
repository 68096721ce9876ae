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

// Ingestion profiles: how a raw file enters the graph. Each profile maps to a
// seed configuration that the trainer can refine.
//
//   raw               backend slot "root", default auto
//   csv               CSV columns, cluster slot "csv"
//   numeric-le:<w>    little-endian integers of width w, backend slot "root"
//   numeric-be:<w>    big-endian integers of width w, backend slot "root"
//   f32               little-endian floats, backend slot "root", default float
//   sddl:<file>       SDDL description read from <file>

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "graphzip/config.hpp"
#include "graphzip/csv.hpp"
#include "graphzip/sddl.hpp"

namespace graphzip {

/// Standard graphs plus the csv and sddl frontends.
inline GraphLibrary full_library() {
  auto lib = standard_library();
  lib.builtins["csv"] = csv::csv_graph;
  lib.builtins["sddl"] = sddl::sddl_graph;
  return lib;
}

struct Profile {
  enum Kind { raw, csv, numeric_le, numeric_be, f32, sddl } kind = raw;
  std::uint32_t width = 0;
  std::string path;         // sddl
  std::string description;  // sddl, file contents
};

inline Profile parse_profile(std::string_view spec) {
  Profile p;
  auto colon = spec.find(':');
  auto head = spec.substr(0, colon);
  auto arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto need_arg = [&](bool want) {
    if (want != (colon != std::string_view::npos))
      fail(Errc::invalid_argument, "profile '" + std::string(spec) + "': " + (want ? "missing argument" : "unexpected argument"));
  };
  if (head == "raw") {
    need_arg(false);
  } else if (head == "csv") {
    need_arg(false);
    p.kind = Profile::csv;
  } else if (head == "f32") {
    need_arg(false);
    p.kind = Profile::f32;
  } else if (head == "numeric-le" || head == "numeric-be") {
    need_arg(true);
    p.kind = head == "numeric-le" ? Profile::numeric_le : Profile::numeric_be;
    if (arg == "1") p.width = 1;
    else if (arg == "2") p.width = 2;
    else if (arg == "4") p.width = 4;
    else if (arg == "8") p.width = 8;
    else fail(Errc::invalid_argument, "profile '" + std::string(spec) + "': width must be 1, 2, 4 or 8");
  } else if (head == "sddl") {
    need_arg(true);
    p.kind = Profile::sddl;
    p.path = std::string(arg);
    std::ifstream f(p.path, std::ios::binary);
    if (!f) fail(Errc::io, "cannot read SDDL description '" + p.path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    p.description = ss.str();
    sddl::compile(p.description);  // report syntax errors up front
  } else {
    fail(Errc::invalid_argument, "unknown profile '" + std::string(spec) + "'");
  }
  return p;
}

/// Untrained configuration for a profile.
inline CompressorConfig seed_config(const Profile& p) {
  CompressorConfig c;
  auto& g = c.graphs["main"];
  g.root_types = {TypePattern::of(Kind::serial)};
  auto backend = [&](const char* fallback) {
    return g.add_graph("backend", Params().set("slot", "root").set("default", fallback));
  };
  switch (p.kind) {
    case Profile::raw: g.feed_roots(backend("auto")); break;
    case Profile::csv: g.feed_roots(g.add_graph("csv", Params().set("slot", "csv"))); break;
    case Profile::numeric_le:
    case Profile::numeric_be:
    case Profile::f32: {
      auto id = p.kind == Profile::numeric_be ? codecs::kSerialToNumericBE : codecs::kSerialToNumericLE;
      int conv = g.add_codec(id, Params().set("width", static_cast<std::int64_t>(p.kind == Profile::f32 ? 4 : p.width)));
      g.feed_roots(conv);
      g.connect({conv, 0}, backend(p.kind == Profile::f32 ? "float" : "auto"));
      break;
    }
    case Profile::sddl: g.feed_roots(g.add_graph("sddl", Params().set("description", p.description))); break;
  }
  return c;
}

inline CompressorConfig seed_config(std::string_view profile) { return seed_config(parse_profile(profile)); }

}  // namespace graphzip
