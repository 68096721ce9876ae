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

// Random SDDL descriptions and inputs for sandbox fuzzing.

#pragma once

#include <string>

#include "graphzip/sddl.hpp"
#include "test_util.hpp"

namespace gz_test {

inline std::string random_prim(Rng& rng) {
  static const char* kPrims[] = {"u8", "u16le", "u16be", "u32le", "u32be", "u64le", "u64be", "f32le"};
  if (uniform(rng, 0, 8) == 0) return "bytes(" + std::to_string(uniform(rng, 0, 5)) + ")";
  return kPrims[uniform(rng, 0, 7)];
}

/// A mostly well-formed description. Some count fields read large values and
/// some records reference later or missing records, so failures of every kind
/// show up alongside successful runs.
inline std::string random_description(Rng& rng) {
  auto nrec = uniform(rng, 0, 3);
  std::string d;
  for (std::uint64_t r = 0; r < nrec; ++r) {
    d += "record R" + std::to_string(r) + " {";
    auto nf = uniform(rng, 1, 4);
    std::vector<std::string> ints;
    for (std::uint64_t f = 0; f < nf; ++f) {
      std::string name = "f" + std::to_string(f);
      std::string type;
      auto pick = uniform(rng, 0, 9);
      if (pick < 6) {
        type = random_prim(rng);
      } else if (pick < 8 && r + 1 < nrec + 1) {
        type = "R" + std::to_string(uniform(rng, 0, nrec));  // may be forward, self or missing
      } else {
        type = random_prim(rng);
      }
      if (uniform(rng, 0, 2) == 0) {
        std::string count = !ints.empty() && uniform(rng, 0, 1) ? ints[uniform(rng, 0, ints.size() - 1)]
                                                                : std::to_string(uniform(rng, 0, 6));
        type += "[" + count + "]";
      }
      if (type.find('[') == std::string::npos && type[0] == 'u') ints.push_back(name);
      d += " " + name + ": " + type;
      if (uniform(rng, 0, 1)) d += " -> d" + std::to_string(uniform(rng, 0, 3));
      d += ";";
    }
    d += " }\n";
  }
  std::string main = nrec && uniform(rng, 0, 2) ? "R" + std::to_string(uniform(rng, 0, nrec - 1)) : random_prim(rng);
  if (uniform(rng, 0, 1)) main += "[" + std::to_string(uniform(rng, 0, 4)) + "]";
  if (uniform(rng, 0, 3)) main += "[]";
  d += "main: " + main + ";";
  // Occasional byte-level damage exercises the lexer and parser.
  if (uniform(rng, 0, 9) == 0) {
    auto edits = uniform(rng, 1, 3);
    for (std::uint64_t e = 0; e < edits && !d.empty(); ++e)
      d[uniform(rng, 0, d.size() - 1)] = static_cast<char>(uniform(rng, 32, 126));
  }
  return d;
}

inline Bytes random_input(Rng& rng) {
  Bytes b(uniform(rng, 0, 64));
  // Small values keep count fields plausible some of the time.
  bool small = uniform(rng, 0, 1);
  for (auto& x : b) x = static_cast<std::uint8_t>(small ? uniform(rng, 0, 4) : rng());
  return b;
}

struct SandboxTally {
  std::uint64_t runs = 0, compiled = 0, succeeded = 0, violations = 0;
};

/// One fuzz case. Counts a violation when a run escapes with an untyped error,
/// reports the wrong error class, or breaks coverage.
inline void sandbox_case(Rng& rng, SandboxTally& t) {
  ++t.runs;
  auto desc = random_description(rng);
  graphzip::sddl::Program p;
  try {
    p = graphzip::sddl::compile(desc);
  } catch (const graphzip::Error& e) {
    if (e.code() != graphzip::Errc::sddl_syntax) ++t.violations;
    return;
  } catch (...) {
    ++t.violations;
    return;
  }
  ++t.compiled;
  auto in = random_input(rng);
  try {
    auto plan = graphzip::sddl::execute(p, in);
    std::uint64_t sum = 0;
    for (auto l : plan.lengths) sum += l;
    for (auto tgt : plan.targets)
      if (tgt >= p.dests.size()) ++t.violations;
    if (sum != in.size()) ++t.violations;
    ++t.succeeded;
  } catch (const graphzip::Error& e) {
    if (e.code() != graphzip::Errc::sddl_underrun && e.code() != graphzip::Errc::fuel_exhausted) ++t.violations;
  } catch (...) {
    ++t.violations;
  }
}

}  // namespace gz_test
