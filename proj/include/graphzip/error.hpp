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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphzip {

/// Error categories. Every failure raised by the library carries exactly one.
enum class Errc {
  invalid_argument,
  codec_precondition,  // encoder input violates the codec contract
  budget_exceeded,     // compression-side node/depth/byte budget
  selector_mismatch,   // selector returned a graph that does not fit its input
  unknown_codec,
  corrupt,             // decoder found inconsistent payload or header
  limit_exceeded,      // decompression-side output cap
  bad_magic,
  unsupported_version,
  truncated,
  graph_invalid,
  checksum_mismatch,
  config_invalid,
  sddl_syntax,
  sddl_underrun,
  fuel_exhausted,
  csv_format,
  io,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::codec_precondition: return "codec_precondition";
    case Errc::budget_exceeded: return "budget_exceeded";
    case Errc::selector_mismatch: return "selector_mismatch";
    case Errc::unknown_codec: return "unknown_codec";
    case Errc::corrupt: return "corrupt";
    case Errc::limit_exceeded: return "limit_exceeded";
    case Errc::bad_magic: return "bad_magic";
    case Errc::unsupported_version: return "unsupported_version";
    case Errc::truncated: return "truncated";
    case Errc::graph_invalid: return "graph_invalid";
    case Errc::checksum_mismatch: return "checksum_mismatch";
    case Errc::config_invalid: return "config_invalid";
    case Errc::sddl_syntax: return "sddl_syntax";
    case Errc::sddl_underrun: return "sddl_underrun";
    case Errc::fuel_exhausted: return "fuel_exhausted";
    case Errc::csv_format: return "csv_format";
    case Errc::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const char* what) {
  if (!cond) fail(code, what);
}

}  // namespace graphzip
