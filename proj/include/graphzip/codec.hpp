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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphzip/bytes.hpp"
#include "graphzip/params.hpp"
#include "graphzip/stream.hpp"

namespace graphzip {

/// Output-size accounting for decoders. Decoders charge the bytes they are
/// about to materialize before allocating, so a hostile header cannot force
/// an allocation larger than the configured cap.
class DecodeLimits {
 public:
  explicit DecodeLimits(std::uint64_t max_bytes) : max_bytes_(max_bytes) {}

  void charge(std::uint64_t bytes) {
    if (bytes > max_bytes_ - used_) fail(Errc::limit_exceeded, "decoded output exceeds the size limit");
    used_ += bytes;
  }

  /// Charges `count * unit` with overflow detection.
  void charge(std::uint64_t count, std::uint64_t unit) {
    if (unit != 0 && count > (max_bytes_ - used_) / unit)
      fail(Errc::limit_exceeded, "decoded output exceeds the size limit");
    used_ += count * unit;
  }

  std::uint64_t used() const { return used_; }
  std::uint64_t max_bytes() const { return max_bytes_; }

 private:
  std::uint64_t max_bytes_;
  std::uint64_t used_ = 0;
};

struct Encoded {
  std::vector<Stream> outputs;
  Bytes header;
};

using StreamSpan = std::span<const Stream>;
using TypeSpan = std::span<const StreamType>;
using PatternSpan = std::span<const TypePattern>;

/// Encoder: consumes the node's inputs, returns outputs plus the node header.
using EncodeFn = Encoded (*)(StreamSpan inputs, const Params& params);
/// Static typing: output patterns for given input patterns and params. Used by
/// graph validation before any data exists.
using OutPatternsFn = std::vector<TypePattern> (*)(PatternSpan inputs, const Params& params);
/// Decode-side typing: concrete output types from input types and the header.
/// Throws Errc::corrupt when the header is inconsistent.
using OutTypesFn = std::vector<StreamType> (*)(TypeSpan inputs, ByteView header);
/// Decoder: regenerates the inputs (of the given types) from the outputs.
using DecodeFn = std::vector<Stream> (*)(StreamSpan outputs, ByteView header, TypeSpan input_types,
                                         DecodeLimits& limits);

/// An encoder/decoder pair with typed ports and a stable wire identifier.
struct CodecSpec {
  std::uint32_t wire_id = 0;
  const char* name = "";
  std::vector<TypePattern> inputs;  // one pattern per input port
  bool variadic = false;            // when set, `inputs[0]` repeats (>= 1 port)
  const char* signature = "";       // human-readable port signature
  EncodeFn encode = nullptr;
  OutPatternsFn out_patterns = nullptr;
  OutTypesFn out_types = nullptr;
  DecodeFn decode = nullptr;

  bool accepts_arity(std::size_t n) const { return variadic ? n >= 1 : n == inputs.size(); }
  const TypePattern& input_pattern(std::size_t port) const { return variadic ? inputs[0] : inputs[port]; }
};

/// Checks concrete inputs against the codec's ports; Errc::codec_precondition otherwise.
inline void check_inputs(const CodecSpec& spec, StreamSpan inputs) {
  if (!spec.accepts_arity(inputs.size()))
    fail(Errc::codec_precondition, std::string(spec.name) + ": wrong number of inputs");
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (!spec.input_pattern(i).matches(inputs[i].type))
      fail(Errc::codec_precondition, std::string(spec.name) + ": input " + std::to_string(i) + " has type " +
                                         inputs[i].type.to_string() + ", expected " +
                                         spec.input_pattern(i).to_string());
}

}  // namespace graphzip
