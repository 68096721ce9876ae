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

#include <map>
#include <string>
#include <string_view>

#include "graphzip/codecs/bitpack.hpp"
#include "graphzip/codecs/conversion.hpp"
#include "graphzip/codecs/huffman.hpp"
#include "graphzip/codecs/lz.hpp"
#include "graphzip/codecs/restructure.hpp"
#include "graphzip/codecs/transform.hpp"

namespace graphzip {

inline constexpr std::uint64_t kFormatVersion = 1;

/// Immutable wire_id -> codec table for one format version.
class CodecRegistry {
 public:
  explicit CodecRegistry(std::vector<CodecSpec> specs) {
    for (auto& s : specs) {
      auto id = s.wire_id;
      require(by_id_.emplace(id, std::move(s)).second, Errc::invalid_argument, "duplicate wire id");
      by_name_.emplace(by_id_.at(id).name, id);
    }
  }

  const CodecSpec* find(std::uint32_t wire_id) const {
    auto it = by_id_.find(wire_id);
    return it == by_id_.end() ? nullptr : &it->second;
  }

  const CodecSpec* find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : find(it->second);
  }

  const CodecSpec& at(std::uint64_t wire_id) const {
    if (wire_id > 0xFFFFFFFFull || !find(static_cast<std::uint32_t>(wire_id)))
      fail(Errc::unknown_codec, "unknown codec wire id " + std::to_string(wire_id));
    return *find(static_cast<std::uint32_t>(wire_id));
  }

  /// Codecs in ascending wire-id order.
  const std::map<std::uint32_t, CodecSpec>& all() const { return by_id_; }
  std::size_t size() const { return by_id_.size(); }

 private:
  std::map<std::uint32_t, CodecSpec> by_id_;
  std::map<std::string, std::uint32_t> by_name_;
};

/// The standard codecs registered for `version`.
inline const CodecRegistry& registry(std::uint64_t version = kFormatVersion) {
  static const CodecRegistry v1 = [] {
    std::vector<CodecSpec> specs;
    for (auto* group : {codecs::conversion_codecs, codecs::restructure_codecs, codecs::transform_codecs,
                        codecs::bitpack_codecs, codecs::lz_codecs})
      for (auto& s : group()) specs.push_back(std::move(s));
    specs.push_back(codecs::huffman_codec());
    return CodecRegistry(std::move(specs));
  }();
  if (version != 1) fail(Errc::unsupported_version, "no codec registry for format version " + std::to_string(version));
  return v1;
}

}  // namespace graphzip
