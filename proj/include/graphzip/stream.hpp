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

// Typed streams: the messages that flow along compression-graph edges.

#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "graphzip/bytes.hpp"

namespace graphzip {

enum class Kind : std::uint8_t { serial = 0, record = 1, numeric = 2, strings = 3 };

inline bool valid_numeric_width(std::uint64_t w) { return w == 1 || w == 2 || w == 4 || w == 8; }

/// Semantic type of a stream. `width` is the element size in bytes for
/// Record (>= 1) and Numeric (1, 2, 4 or 8); it is zero for Serial and Strings.
struct StreamType {
  Kind kind = Kind::serial;
  std::uint32_t width = 0;

  static constexpr StreamType serial() { return {Kind::serial, 0}; }
  static constexpr StreamType strings() { return {Kind::strings, 0}; }
  static StreamType record(std::uint64_t k) {
    require(k >= 1 && k <= 0xFFFFFFFFu, Errc::invalid_argument, "record width must be >= 1");
    return {Kind::record, static_cast<std::uint32_t>(k)};
  }
  static StreamType numeric(std::uint64_t w) {
    require(valid_numeric_width(w), Errc::invalid_argument, "numeric width must be 1, 2, 4 or 8");
    return {Kind::numeric, static_cast<std::uint32_t>(w)};
  }

  bool fixed_width() const { return kind != Kind::strings; }
  /// Bytes per element for fixed-width kinds (Serial elements are single bytes).
  std::uint32_t element_size() const { return kind == Kind::serial ? 1 : width; }

  friend bool operator==(const StreamType&, const StreamType&) = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::serial: return "serial";
      case Kind::strings: return "strings";
      case Kind::record: return "record(" + std::to_string(width) + ")";
      case Kind::numeric: return "numeric(" + std::to_string(width) + ")";
    }
    return "?";
  }
};

/// A set of stream types accepted by a port: a mask of kinds plus an optional
/// exact width (0 = any width).
struct TypePattern {
  std::uint8_t kinds = 0;
  std::uint32_t width = 0;

  static constexpr std::uint8_t bit(Kind k) { return std::uint8_t(1u << unsigned(k)); }

  static constexpr TypePattern exactly(StreamType t) { return {bit(t.kind), t.width}; }
  static constexpr TypePattern of(Kind k, std::uint32_t width = 0) { return {bit(k), width}; }
  static constexpr TypePattern any() { return {0x0F, 0}; }
  static constexpr TypePattern fixed() {
    return {std::uint8_t(bit(Kind::serial) | bit(Kind::record) | bit(Kind::numeric)), 0};
  }

  bool matches(StreamType t) const {
    if (!(kinds & bit(t.kind))) return false;
    if (width == 0 || t.kind == Kind::serial || t.kind == Kind::strings) return true;
    return t.width == width;
  }

  /// True when some concrete type satisfies both patterns.
  bool intersects(const TypePattern& o) const {
    std::uint8_t common = kinds & o.kinds;
    if (!common) return false;
    if (common & (bit(Kind::serial) | bit(Kind::strings))) return true;
    return width == 0 || o.width == 0 || width == o.width;
  }

  friend bool operator==(const TypePattern&, const TypePattern&) = default;

  std::string to_string() const;
};

inline std::string TypePattern::to_string() const {
  if (*this == any()) return "any";
  if (*this == fixed()) return "fixed";
  std::string s;
  auto add = [&](Kind k, const char* name, bool sized) {
    if (!(kinds & bit(k))) return;
    if (!s.empty()) s += "|";
    s += name;
    if (sized && width) s += "(" + std::to_string(width) + ")";
  };
  add(Kind::serial, "serial", false);
  add(Kind::record, "record", true);
  add(Kind::numeric, "numeric", true);
  add(Kind::strings, "strings", false);
  return s;
}

/// A typed message. Fixed-width kinds store `count * element_size()` content
/// bytes (Numeric elements little-endian); Strings keep per-element lengths.
struct Stream {
  StreamType type;
  Bytes content;
  std::uint64_t count = 0;
  std::vector<std::uint32_t> lengths;

  static Stream serial(Bytes b) {
    Stream s;
    s.type = StreamType::serial();
    s.count = b.size();
    s.content = std::move(b);
    return s;
  }

  static Stream serial(std::string_view text) { return serial(to_bytes(text)); }

  static Stream fixed(StreamType t, Bytes b) {
    Stream s;
    s.type = t;
    auto es = t.element_size();
    require(es > 0 && b.size() % es == 0, Errc::invalid_argument,
            "content length not a multiple of the element width");
    s.count = b.size() / es;
    s.content = std::move(b);
    return s;
  }

  static Stream numeric(unsigned width, const std::vector<std::uint64_t>& values) {
    Stream s;
    s.type = StreamType::numeric(width);
    s.count = values.size();
    s.content.resize(values.size() * width);
    for (std::size_t i = 0; i < values.size(); ++i) store_le(&s.content[i * width], width, values[i]);
    return s;
  }

  static Stream strings(const std::vector<std::string>& items) {
    Stream s;
    s.type = StreamType::strings();
    s.count = items.size();
    for (const auto& it : items) {
      s.lengths.push_back(static_cast<std::uint32_t>(it.size()));
      s.content.insert(s.content.end(), it.begin(), it.end());
    }
    return s;
  }

  static Stream strings(Bytes content, std::vector<std::uint32_t> lengths) {
    Stream s;
    s.type = StreamType::strings();
    s.count = lengths.size();
    s.content = std::move(content);
    s.lengths = std::move(lengths);
    s.check();
    return s;
  }

  /// Numeric element i as an unsigned value.
  std::uint64_t value(std::size_t i) const { return load_le(&content[i * type.width], type.width); }

  std::vector<std::uint64_t> values() const {
    std::vector<std::uint64_t> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = value(i);
    return v;
  }

  /// Strings elements as owned strings (test and diagnostics helper).
  std::vector<std::string> string_items() const {
    std::vector<std::string> out;
    std::size_t off = 0;
    for (auto len : lengths) {
      out.emplace_back(reinterpret_cast<const char*>(content.data()) + off, len);
      off += len;
    }
    return out;
  }

  std::uint64_t byte_size() const { return content.size() + lengths.size() * sizeof(std::uint32_t); }

  /// Verifies the type/content invariants; throws Errc::corrupt on violation.
  void check() const {
    switch (type.kind) {
      case Kind::serial:
        require(type.width == 0 && count == content.size(), Errc::corrupt, "serial stream count mismatch");
        require(lengths.empty(), Errc::corrupt, "serial stream carries lengths");
        break;
      case Kind::record:
      case Kind::numeric:
        require(type.width >= 1, Errc::corrupt, "zero element width");
        require(type.kind == Kind::record || valid_numeric_width(type.width), Errc::corrupt,
                "invalid numeric width");
        require(content.size() % type.width == 0 && content.size() / type.width == count, Errc::corrupt,
                "fixed-width stream size mismatch");
        require(lengths.empty(), Errc::corrupt, "fixed-width stream carries lengths");
        break;
      case Kind::strings: {
        require(type.width == 0 && lengths.size() == count, Errc::corrupt, "strings length table mismatch");
        std::uint64_t total = 0;
        for (auto l : lengths) total += l;
        require(total == content.size(), Errc::corrupt, "strings lengths do not sum to content size");
        break;
      }
    }
  }

  friend bool operator==(const Stream&, const Stream&) = default;
};

}  // namespace graphzip
