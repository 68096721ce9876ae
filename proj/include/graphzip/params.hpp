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
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "graphzip/error.hpp"

namespace graphzip {

/// Static parameters attached to graph nodes. Values are integers, strings or
/// lists of either; the key order is sorted, which keeps serialization canonical.
class Params {
 public:
  using IntList = std::vector<std::int64_t>;
  using StringList = std::vector<std::string>;
  using Value = std::variant<std::int64_t, std::string, IntList, StringList>;

  Params() = default;

  Params& set(const std::string& key, std::int64_t v) { return put(key, v); }
  Params& set(const std::string& key, int v) { return put(key, std::int64_t{v}); }
  Params& set(const std::string& key, std::string v) { return put(key, std::move(v)); }
  Params& set(const std::string& key, const char* v) { return put(key, std::string(v)); }
  Params& set(const std::string& key, IntList v) { return put(key, std::move(v)); }
  Params& set(const std::string& key, StringList v) { return put(key, std::move(v)); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  bool empty() const { return values_.empty(); }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return as<std::int64_t>(key, it->second);
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return as<std::string>(key, it->second);
  }

  const IntList& get_ints(const std::string& key) const {
    static const IntList kEmpty;
    auto it = values_.find(key);
    if (it == values_.end()) return kEmpty;
    return as<IntList>(key, it->second);
  }

  const StringList& get_strings(const std::string& key) const {
    static const StringList kEmpty;
    auto it = values_.find(key);
    if (it == values_.end()) return kEmpty;
    // An empty list has no element kind; text formats read it back as IntList.
    if (auto* ints = std::get_if<IntList>(&it->second); ints && ints->empty()) return kEmpty;
    return as<StringList>(key, it->second);
  }

  const std::map<std::string, Value>& values() const { return values_; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  Params& put(const std::string& key, Value v) {
    values_[key] = std::move(v);
    return *this;
  }

  template <class T>
  static const T& as(const std::string& key, const Value& v) {
    if (auto* p = std::get_if<T>(&v)) return *p;
    fail(Errc::invalid_argument, "parameter '" + key + "' has the wrong kind");
  }

  std::map<std::string, Value> values_;
};

}  // namespace graphzip
