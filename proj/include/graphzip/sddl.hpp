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

// SDDL: a small data description language. A description is compiled into a
// program; running the program over an input yields dispatch instructions
// that split the input into named destination streams.
//
//   format := decl* main
//   decl   := "record" NAME "{" field* "}"
//   field  := NAME ":" type ("->" DEST)? ";"
//   type   := prim | NAME | type "[" count "]" | type "[]"
//   prim   := u8 | u16le | u16be | u32le | u32be | u64le | u64be | f32le | bytes "(" INT ")"
//   count  := INT | NAME        (an integer field parsed earlier in the same record)
//   main   := "main" ":" type ";"
//
// "[]" repeats to the end of the input and may only close the type of main.
// Fields without "->" inherit the destination of the enclosing field, or go
// to the implicit destination "rest". "#" starts a comment.

#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "graphzip/graphs.hpp"

namespace graphzip::sddl {

using codecs::restructure::DispatchPlan;

inline constexpr std::uint64_t kFuelBase = 4096;
inline constexpr std::uint64_t kFuelPerByte = 16;
inline constexpr std::size_t kMaxTypeDepth = 64;
inline constexpr std::size_t kMaxDestinations = 255;

inline std::uint64_t fuel_for(std::uint64_t input_bytes) { return kFuelBase + kFuelPerByte * input_bytes; }

enum class Prim : std::uint8_t { u8, u16le, u16be, u32le, u32be, u64le, u64be, f32le, bytes };

inline unsigned prim_size(Prim p, std::uint32_t n) {
  switch (p) {
    case Prim::u8: return 1;
    case Prim::u16le:
    case Prim::u16be: return 2;
    case Prim::u32le:
    case Prim::u32be:
    case Prim::f32le: return 4;
    case Prim::u64le:
    case Prim::u64be: return 8;
    case Prim::bytes: return n;
  }
  return 0;
}

inline bool prim_is_integer(Prim p) { return p != Prim::f32le && p != Prim::bytes; }
inline bool prim_big_endian(Prim p) { return p == Prim::u16be || p == Prim::u32be || p == Prim::u64be; }

struct TypeNode {
  enum Kind { prim, record, array, tail } kind = prim;
  Prim p = Prim::u8;
  std::uint32_t bytes = 0;      // bytes(n)
  int rec = -1;                 // record index once resolved
  std::string record_name;
  int elem = -1;                // array / tail element type
  std::uint64_t count = 0;      // literal count
  int count_field = -1;         // or index of an earlier field
  std::size_t line = 0, column = 0;
};

struct Field {
  std::string name;
  int type = -1;
  int dest = -1;  // -1: inherit
};

struct Record {
  std::string name;
  std::vector<Field> fields;
  std::size_t line = 0, column = 0;
};

struct Destination {
  std::string name;
  StreamType type;
  bool big_endian = false;
};

struct Program {
  std::vector<TypeNode> types;
  std::vector<Record> records;
  int main = -1;
  std::vector<Destination> dests;  // first appearance order, "rest" last
  int rest = -1;
};

// --- compiler --------------------------------------------------------------------

namespace detail {

struct Token {
  enum Kind { ident, integer, punct, end } kind = end;
  std::string text;
  std::size_t line = 1, column = 1;
};

[[noreturn]] inline void syntax(std::size_t line, std::size_t col, const std::string& msg) {
  fail(Errc::sddl_syntax, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::integer;
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      j = i + 2;
      t.kind = Token::punct;
    } else if (std::string_view("{}:;[]()").find(c) != std::string_view::npos) {
      j = i + 1;
      t.kind = Token::punct;
    } else {
      syntax(line, col, "unexpected character '" + std::string(1, c) + "'");
    }
    t.text = std::string(src.substr(i, j - i));
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token e;
  e.line = line;
  e.column = col;
  out.push_back(e);
  return out;
}

inline std::optional<Prim> prim_named(std::string_view s) {
  static const std::pair<std::string_view, Prim> kPrims[] = {
      {"u8", Prim::u8},       {"u16le", Prim::u16le}, {"u16be", Prim::u16be}, {"u32le", Prim::u32le},
      {"u32be", Prim::u32be}, {"u64le", Prim::u64le}, {"u64be", Prim::u64be}, {"f32le", Prim::f32le},
      {"bytes", Prim::bytes}};
  for (const auto& [name, p] : kPrims)
    if (name == s) return p;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program parse() {
    while (peek().kind == Token::ident && peek().text == "record") parse_record();
    expect_word("main");
    expect(":");
    prog_.main = parse_type(nullptr, true);
    expect(";");
    if (peek().kind != Token::end) error(peek(), "unexpected '" + peek().text + "' after main");
    resolve();
    return std::move(prog_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const Token& t, const std::string& msg) { syntax(t.line, t.column, msg); }

  static std::string describe(const Token& t) { return t.kind == Token::end ? "end of input" : "'" + t.text + "'"; }

  void expect(std::string_view p) {
    const auto& t = peek();
    if (t.kind != Token::punct || t.text != p) error(t, "expected '" + std::string(p) + "', found " + describe(t));
    next();
  }

  void expect_word(std::string_view w) {
    const auto& t = peek();
    if (t.kind != Token::ident || t.text != w) error(t, "expected '" + std::string(w) + "', found " + describe(t));
    next();
  }

  std::string expect_ident(const char* what) {
    const auto& t = peek();
    if (t.kind != Token::ident) error(t, std::string("expected ") + what + ", found " + describe(t));
    return next().text;
  }

  std::uint64_t expect_int() {
    const auto& t = peek();
    if (t.kind != Token::integer) error(t, "expected an integer, found " + describe(t));
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || end != t.text.data() + t.text.size()) error(t, "integer out of range");
    next();
    return v;
  }

  int add(TypeNode n) {
    prog_.types.push_back(std::move(n));
    return static_cast<int>(prog_.types.size() - 1);
  }

  int dest_id(const std::string& name) {
    for (std::size_t i = 0; i < dest_names_.size(); ++i)
      if (dest_names_[i] == name) return static_cast<int>(i);
    dest_names_.push_back(name);
    return static_cast<int>(dest_names_.size() - 1);
  }

  void parse_record() {
    const auto& kw = next();
    Record r;
    r.line = kw.line;
    r.column = kw.column;
    const auto& name_tok = peek();
    r.name = expect_ident("a record name");
    if (prim_named(r.name) || r.name == "main" || r.name == "record")
      error(name_tok, "'" + r.name + "' is a reserved word");
    for (const auto& other : prog_.records)
      if (other.name == r.name) error(name_tok, "record '" + r.name + "' is defined twice");
    expect("{");
    while (!(peek().kind == Token::punct && peek().text == "}")) {
      Field f;
      const auto& ft = peek();
      f.name = expect_ident("a field name");
      for (const auto& other : r.fields)
        if (other.name == f.name) error(ft, "field '" + f.name + "' is defined twice");
      expect(":");
      f.type = parse_type(&r, false);
      if (peek().kind == Token::punct && peek().text == "->") {
        next();
        auto d = expect_ident("a destination name");
        f.dest = dest_id(d);
      }
      expect(";");
      r.fields.push_back(std::move(f));
    }
    expect("}");
    prog_.records.push_back(std::move(r));
  }

  int parse_type(const Record* rec, bool is_main) {
    const auto& t = peek();
    auto name = expect_ident("a type");
    TypeNode base;
    base.line = t.line;
    base.column = t.column;
    if (auto p = prim_named(name)) {
      base.kind = TypeNode::prim;
      base.p = *p;
      if (*p == Prim::bytes) {
        expect("(");
        auto n = expect_int();
        if (n > 0xFFFFFFFFu) error(t, "bytes() size out of range");
        base.bytes = static_cast<std::uint32_t>(n);
        expect(")");
      }
    } else {
      base.kind = TypeNode::record;
      base.record_name = name;
    }
    int cur = add(std::move(base));
    bool tail_seen = false;
    while (peek().kind == Token::punct && peek().text == "[") {
      const auto& open = next();
      if (tail_seen) error(open, "'[]' must be the outermost suffix");
      TypeNode arr;
      arr.line = open.line;
      arr.column = open.column;
      arr.elem = cur;
      if (peek().kind == Token::punct && peek().text == "]") {
        if (!is_main) error(open, "'[]' is only allowed in the type of main");
        arr.kind = TypeNode::tail;
        tail_seen = true;
      } else if (peek().kind == Token::integer) {
        arr.kind = TypeNode::array;
        arr.count = expect_int();
      } else {
        const auto& ct = peek();
        auto field = expect_ident("an array count");
        arr.kind = TypeNode::array;
        int idx = -1;
        if (rec)
          for (std::size_t i = 0; i < rec->fields.size(); ++i)
            if (rec->fields[i].name == field) idx = static_cast<int>(i);
        if (idx < 0) error(ct, "count '" + field + "' does not name an earlier field of this record");
        const auto& ftype = prog_.types[static_cast<std::size_t>(rec->fields[static_cast<std::size_t>(idx)].type)];
        if (ftype.kind != TypeNode::prim || !prim_is_integer(ftype.p))
          error(ct, "count field '" + field + "' is not an integer");
        arr.count_field = idx;
      }
      expect("]");
      cur = add(std::move(arr));
    }
    return cur;
  }

  std::size_t depth_of(int t, std::vector<int>& state, std::vector<std::size_t>& rec_depth) {
    const auto& n = prog_.types[static_cast<std::size_t>(t)];
    switch (n.kind) {
      case TypeNode::prim: return 1;
      case TypeNode::array:
      case TypeNode::tail: return 1 + depth_of(n.elem, state, rec_depth);
      case TypeNode::record: {
        auto r = static_cast<std::size_t>(n.rec);
        if (state[r] == 1) syntax(n.line, n.column, "recursive record '" + prog_.records[r].name + "'");
        if (state[r] == 0) {
          state[r] = 1;
          std::size_t d = 0;
          for (const auto& f : prog_.records[r].fields) d = std::max(d, depth_of(f.type, state, rec_depth));
          rec_depth[r] = d;
          state[r] = 2;
        }
        return 1 + rec_depth[r];
      }
    }
    return 1;
  }

  void note_dest(std::vector<std::optional<std::pair<Prim, std::uint32_t>>>& seen, std::vector<bool>& mixed,
                 std::vector<bool>& any, int dest, Prim p, std::uint32_t bytes) {
    auto d = static_cast<std::size_t>(dest);
    std::pair<Prim, std::uint32_t> key{p, p == Prim::bytes ? bytes : 0};
    if (!any[d]) {
      any[d] = true;
      seen[d] = key;
    } else if (seen[d] != key) {
      mixed[d] = true;
    }
  }

  void walk(int t, int dest, std::vector<std::optional<std::pair<Prim, std::uint32_t>>>& seen,
            std::vector<bool>& mixed, std::vector<bool>& any) {
    const auto& n = prog_.types[static_cast<std::size_t>(t)];
    switch (n.kind) {
      case TypeNode::prim: note_dest(seen, mixed, any, dest, n.p, n.bytes); break;
      case TypeNode::array:
      case TypeNode::tail: walk(n.elem, dest, seen, mixed, any); break;
      case TypeNode::record:
        for (const auto& f : prog_.records[static_cast<std::size_t>(n.rec)].fields)
          walk(f.type, f.dest >= 0 ? f.dest : dest, seen, mixed, any);
        break;
    }
  }

  void resolve() {
    for (auto& n : prog_.types) {
      if (n.kind != TypeNode::record) continue;
      for (std::size_t i = 0; i < prog_.records.size(); ++i)
        if (prog_.records[i].name == n.record_name) n.rec = static_cast<int>(i);
      if (n.rec < 0) syntax(n.line, n.column, "unknown type '" + n.record_name + "'");
    }
    std::vector<int> state(prog_.records.size(), 0);
    std::vector<std::size_t> rec_depth(prog_.records.size(), 0);
    for (std::size_t r = 0; r < prog_.records.size(); ++r) {
      TypeNode probe;
      probe.kind = TypeNode::record;
      probe.rec = static_cast<int>(r);
      probe.line = prog_.records[r].line;
      probe.column = prog_.records[r].column;
      prog_.types.push_back(probe);
      auto d = depth_of(static_cast<int>(prog_.types.size() - 1), state, rec_depth);
      prog_.types.pop_back();
      if (d > kMaxTypeDepth) syntax(probe.line, probe.column, "types nest too deeply");
    }
    const auto& m = prog_.types[static_cast<std::size_t>(prog_.main)];
    if (depth_of(prog_.main, state, rec_depth) > kMaxTypeDepth) syntax(m.line, m.column, "types nest too deeply");

    // Destinations: named ones in order of first appearance, then "rest".
    int rest = -1;
    for (std::size_t i = 0; i < dest_names_.size(); ++i)
      if (dest_names_[i] == "rest") rest = static_cast<int>(i);
    std::vector<int> remap(dest_names_.size());
    std::vector<std::string> order;
    for (std::size_t i = 0; i < dest_names_.size(); ++i) {
      if (static_cast<int>(i) == rest) continue;
      remap[i] = static_cast<int>(order.size());
      order.push_back(dest_names_[i]);
    }
    if (rest >= 0) remap[static_cast<std::size_t>(rest)] = static_cast<int>(order.size());
    order.push_back("rest");
    if (order.size() > kMaxDestinations) syntax(1, 1, "too many destinations");
    for (auto& r : prog_.records)
      for (auto& f : r.fields)
        if (f.dest >= 0) f.dest = remap[static_cast<std::size_t>(f.dest)];
    prog_.rest = static_cast<int>(order.size() - 1);

    std::vector<std::optional<std::pair<Prim, std::uint32_t>>> seen(order.size());
    std::vector<bool> mixed(order.size(), false), any(order.size(), false);
    walk(prog_.main, prog_.rest, seen, mixed, any);
    for (std::size_t i = 0; i < order.size(); ++i) {
      Destination d{order[i], StreamType::serial(), false};
      if (any[i] && !mixed[i]) {
        auto [p, n] = *seen[i];
        if (p == Prim::bytes) {
          if (n > 1) d.type = StreamType::record(n);
        } else if (p != Prim::u8) {
          d.type = StreamType::numeric(prim_size(p, 0));
          d.big_endian = prim_big_endian(p);
        }
      }
      prog_.dests.push_back(std::move(d));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program prog_;
  std::vector<std::string> dest_names_;
};

}  // namespace detail

/// Compiles a description. Errors carry Errc::sddl_syntax and a line/column.
inline Program compile(std::string_view description) { return detail::Parser(description).parse(); }

// --- interpreter -----------------------------------------------------------------

namespace detail {

class Machine {
 public:
  Machine(const Program& p, ByteView in, std::uint64_t fuel) : p_(p), in_(in), fuel_(fuel) {}

  DispatchPlan run() {
    exec(p_.main, p_.rest);
    if (pos_ != in_.size())
      fail(Errc::sddl_underrun, "description ends at byte " + std::to_string(pos_) + " of " +
                                    std::to_string(in_.size()));
    return std::move(plan_);
  }

 private:
  void burn(std::uint64_t n) {
    if (n > fuel_) {
      fuel_ = 0;
      fail(Errc::fuel_exhausted, "fuel exhausted at byte " + std::to_string(pos_));
    }
    fuel_ -= n;
  }

  std::uint64_t remaining() const { return in_.size() - pos_; }

  void emit(int dest, std::uint64_t len) {
    while (len > 0) {
      auto d = static_cast<std::uint8_t>(dest);
      if (!plan_.targets.empty() && plan_.targets.back() == d && plan_.lengths.back() < 0xFFFFFFFFu) {
        auto room = std::min<std::uint64_t>(len, 0xFFFFFFFFu - plan_.lengths.back());
        plan_.lengths.back() += static_cast<std::uint32_t>(room);
        len -= room;
        continue;
      }
      auto run = std::min<std::uint64_t>(len, 0xFFFFFFFFu);
      plan_.targets.push_back(d);
      plan_.lengths.push_back(static_cast<std::uint32_t>(run));
      len -= run;
    }
  }

  void underrun(std::uint64_t need) {
    fail(Errc::sddl_underrun, "input ends at byte " + std::to_string(in_.size()) + ", needed " +
                                  std::to_string(need) + " more at byte " + std::to_string(pos_));
  }

  /// Consumes `n` primitives of size `s` routed to `dest`.
  void prims(std::uint64_t n, unsigned s, int dest) {
    if (s != 0 && n > remaining() / s) underrun(n > UINT64_MAX / s ? UINT64_MAX : n * s);
    burn(n);
    emit(dest, n * s);
    pos_ += static_cast<std::size_t>(n * s);
  }

  std::uint64_t read_int(Prim p) {
    unsigned s = prim_size(p, 0);
    if (s > remaining()) underrun(s);
    std::uint64_t v = 0;
    if (prim_big_endian(p))
      for (unsigned i = 0; i < s; ++i) v = (v << 8) | in_[pos_ + i];
    else
      v = load_le(in_.data() + pos_, s);
    return v;
  }

  void exec(int t, int dest, std::vector<std::uint64_t>* values = nullptr, std::size_t field = 0) {
    burn(1);
    const auto& n = p_.types[static_cast<std::size_t>(t)];
    switch (n.kind) {
      case TypeNode::prim: {
        if (values && prim_is_integer(n.p)) (*values)[field] = read_int(n.p);
        prims(1, prim_size(n.p, n.bytes), dest);
        return;
      }
      case TypeNode::record: {
        const auto& rec = p_.records[static_cast<std::size_t>(n.rec)];
        std::vector<std::uint64_t> vals(rec.fields.size(), 0);
        for (std::size_t i = 0; i < rec.fields.size(); ++i) {
          const auto& f = rec.fields[i];
          exec(f.type, f.dest >= 0 ? f.dest : dest, &vals, i);
        }
        return;
      }
      case TypeNode::array: {
        std::uint64_t count = n.count_field >= 0 ? (*values)[static_cast<std::size_t>(n.count_field)] : n.count;
        const auto& e = p_.types[static_cast<std::size_t>(n.elem)];
        if (e.kind == TypeNode::prim) {
          prims(count, prim_size(e.p, e.bytes), dest);
          return;
        }
        for (std::uint64_t i = 0; i < count; ++i) exec(n.elem, dest);
        return;
      }
      case TypeNode::tail: {
        const auto& e = p_.types[static_cast<std::size_t>(n.elem)];
        if (e.kind == TypeNode::prim) {
          auto s = prim_size(e.p, e.bytes);
          if (s == 0) {
            if (remaining() == 0) return;
            burn(fuel_ + 1);
          }
          if (remaining() % s) underrun(s - remaining() % s);
          prims(remaining() / s, s, dest);
          return;
        }
        while (remaining() > 0) exec(n.elem, dest);
        return;
      }
    }
  }

  const Program& p_;
  ByteView in_;
  std::uint64_t fuel_;
  std::size_t pos_ = 0;
  DispatchPlan plan_;
};

}  // namespace detail

/// Runs `p` over `input`. The instructions cover the input exactly; adjacent
/// runs to the same destination are merged.
inline DispatchPlan execute(const Program& p, ByteView input, std::optional<std::uint64_t> fuel = std::nullopt) {
  return detail::Machine(p, input, fuel.value_or(fuel_for(input.size()))).run();
}

// --- graph -----------------------------------------------------------------------

/// Graph splitting a Serial input with the program in parameter `description`.
/// Each destination is converted to its declared type and sent to backend slot
/// "sddl.<name>"; the routing streams go to `auto`.
inline CompressorGraph sddl_graph(Context& ctx, const Params& params, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1 || !(types[0] == StreamType::serial()))
    fail(Errc::codec_precondition, "sddl graph takes one serial input");
  auto prog = compile(params.get_string("description", ""));
  auto plan = execute(prog, ctx.inputs()[0].content);
  auto n = prog.dests.size();
  Params dp;
  dp.set("n", static_cast<std::int64_t>(n));
  dp.set("mode", std::int64_t{codecs::restructure::kDispatchSerial});
  dp.set("targets", Params::IntList(plan.targets.begin(), plan.targets.end()));
  dp.set("lengths", Params::IntList(plan.lengths.begin(), plan.lengths.end()));
  auto g = graphs::store_graph(types);
  int d = g.add_codec(codecs::kDispatch, std::move(dp));
  g.feed_roots(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& dest = prog.dests[i];
    PortRef src{d, i};
    if (dest.type.kind == Kind::numeric) {
      int c = g.add_codec(dest.big_endian ? codecs::kSerialToNumericBE : codecs::kSerialToNumericLE,
                          Params().set("width", static_cast<std::int64_t>(dest.type.width)));
      g.connect(src, c);
      src = {c, 0};
    } else if (dest.type.kind == Kind::record) {
      int c = g.add_codec(codecs::kSerialToRecord, Params().set("width", static_cast<std::int64_t>(dest.type.width)));
      g.connect(src, c);
      src = {c, 0};
    }
    Params bp;
    bp.set("slot", "sddl." + dest.name).set("default", "auto");
    g.connect(src, g.add_graph("backend", bp));
  }
  g.connect({d, static_cast<std::uint32_t>(n)}, g.add_graph("auto"));
  g.connect({d, static_cast<std::uint32_t>(n + 1)}, g.add_graph("auto"));
  return g;
}

}  // namespace graphzip::sddl
