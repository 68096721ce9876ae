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

// CSV frontend. A table is split into one Strings stream per column plus a
// framing stream holding delimiters, quotes, line terminators and the header
// row. The split is expressed as dispatch instructions, so decoding needs no
// CSV code at all.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "graphzip/graphs.hpp"

namespace graphzip::csv {

using codecs::restructure::DispatchPlan;

inline constexpr std::size_t kMaxColumns = 255;

struct CsvDialect {
  std::uint8_t delimiter = ',';
  bool has_header = true;
};

inline constexpr std::uint8_t kQuote = '"';

enum Terminator : std::uint8_t { kNone = 0, kLF = 1, kCRLF = 2 };

struct CsvTable {
  std::vector<std::string> tags;  // one per column
  std::vector<Stream> columns;    // Strings; cells keep RFC 4180 escaping ("" stays doubled)
  Stream quote_flags;             // Numeric(1), one per data cell in row-major order
  Stream terminators;             // Numeric(1), one per row including the header
  DispatchPlan plan;              // dispatch, strings mode: column i -> target i, framing -> target columns.size()
  std::size_t rows = 0;           // data rows
};

namespace detail {

class Splitter {
 public:
  Splitter(ByteView in, CsvDialect d) : in_(in), d_(d) {
    if (d.delimiter == kQuote || d.delimiter == '\n' || d.delimiter == '\r')
      fail(Errc::invalid_argument, "csv: delimiter must differ from quote and newline bytes");
  }

  CsvTable run() {
    CsvTable t;
    t.quote_flags.type = StreamType::numeric(1);
    t.terminators.type = StreamType::numeric(1);
    std::size_t row = 0;
    while (pos_ < in_.size()) {
      cells_.clear();
      auto term = parse_row(row);
      if (row == 0) {
        if (cells_.size() > kMaxColumns)
          fail(Errc::csv_format, "csv: " + std::to_string(cells_.size()) + " columns exceed the limit of 255");
        ncols_ = cells_.size();
        t.columns.assign(ncols_, Stream::strings({}));
        if (d_.has_header) t.tags = header_tags();
      } else if (cells_.size() != ncols_) {
        fail(Errc::csv_format, "csv: ragged row " + std::to_string(row + 1) + ": " + std::to_string(cells_.size()) +
                                   " fields, expected " + std::to_string(ncols_));
      }
      t.terminators.content.push_back(term);
      bool header = row == 0 && d_.has_header;
      for (std::size_t i = 0; i < cells_.size(); ++i) {
        const auto& c = cells_[i];
        if (header) {
          frame(t, c.end_all - c.begin_all);
          continue;
        }
        if (c.quoted) frame(t, 1);
        run_to(t, static_cast<std::uint8_t>(i), c.end - c.begin);
        t.columns[i].content.insert(t.columns[i].content.end(), in_.begin() + static_cast<std::ptrdiff_t>(c.begin),
                                    in_.begin() + static_cast<std::ptrdiff_t>(c.end));
        t.columns[i].lengths.push_back(c.end - c.begin);
        t.quote_flags.content.push_back(c.quoted ? 1 : 0);
        if (c.quoted) frame(t, 1);
        frame(t, c.sep);
      }
      if (!header) ++t.rows;
      ++row;
    }
    if (t.tags.empty())
      for (std::size_t i = 0; i < ncols_; ++i) t.tags.push_back("col" + std::to_string(i));
    for (auto& c : t.columns) c.count = c.lengths.size();
    t.quote_flags.count = t.quote_flags.content.size();
    t.terminators.count = t.terminators.content.size();
    return t;
  }

 private:
  struct Cell {
    std::size_t begin_all, end_all;  // including quotes and the following separator
    std::size_t begin, end;          // cell content
    std::size_t sep;                 // bytes of delimiter or terminator after the cell
    bool quoted;
  };

  std::uint8_t parse_row(std::size_t row) {
    for (;;) {
      Cell c{};
      c.begin_all = pos_;
      if (pos_ < in_.size() && in_[pos_] == kQuote) {
        c.quoted = true;
        c.begin = ++pos_;
        for (;;) {
          if (pos_ >= in_.size())
            fail(Errc::csv_format, "csv: unterminated quote starting in row " + std::to_string(row + 1));
          if (in_[pos_] == kQuote) {
            if (pos_ + 1 < in_.size() && in_[pos_ + 1] == kQuote) {
              pos_ += 2;
              continue;
            }
            break;
          }
          ++pos_;
        }
        c.end = pos_++;
      } else {
        c.begin = pos_;
        while (pos_ < in_.size() && in_[pos_] != d_.delimiter && in_[pos_] != '\n' &&
               !(in_[pos_] == '\r' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '\n'))
          ++pos_;
        c.end = pos_;
      }
      std::uint8_t term = kNone;
      bool last = true;
      if (pos_ >= in_.size()) {
        c.sep = 0;
      } else if (in_[pos_] == d_.delimiter) {
        c.sep = 1;
        last = false;
      } else if (in_[pos_] == '\n') {
        c.sep = 1;
        term = kLF;
      } else if (in_[pos_] == '\r' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '\n') {
        c.sep = 2;
        term = kCRLF;
      } else {
        fail(Errc::csv_format, "csv: unexpected byte after closing quote in row " + std::to_string(row + 1));
      }
      pos_ += c.sep;
      c.end_all = pos_;
      cells_.push_back(c);
      // A delimiter right before the end of input still opens one more (empty) cell.
      if (last) return term;
    }
  }

  std::vector<std::string> header_tags() const {
    std::vector<std::string> tags;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      std::string name(in_.begin() + static_cast<std::ptrdiff_t>(cells_[i].begin),
                       in_.begin() + static_cast<std::ptrdiff_t>(cells_[i].end));
      if (name.empty() || seen.count(name)) name = "col" + std::to_string(i);
      while (seen.count(name)) name += "_";
      seen.insert(name);
      tags.push_back(std::move(name));
    }
    return tags;
  }

  // Each cell is one run even when empty; framing runs merge.
  void run_to(CsvTable& t, std::uint8_t target, std::size_t len) {
    t.plan.targets.push_back(target);
    t.plan.lengths.push_back(static_cast<std::uint32_t>(len));
  }

  void frame(CsvTable& t, std::size_t len) {
    if (len == 0) return;
    auto f = static_cast<std::uint8_t>(ncols_);
    if (!t.plan.targets.empty() && t.plan.targets.back() == f &&
        t.plan.lengths.back() + len <= 0xFFFFFFFFu) {
      t.plan.lengths.back() += static_cast<std::uint32_t>(len);
      return;
    }
    run_to(t, f, len);
  }

  ByteView in_;
  CsvDialect d_;
  std::size_t pos_ = 0;
  std::size_t ncols_ = 0;
  std::vector<Cell> cells_;
};

}  // namespace detail

/// Splits `input` into columns and framing. Throws Errc::csv_format on ragged
/// rows, unterminated quotes or stray bytes after a closing quote.
inline CsvTable parse(ByteView input, CsvDialect d = {}) {
  if (input.size() > 0xFFFFFFFFull) fail(Errc::csv_format, "csv: input larger than 4 GiB");
  return detail::Splitter(input, d).run();
}

/// Graph for CSV text. Parameters: "delimiter" (byte value, default ','),
/// "header" (0 or 1, default 1), "slot" (cluster slot, default "csv").
/// Columns go to the clustering graph with the column tags; framing and
/// routing go to `auto`. Input that does not parse falls back to `compress`.
inline CompressorGraph csv_graph(Context& ctx, const Params& p, std::span<const GraphRef>) {
  auto types = ctx.input_types();
  if (types.size() != 1 || !(types[0] == StreamType::serial()))
    fail(Errc::codec_precondition, "csv graph takes one serial input");
  CsvDialect d;
  d.delimiter = static_cast<std::uint8_t>(p.get_int("delimiter", ','));
  d.has_header = p.get_int("header", 1) != 0;
  CsvTable t;
  try {
    t = parse(ctx.inputs()[0].content, d);
  } catch (const Error& e) {
    if (e.code() != Errc::csv_format) throw;
    return ref_graph(types, graphs::ref("compress"));
  }
  if (t.columns.empty()) return ref_graph(types, graphs::ref("compress"));
  auto c = static_cast<std::uint32_t>(t.columns.size());
  Params dp;
  dp.set("n", static_cast<std::int64_t>(c + 1));
  dp.set("mode", std::int64_t{codecs::restructure::kDispatchStrings});
  dp.set("targets", Params::IntList(t.plan.targets.begin(), t.plan.targets.end()));
  dp.set("lengths", Params::IntList(t.plan.lengths.begin(), t.plan.lengths.end()));
  auto g = graphs::store_graph(types);
  int disp = g.add_codec(codecs::kDispatch, std::move(dp));
  g.feed_roots(disp);
  Params cp;
  cp.set("slot", p.get_string("slot", "csv")).set("default", "probe").set("tags", Params::StringList(t.tags));
  int cl = g.add_graph("clustering", std::move(cp));
  for (std::uint32_t i = 0; i < c; ++i) g.connect({disp, i}, cl, i);
  g.connect({disp, c}, g.add_graph("auto"));
  g.connect({disp, c + 1}, g.add_graph("auto"));
  return g;
}

}  // namespace graphzip::csv
