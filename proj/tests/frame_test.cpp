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

#include <gtest/gtest.h>

#include "graphzip/graphs.hpp"
#include "test_util.hpp"

namespace {

using namespace graphzip;
using namespace graphzip::codecs;

Bytes store_frame(Bytes data, bool checksum) {
  CompressorGraph g;
  g.root_types = {TypePattern::any()};
  return compress(g, {Stream::serial(std::move(data))}).frame({checksum});
}

Compressed tokenized_names() {
  CompressorGraph g;
  g.root_types = {TypePattern::of(Kind::strings)};
  int tok = g.add_codec("tokenize");
  int huf = g.add_codec("huffman");
  int lz = g.add_codec("byte_lz");
  g.connect(CompressorGraph::input(0), tok);
  g.connect({tok, 1}, huf);
  g.connect({tok, 0}, lz);
  return compress(g, {Stream::strings({"alice", "bob", "bob", "eve", "alice", "bob", "alice"})});
}

Errc code_of(ByteView b) {
  try {
    read_frame(b);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io;  // sentinel: no error
}

TEST(Frame, StoreFrameOfAbcLayout) {
  auto f = store_frame(to_bytes("abc"), false);
  // magic, version 1, flags 0, 1 chunk | 1 root, serial | 0 nodes | leaf: serial, count 3, "abc"
  Bytes expect{'G', 'M', 'C', '1', 1, 0, 1, 1, 0, 0, 0, 3, 'a', 'b', 'c'};
  EXPECT_EQ(f, expect);
  EXPECT_EQ(f.size(), 15u);
}

TEST(Frame, ChecksumAppendsCrc32cOfContent) {
  auto f = store_frame(to_bytes("abc"), true);
  ASSERT_EQ(f.size(), 19u);
  EXPECT_EQ(f[5], kFlagChecksum);
  EXPECT_EQ(load_le(&f[15], 4), 0x364B3FB7u);
  EXPECT_EQ(read_frame(f)[0], Stream::serial(std::string_view("abc")));
}

TEST(Frame, EmptyInputStoreFrame) {
  auto f = store_frame({}, false);
  EXPECT_EQ(f.size(), 12u);
  EXPECT_EQ(f.back(), 0u);  // element count 0, no content
  EXPECT_EQ(read_frame(f)[0].count, 0u);
}

TEST(Frame, GoldenFiles) {
  EXPECT_EQ(store_frame(to_bytes("abc"), false), gz_test::read_file(gz_test::golden_path("store_abc.gmz")));
  auto golden = gz_test::read_file(gz_test::golden_path("tokenized_names.gmz"));
  EXPECT_EQ(tokenized_names().frame(), golden) << gz_test::hex(tokenized_names().frame());
  EXPECT_EQ(read_frame(golden)[0].string_items(),
            (std::vector<std::string>{"alice", "bob", "bob", "eve", "alice", "bob", "alice"}));
}

TEST(Frame, HeaderRejections) {
  auto f = store_frame(to_bytes("abc"), false);
  auto v99 = f;
  v99[4] = 99;
  EXPECT_EQ(code_of(v99), Errc::unsupported_version);
  auto magic = f;
  magic[0] = 'X';
  EXPECT_EQ(code_of(magic), Errc::bad_magic);
  auto flags = f;
  flags[5] = 0x02;
  EXPECT_EQ(code_of(flags), Errc::corrupt);
  auto trailing = f;
  trailing.push_back(0);
  EXPECT_EQ(code_of(trailing), Errc::corrupt);
  for (std::size_t n = 0; n < f.size(); ++n) {
    Bytes cut(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(n));
    auto c = code_of(cut);
    EXPECT_TRUE(c == Errc::truncated || c == Errc::bad_magic || c == Errc::corrupt) << n;
  }
}

TEST(Frame, UnknownCodecAndChecksumMismatch) {
  auto f = tokenized_names().frame();
  // First node record follows: header 7, roots 2, node count 1.
  EXPECT_EQ(f[10], kTokenize);
  auto bad = f;
  bad[10] = 120;
  EXPECT_EQ(code_of(bad), Errc::unknown_codec);
  auto c = store_frame(to_bytes("abc"), true);
  c[12] ^= 0x01;
  EXPECT_EQ(code_of(c), Errc::checksum_mismatch);
}

TEST(Frame, OutputLimitIsEnforced) {
  CompressorGraph g;
  g.root_types = {TypePattern::any()};
  g.connect(CompressorGraph::input(0), g.add_codec("constant"));
  auto f = compress(g, {Stream::serial(Bytes(100000, 7))}).frame();
  EXPECT_LT(f.size(), 30u);
  Budget small;
  small.max_total_stream_bytes = 1000;
  try {
    read_frame(f, small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::limit_exceeded);
  }
}

TEST(Frame, ParseThenWriteIsIdentity) {
  gz_test::Rng rng(8);
  CompressorGraph g;
  g.root_types = {TypePattern::any()};
  g.feed_roots(g.add_graph("compress"));
  for (int i = 0; i < 100; ++i) {
    auto s = i % 2 ? gz_test::random_strings(rng) : gz_test::random_numeric(rng, gz_test::random_width(rng));
    auto f = compress(g, {s}).frame({i % 3 == 0});
    EXPECT_EQ(write_parsed_frame(parse_frame(f)), f);
    EXPECT_EQ(read_frame(f)[0], s);
  }
}

TEST(Frame, MultipleChunksConcatenate) {
  auto a = store_frame(to_bytes("ab"), false);
  auto b = store_frame(to_bytes("cd"), false);
  Bytes two;
  write_frame_header(two, 2, false);
  two.insert(two.end(), a.begin() + 7, a.end());
  two.insert(two.end(), b.begin() + 7, b.end());
  auto out = read_frame(two);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1], Stream::serial(std::string_view("cd")));
}

TEST(Frame, StoreOverheadIsBounded) {
  for (std::size_t n : {0u, 1u, 127u, 128u, 20000u, 3000000u}) {
    auto f = store_frame(Bytes(n, 1), false);
    EXPECT_LE(f.size() - n, 26u);
  }
}

TEST(Frame, EverySingleBitFlipIsDetected) {
  gz_test::Rng rng(1);
  auto data = gz_test::random_serial(rng, 1).content;
  data.resize(1024);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  auto f = store_frame(data, true);
  std::size_t detected = 0;
  for (std::size_t bit = 0; bit < f.size() * 8; ++bit) {
    auto m = f;
    m[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      auto out = read_frame(m);
      ADD_FAILURE() << "undetected flip at bit " << bit;
    } catch (const Error&) {
      ++detected;
    }
  }
  EXPECT_EQ(detected, f.size() * 8);
}

TEST(Frame, FuzzedBuffersRaiseTypedErrorsOnly) {
  gz_test::Rng rng(77);
  std::vector<Bytes> seeds{store_frame(to_bytes("hello"), true), tokenized_names().frame({true})};
  CompressorGraph g;
  g.root_types = {TypePattern::any()};
  g.feed_roots(g.add_graph("compress"));
  seeds.push_back(compress(g, {gz_test::random_numeric(rng, 4)}).frame());
  Budget limits;
  limits.max_total_stream_bytes = 1 << 20;
  for (int i = 0; i < 20000; ++i) {
    auto m = seeds[i % seeds.size()];
    auto edits = gz_test::uniform(rng, 1, 4);
    for (std::uint64_t e = 0; e < edits; ++e) {
      auto pos = gz_test::uniform(rng, 0, m.size() - 1);
      switch (gz_test::uniform(rng, 0, 2)) {
        case 0: m[pos] = static_cast<std::uint8_t>(rng()); break;
        case 1: m.erase(m.begin() + static_cast<std::ptrdiff_t>(pos)); break;
        default: m.insert(m.begin() + static_cast<std::ptrdiff_t>(pos), static_cast<std::uint8_t>(rng())); break;
      }
      if (m.empty()) m.push_back(0);
    }
    try {
      read_frame(m, limits);
    } catch (const Error&) {
    }
  }
}

TEST(Inspect, Reports) {
  auto f = store_frame(to_bytes("abc"), false);
  EXPECT_EQ(inspect_frame(f).summary(), "0 nodes, 1 leaf (serial, 3 bytes)");
  auto rep = inspect_frame(tokenized_names().frame());
  ASSERT_EQ(rep.chunks.size(), 1u);
  std::vector<std::string> names;
  for (const auto& n : rep.chunks[0].nodes) names.push_back(n.codec);
  EXPECT_EQ(names, (std::vector<std::string>{"tokenize", "huffman", "byte_lz"}));
  EXPECT_THROW(inspect_frame(Bytes{'G', 'M'}), Error);
}

}  // namespace
