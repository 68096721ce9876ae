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

#include "graphzip/sddl.hpp"
#include "sddl_gen.hpp"
#include "test_util.hpp"

namespace {

using namespace graphzip;
using sddl::compile;
using sddl::execute;

std::string syntax_error(std::string_view desc) {
  try {
    compile(desc);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::sddl_syntax) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "compiled: " << desc;
  return {};
}

Errc run_error(std::string_view desc, const Bytes& in) {
  auto p = compile(desc);
  try {
    execute(p, in);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::io;  // sentinel: no error
}

std::vector<std::pair<std::string, std::uint32_t>> named(const sddl::Program& p, const sddl::DispatchPlan& plan) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  for (std::size_t i = 0; i < plan.targets.size(); ++i) out.emplace_back(p.dests[plan.targets[i]].name, plan.lengths[i]);
  return out;
}

using Runs = std::vector<std::pair<std::string, std::uint32_t>>;

TEST(SddlCompile, TwoDestinationsPlusRest) {
  auto p = compile("record P { id: u32le -> ids; v: f32le -> vals; } main: P[];");
  ASSERT_EQ(p.dests.size(), 3u);
  EXPECT_EQ(p.dests[0].name, "ids");
  EXPECT_EQ(p.dests[1].name, "vals");
  EXPECT_EQ(p.dests[2].name, "rest");
  EXPECT_EQ(p.dests[0].type, StreamType::numeric(4));
  EXPECT_EQ(p.dests[1].type, StreamType::numeric(4));
  EXPECT_EQ(p.dests[2].type, StreamType::serial());
}

TEST(SddlCompile, ArrayOfArrayWithTail) { EXPECT_NO_THROW(compile("main: u8[3][];")); }

TEST(SddlCompile, Rejections) {
  EXPECT_NE(syntax_error("record A { x: B; } record B { y: A; } main: A;").find("recursive record"), std::string::npos);
  EXPECT_NE(syntax_error("record A { x: A; } main: u8;").find("recursive"), std::string::npos);
  EXPECT_NE(syntax_error("main: Nope;").find("unknown type 'Nope'"), std::string::npos);
  EXPECT_NE(syntax_error("record R { a: u8[n]; n: u8; } main: R;").find("earlier field"), std::string::npos);
  EXPECT_NE(syntax_error("record R { a: f32le; b: u8[a]; } main: R;").find("not an integer"), std::string::npos);
  EXPECT_NE(syntax_error("record R { a: u8[]; } main: R;").find("'[]'"), std::string::npos);
  EXPECT_NE(syntax_error("main: u8[][2];").find("outermost"), std::string::npos);
  EXPECT_NE(syntax_error("main: u8").find("expected ';'"), std::string::npos);
  EXPECT_NE(syntax_error("main: u8; extra").find("after main"), std::string::npos);
  EXPECT_NE(syntax_error("record R { a: u8; a: u8; } main: R;").find("twice"), std::string::npos);
  EXPECT_NE(syntax_error("main: u8 $").find("unexpected character"), std::string::npos);
  EXPECT_NE(syntax_error("main: bytes(99999999999999999999999);").find("out of range"), std::string::npos);
}

TEST(SddlCompile, DiagnosticsCarryLineAndColumn) {
  EXPECT_NE(syntax_error("record R {\n  a: u8;\n  b: Q;\n}\nmain: R;").find("line 3, column 6"), std::string::npos);
  // Identical input, identical message.
  EXPECT_EQ(syntax_error("main: ;"), syntax_error("main: ;"));
  EXPECT_NE(syntax_error("main: ;").find("line 1, column 7: expected a type, found ';'"), std::string::npos);
}

TEST(SddlCompile, NestingDepthIsBounded) {
  std::string d;
  for (int i = 0; i < 80; ++i) d += "record R" + std::to_string(i) + " { x: R" + std::to_string(i + 1) + "; }\n";
  d += "record R80 { x: u8; }\nmain: R0;";
  EXPECT_NE(syntax_error(d).find("nest too deeply"), std::string::npos);
}

TEST(SddlCompile, DestinationTypes) {
  auto p = compile(
      "record H { a: u16be -> be; b: bytes(6) -> mac; c: u8 -> small; d: u32le -> mixed; e: u16le -> mixed; }"
      "main: H[];");
  ASSERT_EQ(p.dests.size(), 5u);
  EXPECT_EQ(p.dests[0].type, StreamType::numeric(2));
  EXPECT_TRUE(p.dests[0].big_endian);
  EXPECT_EQ(p.dests[1].type, StreamType::record(6));
  EXPECT_EQ(p.dests[2].type, StreamType::serial());
  EXPECT_EQ(p.dests[3].type, StreamType::serial());
  EXPECT_EQ(p.dests[4].name, "rest");
  // A field without a route inherits the route of the field that contains it.
  auto q = compile("record In { x: u32le; y: u8 -> tag; } record Out { i: In -> nums; } main: Out[];");
  ASSERT_EQ(q.dests.size(), 3u);
  // Destinations are numbered in order of first appearance in the text.
  EXPECT_EQ(q.dests[0].name, "tag");
  EXPECT_EQ(q.dests[0].type, StreamType::serial());
  EXPECT_EQ(q.dests[1].name, "nums");
  EXPECT_EQ(q.dests[1].type, StreamType::numeric(4));
}

TEST(SddlExecute, TwoRecordTrace) {
  auto p = compile("record P { id: u32le -> ids; v: f32le -> vals; } main: P[];");
  auto plan = execute(p, Bytes(16, 1));
  EXPECT_EQ(named(p, plan), (Runs{{"ids", 4}, {"vals", 4}, {"ids", 4}, {"vals", 4}}));
}

TEST(SddlExecute, LengthPrefixed) {
  auto p = compile("record R { n: u16le; body: u8[n] -> payload; } main: R[];");
  auto plan = execute(p, Bytes{0x02, 0x00, 'h', 'i'});
  EXPECT_EQ(named(p, plan), (Runs{{"rest", 2}, {"payload", 2}}));
  EXPECT_EQ(run_error("record R { n: u16le; body: u8[n] -> payload; } main: R[];", Bytes{0xFF, 0xFF, 'h', 'i'}),
            Errc::sddl_underrun);
  // Big-endian counts read the other way around.
  auto be = compile("record R { n: u16be; body: u8[n] -> payload; } main: R[];");
  EXPECT_EQ(named(be, execute(be, Bytes{0x00, 0x01, 'x', 0x00, 0x00})), (Runs{{"rest", 2}, {"payload", 1}, {"rest", 2}}));
}

TEST(SddlExecute, AdjacentRunsMerge) {
  auto p = compile("main: u32le[];");
  auto plan = execute(p, Bytes(4000, 0));
  EXPECT_EQ(named(p, plan), (Runs{{"rest", 4000}}));
  EXPECT_TRUE(execute(p, Bytes{}).targets.empty());
}

TEST(SddlExecute, NonConformingInputs) {
  EXPECT_EQ(run_error("main: u32le[];", Bytes(5, 0)), Errc::sddl_underrun);
  EXPECT_EQ(run_error("main: u8[3];", Bytes(4, 0)), Errc::sddl_underrun);
  EXPECT_EQ(run_error("main: u64le;", Bytes(3, 0)), Errc::sddl_underrun);
  // An empty record repeated forever makes no progress: fuel runs out.
  EXPECT_EQ(run_error("record E { } main: E[];", Bytes(3, 0)), Errc::fuel_exhausted);
  EXPECT_EQ(run_error("main: bytes(0)[];", Bytes(3, 0)), Errc::fuel_exhausted);
  // A huge literal count of zero-width items is charged up front.
  EXPECT_EQ(run_error("main: bytes(0)[18446744073709551615];", Bytes{}), Errc::fuel_exhausted);
  EXPECT_EQ(run_error("record E { } main: E[18446744073709551615];", Bytes{}), Errc::fuel_exhausted);
}

TEST(SddlExecute, FuelLimitIsExact) {
  auto p = compile("main: u8[10];");
  // One unit for the array node and ten for its elements.
  EXPECT_NO_THROW(execute(p, Bytes(10, 0), 11));
  try {
    execute(p, Bytes(10, 0), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::fuel_exhausted);
  }
  EXPECT_EQ(sddl::fuel_for(100), 4096u + 1600u);
}

TEST(SddlSandbox, RandomDescriptionsAndInputs) {
  gz_test::Rng rng(2024);
  gz_test::SandboxTally t;
  for (int i = 0; i < 50000; ++i) gz_test::sandbox_case(rng, t);
  EXPECT_EQ(t.violations, 0u);
  // The generator must exercise all outcomes.
  EXPECT_GT(t.compiled, t.runs / 4);
  EXPECT_GT(t.succeeded, t.compiled / 20);
  EXPECT_LT(t.succeeded, t.compiled);
}

TEST(SddlGraph, RoundTripsAndRoutesStreams) {
  auto lib = standard_library();
  lib.builtins["sddl"] = sddl::sddl_graph;
  const std::string desc = "record P { id: u32le -> ids; v: f32le -> vals; tag: u8; } main: P[];";
  Bytes in;
  gz_test::Rng rng(5);
  for (std::uint32_t i = 0; i < 2000; ++i) {
    auto id = 1000 + i;
    float v = static_cast<float>(i % 17) * 0.5f;
    std::uint32_t vb;
    std::memcpy(&vb, &v, 4);
    for (int k = 0; k < 4; ++k) in.push_back(static_cast<std::uint8_t>(id >> (8 * k)));
    for (int k = 0; k < 4; ++k) in.push_back(static_cast<std::uint8_t>(vb >> (8 * k)));
    in.push_back(static_cast<std::uint8_t>(rng() % 3));
  }
  CompressorGraph g;
  g.root_types = {TypePattern::of(Kind::serial)};
  g.feed_roots(g.add_graph("sddl", Params().set("description", desc)));
  auto c = compress(g, {Stream::serial(in)}, Budget::for_input(in.size()), lib);
  auto f = c.frame({true});
  EXPECT_EQ(read_frame(f)[0].content, in);
  EXPECT_LT(f.size(), in.size() / 3);
  ASSERT_FALSE(c.graph.nodes.empty());
  EXPECT_EQ(c.graph.nodes[0].wire_id, codecs::kDispatch);

  // Non-conforming input is a typed error, not a crash.
  try {
    compress(g, {Stream::serial(Bytes(7, 0))}, Budget{}, lib);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::sddl_underrun);
  }
}

}  // namespace
