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

#include <cstdlib>
#include <map>

#include "cli.hpp"
#include "test_util.hpp"

namespace {

using namespace graphzip;
namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
};

Run gz(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> keys(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("graphzip_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("GRAPHZIP_MAX_OUTPUT");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("GRAPHZIP_MAX_OUTPUT");
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string put(const std::string& name, const Bytes& data) const {
    cli::write_file_atomic(path(name), data);
    return path(name);
  }

  // Only the files the test created itself, no temporaries left over.
  std::set<std::string> listing() const {
    std::set<std::string> s;
    for (const auto& e : fs::directory_iterator(dir_)) s.insert(e.path().filename().string());
    return s;
  }

  Bytes round_trip(const std::vector<std::string>& how, const std::string& in) {
    auto gmz = in + ".gmz";
    std::vector<std::string> args{"compress"};
    args.insert(args.end(), how.begin(), how.end());
    args.insert(args.end(), {"-o", gmz, in});
    auto c = gz(args);
    EXPECT_EQ(c.code, 0) << c.err;
    auto d = gz({"decompress", "-o", in + ".back", gmz});
    EXPECT_EQ(d.code, 0) << d.err;
    return cli::read_file(in + ".back");
  }

  fs::path dir_;
};

std::string csv_text(gz_test::Rng& rng, int rows) {
  static const char* kStates[] = {"new", "open", "closed"};
  std::string t = "ts,state,id\n";
  std::uint64_t ts = 1690000000;
  for (int r = 0; r < rows; ++r) {
    ts += rng() % 5;
    t += std::to_string(ts) + "," + kStates[rng() % 3] + "," + std::to_string(rng() % 1000000007) + "\n";
  }
  return t;
}

TEST_F(Cli, EveryProfileRoundTrips) {
  gz_test::Rng rng(1);
  auto csv = put("t.csv", to_bytes(csv_text(rng, 400)));
  Bytes nums;
  for (int i = 0; i < 4000; ++i) nums.push_back(static_cast<std::uint8_t>(i * 7 + (rng() & 3)));
  auto bin = put("n.bin", nums);
  auto sddl_file = put("rec.sddl", to_bytes("record R { a: u32le -> as; b: u16be -> bs; }\nmain: R[];\n"));
  Bytes recs;
  for (int i = 0; i < 300; ++i)
    for (int k = 0; k < 6; ++k) recs.push_back(static_cast<std::uint8_t>(k < 4 ? i >> (8 * k) : 9));
  auto rec = put("r.bin", recs);

  EXPECT_EQ(round_trip({"--profile", "raw"}, bin), nums);
  EXPECT_EQ(round_trip({"--profile", "raw", "--checksum"}, csv), cli::read_file(csv));
  EXPECT_EQ(round_trip({"--profile", "csv"}, csv), cli::read_file(csv));
  EXPECT_EQ(round_trip({"--profile", "numeric-le:4"}, bin), nums);
  EXPECT_EQ(round_trip({"--profile", "numeric-be:2"}, bin), nums);
  EXPECT_EQ(round_trip({"--profile", "f32"}, bin), nums);
  EXPECT_EQ(round_trip({"--profile", "sddl:" + sddl_file}, rec), recs);
  auto empty = put("empty", {});
  EXPECT_EQ(round_trip({"--profile", "csv"}, empty), Bytes{});
}

TEST_F(Cli, CompressReportsKeyValues) {
  auto in = put("z", Bytes(1024, 0));
  auto r = gz({"compress", "--profile", "raw", "-o", path("z.gmz"), in});
  ASSERT_EQ(r.code, 0) << r.err;
  auto k = keys(r.out);
  EXPECT_EQ(k.at("original_size"), "1024");
  // Zeros take the constant path: one constant node and an empty leaf, so the
  // frame is fixed overhead only.
  auto frame = cli::read_file(path("z.gmz"));
  auto rep = inspect_frame(frame);
  ASSERT_EQ(rep.chunks[0].nodes.size(), 1u);
  EXPECT_EQ(rep.chunks[0].nodes[0].codec, "constant");
  EXPECT_EQ(rep.chunks[0].leaves[0].bytes, 0u);
  EXPECT_EQ(k.at("compressed_size"), std::to_string(frame.size()));
  EXPECT_EQ(frame.size(), 19u);
  EXPECT_EQ(k.at("ratio"), "53.895");
  auto pretty = gz({"compress", "--pretty", "--profile", "raw", "-o", path("z2.gmz"), in});
  EXPECT_NE(pretty.out.find("compressed size"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  auto in = put("x", to_bytes("abc"));
  auto both = gz({"compress", "--profile", "raw", "--compressor", path("c.gmc.json"), in});
  EXPECT_EQ(both.code, 1);
  EXPECT_NE(both.err.find("exactly one"), std::string::npos);
  EXPECT_EQ(gz({"compress", in}).code, 1);
  EXPECT_EQ(gz({}).code, 1);
  EXPECT_EQ(gz({"explode"}).code, 1);
  EXPECT_EQ(gz({"compress", "--profile", "numeric-le:3", in}).code, 1);
  EXPECT_EQ(gz({"--help"}).code, 0);
  EXPECT_EQ(listing(), (std::set<std::string>{"x"}));
}

TEST_F(Cli, RaggedCsvFailsWithoutOutput) {
  auto in = put("bad.csv", to_bytes("a,b\n1,2\n3\n"));
  auto r = gz({"compress", "--profile", "csv", "-o", path("bad.gmz"), in});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ragged row"), std::string::npos) << r.err;
  EXPECT_EQ(listing(), (std::set<std::string>{"bad.csv"}));
}

TEST_F(Cli, IoErrors) {
  EXPECT_EQ(gz({"compress", "--profile", "raw", path("missing")}).code, 2);
  EXPECT_EQ(gz({"decompress", path("missing.gmz")}).code, 2);
  auto in = put("x", to_bytes("abc"));
  auto r = gz({"compress", "--profile", "raw", "-o", path("no/such/dir/x.gmz"), in});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(gz({"compress", "--compressor", path("missing.gmc.json"), in}).code, 2);
}

TEST_F(Cli, DecompressErrors) {
  auto in = put("x", to_bytes("hello hello hello hello"));
  ASSERT_EQ(gz({"compress", "--profile", "raw", "--checksum", "-o", path("x.gmz"), in}).code, 0);
  auto frame = cli::read_file(path("x.gmz"));

  auto truncated = put("trunc.gmz", Bytes(frame.begin(), frame.end() - 3));
  auto r = gz({"decompress", "-o", path("out"), truncated});
  EXPECT_EQ(r.code, 3) << r.err;

  auto v99 = frame;
  v99[4] = 99;
  r = gz({"decompress", "-o", path("out"), put("v99.gmz", v99)});
  EXPECT_EQ(r.code, 4) << r.err;
  EXPECT_NE(r.err.find("version"), std::string::npos);

  auto garbage = put("garbage.gmz", to_bytes("definitely not a frame"));
  EXPECT_EQ(gz({"decompress", "-o", path("out"), garbage}).code, 3);

  auto flipped = frame;
  flipped.back() ^= 0x10;  // inside the stored checksum
  EXPECT_EQ(gz({"decompress", "-o", path("out"), put("flip.gmz", flipped)}).code, 3);
  EXPECT_FALSE(fs::exists(path("out")));
}

TEST_F(Cli, OutputCapFromEnvironment) {
  auto in = put("z", Bytes(100000, 7));
  ASSERT_EQ(gz({"compress", "--profile", "raw", "-o", path("z.gmz"), in}).code, 0);
  setenv("GRAPHZIP_MAX_OUTPUT", "1000", 1);
  auto r = gz({"decompress", "-o", path("z.out"), path("z.gmz")});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("limit_exceeded"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("z.out")));
  setenv("GRAPHZIP_MAX_OUTPUT", "100000", 1);
  EXPECT_EQ(gz({"decompress", "-o", path("z.out"), path("z.gmz")}).code, 0);
  EXPECT_EQ(cli::read_file(path("z.out")), cli::read_file(in));
  setenv("GRAPHZIP_MAX_OUTPUT", "lots", 1);
  EXPECT_EQ(gz({"decompress", "-o", path("z.out2"), path("z.gmz")}).code, 1);
}

TEST_F(Cli, ExistingOutputSurvivesFailure) {
  auto keep = put("keep.gmz", to_bytes("previous contents"));
  auto bad = put("bad.csv", to_bytes("a,b\n1\n"));
  EXPECT_EQ(gz({"compress", "--profile", "csv", "-o", keep, bad}).code, 1);
  EXPECT_EQ(cli::read_file(keep), to_bytes("previous contents"));
}

TEST_F(Cli, TrainThenCompressWithConfig) {
  gz_test::Rng rng(2);
  fs::create_directories(path("samples"));
  for (int i = 0; i < 3; ++i) put("samples/s" + std::to_string(i) + ".csv", to_bytes(csv_text(rng, 150)));
  auto r = gz({"train", "--profile", "csv", "--samples", path("samples"), "-o", path("c.gmc.json"), "--depth", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto k = keys(r.out);
  EXPECT_LE(std::stoull(k.at("trained_total")), std::stoull(k.at("seed_total")));
  std::uint64_t seed_sum = 0, trained_sum = 0;
  for (int i = 0; i < 3; ++i) {
    auto v = k.at("sample.s" + std::to_string(i) + ".csv");
    auto seed_at = v.find("seed:"), trained_at = v.find("trained:");
    seed_sum += std::stoull(v.substr(seed_at + 5));
    trained_sum += std::stoull(v.substr(trained_at + 8));
  }
  EXPECT_EQ(seed_sum, std::stoull(k.at("seed_total")));
  EXPECT_EQ(trained_sum, std::stoull(k.at("trained_total")));

  auto fresh = put("fresh.csv", to_bytes(csv_text(rng, 200)));
  EXPECT_EQ(round_trip({"--compressor", path("c.gmc.json")}, fresh), cli::read_file(fresh));
  auto pretty = gz({"train", "--pretty", "--profile", "csv", "--samples", path("samples"), "-o", path("d.gmc.json"),
                    "--depth", "1"});
  EXPECT_EQ(pretty.code, 0);
  EXPECT_NE(pretty.out.find("total"), std::string::npos);
}

TEST_F(Cli, TrainErrors) {
  fs::create_directories(path("empty"));
  auto r = gz({"train", "--profile", "raw", "--samples", path("empty"), "-o", path("c.gmc.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no files"), std::string::npos);
  EXPECT_EQ(gz({"train", "--profile", "raw", "--samples", path("nowhere"), "-o", path("c.gmc.json")}).code, 2);
  fs::create_directories(path("bad"));
  put("bad/good.csv", to_bytes("a\n1\n"));
  put("bad/broken.csv", to_bytes("a,b\n1\n"));
  r = gz({"train", "--profile", "csv", "--samples", path("bad"), "-o", path("c.gmc.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("broken.csv"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("c.gmc.json")));
}

TEST_F(Cli, InspectAndListCodecs) {
  auto store = gz({"inspect", std::string(GRAPHZIP_GOLDEN_DIR) + "/store_abc.gmz"});
  ASSERT_EQ(store.code, 0) << store.err;
  EXPECT_NE(store.out.find("0 nodes"), std::string::npos) << store.out;
  EXPECT_EQ(gz({"inspect", put("junk", to_bytes("junk junk"))}).code, 3);

  auto list = gz({"list-codecs"});
  ASSERT_EQ(list.code, 0);
  std::istringstream in(list.out);
  std::string line;
  std::vector<std::uint32_t> ids;
  while (std::getline(in, line)) ids.push_back(static_cast<std::uint32_t>(std::stoul(line)));
  ASSERT_EQ(ids.size(), 21u);
  for (std::uint32_t i = 0; i < 21; ++i) EXPECT_EQ(ids[i], i + 1);
  EXPECT_NE(list.out.find("7 dispatch "), std::string::npos);
}

}  // namespace
