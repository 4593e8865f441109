// Copyright 2026 The Boundary Walk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "commands.hpp"
#include "config.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"
#include "tables.hpp"

namespace boundary_walk::cli {
namespace {

namespace fs = std::filesystem;
using testing::Q;
using testing::Z;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("bw_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string WriteConfig(const std::string& name, const std::string& text) {
    write_file(Path(name), text);
    return Path(name);
  }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    std::vector<const char*> argv = {"boundary-walk"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

constexpr const char* kGeometric = R"({
  "group": {"kind": "Z", "rank": 1},
  "measure": {"1": "1/2", "-1": "1/2"},
  "rule": {"type": "first_increment", "set": ["-1"]}
})";

TEST_F(CliTest, TransformWritesTableAndSidecar) {
  const auto cfg = WriteConfig("geo.json", kGeometric);
  ASSERT_EQ(Run({"transform", "--config", cfg, "--out", Path("a")}), kExitOk)
      << err_.str();
  const auto file = read_measure_file(Path("a/mu_T.csv"));
  EXPECT_EQ(file.measure.weight(Z(-1)), Q(1, 2));
  EXPECT_EQ(file.measure.weight(Z(3)), Q(1, 32));
  EXPECT_EQ(file.metadata.at("truncated"), false);
  EXPECT_EQ(file.metadata.at("engine"), "exact");
}

TEST_F(CliTest, CompareRoundTripIsZero) {
  const auto cfg = WriteConfig("geo.json", kGeometric);
  ASSERT_EQ(Run({"transform", "--config", cfg, "--out", Path("a")}), kExitOk);
  ASSERT_EQ(Run({"transform", "--config", cfg, "--out", Path("b")}), kExitOk);
  EXPECT_EQ(Run({"compare", Path("a/mu_T.csv"), Path("b/mu_T.csv")}), kExitOk);
  EXPECT_EQ(out_.str(), "tv 0 (0)\n");
}

TEST_F(CliTest, CompareExitCodes) {
  const auto geo = WriteConfig("geo.json", kGeometric);
  const auto two = WriteConfig("two.json", R"({
    "measure": {"1": "1/2", "-1": "1/2"},
    "rule": {"type": "constant", "n": 2}
  })");
  const auto f2 = WriteConfig("f2.json", R"({
    "group": {"kind": "free", "rank": 2},
    "measure": {"a": "1/4", "A": "1/4", "b": "1/4", "B": "1/4"},
    "rule": {"type": "constant", "n": 1}
  })");
  ASSERT_EQ(Run({"transform", "--config", geo, "--out", Path("g")}), kExitOk);
  ASSERT_EQ(Run({"transform", "--config", two, "--out", Path("t")}), kExitOk);
  ASSERT_EQ(Run({"transform", "--config", f2, "--out", Path("f")}), kExitOk);
  EXPECT_EQ(Run({"compare", Path("g/mu_T.csv"), Path("t/mu_T.csv")}), kExitExceeds);
  EXPECT_EQ(Run({"compare", Path("g/mu_T.csv"), Path("t/mu_T.csv"),
                 "--tolerance", "1"}),
            kExitOk);
  EXPECT_EQ(Run({"compare", Path("g/mu_T.csv"), Path("f/mu_T.csv")}), kExitBadInput);
  EXPECT_EQ(Run({"compare", Path("g/mu_T.csv"), Path("missing.csv")}), kExitBadInput);
}

TEST_F(CliTest, BadLiteralReportsLocation) {
  const auto cfg = WriteConfig("bad.json", R"({
  "group": {"kind": "free", "rank": 2},
  "measure": {"a": "1/2", "bx": "1/2"},
  "rule": {"type": "constant", "n": 1}
})");
  EXPECT_EQ(Run({"transform", "--config", cfg, "--out", Path("o")}), kExitBadInput);
  EXPECT_NE(err_.str().find("bad.json:3:"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(Path("o/mu_T.csv")));
}

TEST_F(CliTest, InputErrors) {
  const auto unknown = WriteConfig("u.json", R"({"measure": {"1": 1}, "rule": {"type": "constant", "n": 1}, "colour": 3})");
  EXPECT_EQ(Run({"transform", "--config", unknown}), kExitBadInput);
  EXPECT_NE(err_.str().find("colour"), std::string::npos);
  const auto mass = WriteConfig("m.json", R"({"measure": {"1": "1/3"}, "rule": {"type": "constant", "n": 1}})");
  EXPECT_EQ(Run({"transform", "--config", mass}), kExitBadInput);
  const auto broken = WriteConfig("b.json", "{\"measure\": ");
  EXPECT_EQ(Run({"transform", "--config", broken}), kExitBadInput);
  EXPECT_EQ(Run({"transform", "--config", Path("absent.json")}), kExitBadInput);
  EXPECT_EQ(Run({"frobnicate"}), kExitBadInput);
}

TEST_F(CliTest, TruncationExitCode) {
  const auto cfg = WriteConfig("far.json", R"({
    "measure": {"1": "1/2", "-1": "1/2"},
    "rule": {"type": "first_visit", "set": ["5"]},
    "epsilon": "1/1000",
    "max_horizon": 20
  })");
  EXPECT_EQ(Run({"transform", "--config", cfg, "--out", Path("o")}), kExitTruncated);
  const auto file = read_measure_file(Path("o/mu_T.csv"));
  EXPECT_EQ(file.metadata.at("truncated"), true);
}

TEST_F(CliTest, EnvironmentSetsOutputDirectory) {
  const auto cfg = WriteConfig("geo.json", kGeometric);
  ::setenv("BOUNDARY_WALK_OUT", Path("env").c_str(), 1);
  const int rc = Run({"transform", "--config", cfg});
  ::unsetenv("BOUNDARY_WALK_OUT");
  EXPECT_EQ(rc, kExitOk);
  EXPECT_TRUE(fs::exists(Path("env/mu_T.csv")));
}

TEST_F(CliTest, MonteCarloIsReproducible) {
  const auto cfg = WriteConfig("mc.json", R"({
    "group": {"kind": "free", "rank": 2},
    "measure": {"a": "1/4", "A": "1/4", "b": "1/4", "B": "1/4"},
    "rule": {"type": "first_increment", "set": ["b", "B"]},
    "engine": "montecarlo",
    "samples": 5000,
    "seed": 17
  })");
  ASSERT_EQ(Run({"transform", "--config", cfg, "--out", Path("one")}), kExitOk);
  ASSERT_EQ(Run({"transform", "--config", cfg, "--out", Path("four"),
                 "--workers", "4"}),
            kExitOk);
  EXPECT_EQ(read_file(Path("one/mu_T.csv")), read_file(Path("four/mu_T.csv")));
  ASSERT_EQ(Run({"transform", "--config", cfg, "--out", Path("other"),
                 "--seed", "18"}),
            kExitOk);
  EXPECT_NE(read_file(Path("one/mu_T.csv")), read_file(Path("other/mu_T.csv")));
}

TEST_F(CliTest, AuxRules) {
  const auto convex = WriteConfig("c.json", R"({
    "group": {"kind": "Zm", "modulus": 2},
    "measure": {"1": 1},
    "rule": {"type": "aux_convex", "points": {"1": "1/2", "2": "1/2"}}
  })");
  ASSERT_EQ(Run({"transform", "--config", convex, "--out", Path("c")}), kExitOk)
      << err_.str();
  const auto c = read_measure_file(Path("c/mu_T.csv"));
  EXPECT_EQ(c.measure.weight(cyclic_element(2, 0)), Q(1, 2));

  const auto flag = WriteConfig("f.json", R"({
    "measure": {"1": "1/2", "-1": "1/2"},
    "rule": {"type": "beta_flag", "fraction": {"-1": 1}}
  })");
  ASSERT_EQ(Run({"transform", "--config", flag, "--out", Path("f")}), kExitOk)
      << err_.str();
  const auto geo = WriteConfig("geo.json", kGeometric);
  ASSERT_EQ(Run({"transform", "--config", geo, "--out", Path("g")}), kExitOk);
  EXPECT_EQ(Run({"compare", Path("f/mu_T.csv"), Path("g/mu_T.csv")}), kExitOk)
      << out_.str();
}

TEST_F(CliTest, VerifyIdentities) {
  EXPECT_EQ(Run({"verify", "--bundle", "identities", "--out", Path("v")}), kExitOk)
      << out_.str() << err_.str();
  EXPECT_TRUE(fs::exists(Path("v/report.json")));
  EXPECT_NE(out_.str().find("[pass] geometric-series/Z"), std::string::npos)
      << out_.str();
  EXPECT_EQ(Run({"verify", "--bundle", "nope", "--out", Path("v")}), kExitBadInput);
}

TEST_F(CliTest, EntropyTable) {
  const auto cfg = WriteConfig("e.json", R"({
    "measure": {"0": "1/2", "1": "1/2"},
    "max_n": 3
  })");
  ASSERT_EQ(Run({"entropy", "--config", cfg, "--out", Path("e")}), kExitOk)
      << err_.str();
  EXPECT_EQ(out_.str().substr(0, 10), "n,entropy\n");
  EXPECT_TRUE(fs::exists(Path("e/entropy.csv")));
}

}  // namespace
}  // namespace boundary_walk::cli
