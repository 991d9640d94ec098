// Copyright 2026 The irsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "irsest/csv.hpp"

namespace irsest {
namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded.
Run cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " IRSEST_CLI_PATH " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<CsvRow> rows(const Run& r) {
  std::istringstream in(r.out);
  return read_csv(in);
}

const std::string kConfigDir = IRSEST_SOURCE_DIR "/configs/";

TEST(CliSweep, ElementSweepIsDeterministic) {
  const std::string args =
      "sweep --axis m1 --values 1,2,4,8,16 --normalized --trials 10000 --seed 7";
  const auto a = cli(args);
  ASSERT_EQ(a.exit_code, 0);
  const auto parsed = rows(a);
  ASSERT_EQ(parsed.size(), 5u);
  EXPECT_EQ(parsed[3].axis_name, "irs_elements");
  EXPECT_EQ(parsed[3].axis_value, 8.0);
  EXPECT_EQ(parsed[3].seed, 7u);
  EXPECT_EQ(parsed[3].trials, 10000u);
  EXPECT_EQ(cli(args).out, a.out);
  EXPECT_EQ(cli(args + " --workers 4").out, a.out);
}

TEST(CliSweep, SnrRangeWithShippedConfig) {
  const auto r = cli("sweep --axis snr --values -10:20:5 --trials 500 --config " +
                     kConfigDir + "default_geometry.json");
  ASSERT_EQ(r.exit_code, 0);
  const auto parsed = rows(r);
  ASSERT_EQ(parsed.size(), 7u);
  EXPECT_EQ(parsed.front().axis_value, -10.0);
  EXPECT_EQ(parsed.back().axis_value, 20.0);
}

// With the cascaded path loss of the default geometry the channel power is
// near 1e-16, so the error only falls once sigma^2 reaches that scale.
TEST(CliSweep, PhysicalUnitsErrorFallsWithSnr) {
  const auto r = cli("sweep --axis snr --values 150:190:10 --trials 2000 --config " +
                     kConfigDir + "default_geometry.json");
  ASSERT_EQ(r.exit_code, 0);
  const auto p = rows(r);
  ASSERT_EQ(p.size(), 5u);
  for (std::size_t k = 1; k < p.size(); ++k)
    EXPECT_LT(p[k].mse_empirical + 3 * p[k].mse_stderr,
              p[k - 1].mse_empirical - 3 * p[k - 1].mse_stderr);
}

TEST(CliSweep, OutputFileMatchesStdout) {
  const std::string path = ::testing::TempDir() + "irsest_cli_out.csv";
  const std::string args = "sweep --axis v --values 0.2,0.6 --normalized --trials 50";
  ASSERT_EQ(cli(args + " --out " + path).exit_code, 0);
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  EXPECT_EQ(file.str(), cli(args).out);
}

TEST(CliSweep, UsageErrors) {
  EXPECT_EQ(cli("sweep --axis m1 --normalized").exit_code, 2);
  EXPECT_EQ(cli("sweep --values 1,2 --normalized").exit_code, 2);
  EXPECT_EQ(cli("sweep --axis q --values 1,2").exit_code, 2);
  EXPECT_EQ(cli("sweep --axis m1 --values 1,x").exit_code, 2);
  EXPECT_EQ(cli("sweep --axis m1 --values 2,1,3").exit_code, 2);
  EXPECT_EQ(cli("sweep --axis m1 --values 1,2 --estimator best").exit_code, 2);
  EXPECT_EQ(cli("sweep --axis m1 --values 1,2 --config /nonexistent.json").exit_code, 2);
  EXPECT_EQ(cli("frobnicate").exit_code, 2);
}

TEST(CliPoint, AsymptoticAtSixteenElements) {
  const auto r = cli(
      "point --normalized --m1 16 --snr 0 --v 1 --estimator asymptotic --trials 10000");
  ASSERT_EQ(r.exit_code, 0);
  const auto p = rows(r);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].axis_name, "point");
  EXPECT_NEAR(p[0].mse_empirical, 16.0 / 17.0, 3 * p[0].mse_stderr);
}

TEST(CliPoint, ZeroAmplitude) {
  const auto p = rows(cli("point --normalized --m1 4 --snr 0 --v 0 --trials 100"));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].mse_empirical, 0.0);
  EXPECT_EQ(p[0].lower_bound, 0.0);
  EXPECT_EQ(p[0].upper_bound, 0.0);
}

TEST(CliPoint, VanishingNoise) {
  const auto p = rows(cli("point --normalized --m1 4 --snr 300 --v 1 --trials 100"));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_LT(p[0].mse_empirical, 1e-25);
}

TEST(CliPoint, SeedPrecedence) {
  const std::string args = "point --normalized --trials 20";
  const auto from_config = rows(cli(args));
  const auto from_env = rows(cli(args, "IRSEST_SEED=5"));
  const auto from_flag = rows(cli(args + " --seed 9", "IRSEST_SEED=5"));
  EXPECT_EQ(from_config[0].seed, 1u);
  EXPECT_EQ(from_env[0].seed, 5u);
  EXPECT_EQ(from_flag[0].seed, 9u);
  EXPECT_NE(from_env[0].mse_empirical, from_config[0].mse_empirical);
  EXPECT_EQ(cli(args + " --seed 5").out, cli(args, "IRSEST_SEED=5").out);
}

TEST(CliValidate, FastSuitePasses) {
  const auto r = cli("validate --fast");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliValidate, BadConfigPath) {
  EXPECT_EQ(cli("validate --config /nonexistent/x.json").exit_code, 2);
}

}  // namespace
}  // namespace irsest
