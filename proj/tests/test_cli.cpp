// Copyright 2026 The iext Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "iext/laws.hpp"
#include "iext/stats.hpp"

namespace {

namespace fs = std::filesystem;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    ADD_FAILURE() << "missing column " << name;
    return 0;
  }
  std::vector<double> numbers(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(std::stod(r[c]));
    return out;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  Table t;
  std::string line;
  if (std::getline(in, line)) t.header = split(line);
  while (std::getline(in, line)) t.rows.push_back(split(line));
  return t;
}

class Cli : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(testing::TempDir()) / ("iext_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& json, const std::string& name = "config.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << json;
    return p;
  }

  int run(const std::string& args, const std::string& out = "out") {
    const std::string cmd = std::string(IEXT_CLI_PATH) + " " + args + " --out " + (dir_ / out).string() + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string stderr_text() const { return slurp(dir_ / "stderr.txt"); }
  fs::path out(const std::string& file, const std::string& sub = "out") const { return dir_ / sub / file; }

  fs::path dir_;
};

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("bogus"), 1);
  EXPECT_EQ(run("--config " + (dir_ / "missing.json").string() + " sample"), 1);
  EXPECT_EQ(run("--jobs 0 sample"), 1);
  EXPECT_EQ(run("--config " + write_config(R"({"alpha": "x"})").string() + " sample"), 1);
  EXPECT_NE(stderr_text().find("/alpha"), std::string::npos) << stderr_text();
  EXPECT_EQ(run("--config " + write_config("{\n\"seed\": 1,\n}").string() + " sample"), 1);
  EXPECT_NE(stderr_text().find("line 3"), std::string::npos) << stderr_text();
  // A kernel whose norm cannot be established is a runtime failure.
  const auto bad = write_config(R"({"integrands": [{"kind": "power", "exponent": 0.5, "support": [[1, "inf"]]}], "alpha": 1})");
  EXPECT_EQ(run("--config " + bad.string() + " integrate"), 1);
  EXPECT_EQ(run("--config " + write_config(R"({"replications": 100})").string() + " sample"), 0);
}

TEST_F(Cli, SampleHeaderAndLaw) {
  const auto cfg = write_config(R"({"replications": 20000, "sample": {"sigma": 1.7}, "alpha": 2.5})");
  ASSERT_EQ(run("--config " + cfg.string() + " sample"), 0);
  const Table t = read_csv(out("samples.csv"));
  ASSERT_EQ(t.rows.size(), 20000u);
  EXPECT_EQ(t.header, (std::vector<std::string>{"rep", "y_1", "y_2", "f_value"}));
  EXPECT_EQ(t.rows.front()[0], "0");
  EXPECT_TRUE(fs::exists(out("samples_cdf.svg")));
  const auto fv = t.numbers("f_value");
  const iext::FrechetLaw law(2.5, 1.7);
  EXPECT_LT(iext::stats::ks_statistic(fv, [&](double x) { return iext::frechet_cdf(law, x); }), iext::stats::ks_critical(fv.size()));
}

TEST_F(Cli, SampleZeroScale) {
  const auto cfg = write_config(R"({"replications": 50, "sample": {"sigma": 0},
                                    "loss": {"kind": "euclidean", "dim": 3}})");
  ASSERT_EQ(run("--config " + cfg.string() + " sample"), 0);
  const Table t = read_csv(out("samples.csv"));
  EXPECT_EQ(t.header, (std::vector<std::string>{"rep", "y_1", "y_2", "y_3", "f_value"}));
  for (const auto& r : t.rows)
    for (std::size_t c = 1; c < r.size(); ++c) EXPECT_EQ(std::stod(r[c]), 0.0);
}

TEST_F(Cli, SeedOverrideAndJobsInvariance) {
  const auto cfg = write_config(R"({"replications": 500})");
  ASSERT_EQ(run("--config " + cfg.string() + " --seed 5 sample", "a"), 0);
  ASSERT_EQ(run("--config " + cfg.string() + " --seed 5 --jobs 4 sample", "b"), 0);
  ASSERT_EQ(run("--config " + cfg.string() + " --seed 6 sample", "c"), 0);
  EXPECT_EQ(slurp(out("samples.csv", "a")), slurp(out("samples.csv", "b")));
  EXPECT_NE(slurp(out("samples.csv", "a")), slurp(out("samples.csv", "c")));
}

TEST_F(Cli, IntegrateSimpleFunctionLaw) {
  const auto cfg = write_config(R"({"alpha": 2, "replications": 20000,
      "integrands": [{"kind": "simple", "pieces": [{"cells": [[0, 1]], "coeff": 2}, {"cells": [[1, 3]], "coeff": 1}]}]})");
  ASSERT_EQ(run("--config " + cfg.string() + " integrate"), 0);
  const Table t = read_csv(out("integral_1.csv"));
  EXPECT_EQ(t.header, (std::vector<std::string>{"replication", "value_1", "value_2", "f_value", "atom_index", "atoms_used",
                                                "mismatch_prob"}));
  const auto fv = t.numbers("f_value");
  const iext::FrechetLaw law(2.0, std::sqrt(6.0));
  EXPECT_LT(iext::stats::ks_statistic(fv, [&](double x) { return iext::frechet_cdf(law, x); }), iext::stats::ks_critical(fv.size()));
}

TEST_F(Cli, IntegrateHonoursTruncationBound) {
  const auto cfg = write_config(R"({"alpha": 1, "replications": 2000, "epsilon_trunc": 0.001,
      "integrands": [{"kind": "exp_decay", "rate": 1, "support": [[0, "inf"]]},
                     {"kind": "power", "exponent": 2, "support": [[1, "inf"]]}]})");
  ASSERT_EQ(run("--config " + cfg.string() + " integrate"), 0);
  for (const char* file : {"integral_1.csv", "integral_2.csv"}) {
    const Table t = read_csv(out(file));
    ASSERT_EQ(t.rows.size(), 2000u);
    for (double p : t.numbers("mismatch_prob")) {
      EXPECT_LE(p, 0.001);
      EXPECT_GT(p, 0.0);
    }
  }
}

TEST_F(Cli, IntegrateCellsBackendReportsGap) {
  const auto cfg = write_config(R"({"alpha": 2, "replications": 200, "backend": "cells", "level": 8})");
  ASSERT_EQ(run("--config " + cfg.string() + " integrate"), 0);
  const Table t = read_csv(out("integral_1.csv"));
  EXPECT_EQ(t.header.back(), "lalpha_gap");
  for (double gap : t.numbers("lalpha_gap")) EXPECT_NEAR(gap, 0.005698978900909361, 1e-9);
}

TEST_F(Cli, IntegrateDumpsAtoms) {
  const auto cfg = write_config(R"({"replications": 10, "integrands": [{"kind": "indicator", "support": [[0, 2]]}]})");
  ASSERT_EQ(run("--config " + cfg.string() + " integrate --dump-atoms 25"), 0);
  const Table atoms = read_csv(out("atoms_1.csv"));
  EXPECT_EQ(atoms.header, (std::vector<std::string>{"k", "s", "u", "theta_1", "theta_2"}));
  ASSERT_GE(atoms.rows.size(), 25u);
  const auto u = atoms.numbers("u");
  for (std::size_t k = 1; k < u.size(); ++k) EXPECT_LT(u[k], u[k - 1]);
  for (double s : atoms.numbers("s")) {
    EXPECT_GE(s, 0.0);
    EXPECT_LT(s, 2.0);
  }
  // For an indicator of the whole region the first atom attains the integral.
  const Table draws = read_csv(out("integral_1.csv"));
  EXPECT_EQ(draws.rows[0][draws.column("atom_index")], "0");
  EXPECT_DOUBLE_EQ(draws.numbers("f_value")[0], u[0]);
}

TEST_F(Cli, ProcessIsMonotoneWithFrechetMargins) {
  const auto cfg = write_config(R"({"alpha": 1.5, "replications": 20000, "process": {"times": [0.5, 1, 2]}})");
  ASSERT_EQ(run("--config " + cfg.string() + " process"), 0);
  const Table t = read_csv(out("process.csv"));
  EXPECT_EQ(t.header, (std::vector<std::string>{"rep", "t", "x_1", "x_2", "f_value"}));
  ASSERT_EQ(t.rows.size(), 60000u);
  const auto fv = t.numbers("f_value");
  const auto times = t.numbers("t");
  std::vector<double> at2;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    if (i % 3 != 0) { EXPECT_LE(fv[i - 1], fv[i]); }
    if (times[i] == 2.0) at2.push_back(fv[i]);
  }
  const iext::FrechetLaw law(1.5, std::pow(2.0, 1.0 / 1.5));
  EXPECT_LT(iext::stats::ks_statistic(at2, [&](double x) { return iext::frechet_cdf(law, x); }), iext::stats::ks_critical(at2.size()));
  EXPECT_TRUE(fs::exists(out("process_paths.svg")));
}

TEST_F(Cli, SingleKernelProcessMatchesIntegrate) {
  const auto cfg = write_config(R"({"replications": 300, "process": {"kind": "kernels", "times": [1]},
      "integrands": [{"kind": "triangle", "center": 2, "half_width": 1, "support": [[0, 10]]}]})");
  ASSERT_EQ(run("--config " + cfg.string() + " process"), 0);
  ASSERT_EQ(run("--config " + cfg.string() + " integrate"), 0);
  EXPECT_EQ(read_csv(out("process.csv")).numbers("f_value"), read_csv(out("integral_1.csv")).numbers("f_value"));
}

TEST_F(Cli, VerifyDeterministicAndNegativeControl) {
  const auto cfg = write_config(R"({"verify": {"n_scale": 0.05}})");
  ASSERT_EQ(run("--config " + cfg.string() + " verify", "a"), 0);
  ASSERT_EQ(run("--config " + cfg.string() + " --jobs 3 verify", "b"), 0);
  EXPECT_EQ(slurp(out("verify_report.csv", "a")), slurp(out("verify_report.csv", "b")));
  EXPECT_EQ(slurp(out("verify_summary.txt", "a")), slurp(out("verify_summary.txt", "b")));
  EXPECT_NE(slurp(out("verify_summary.txt", "a")).find("19/19 checks passed"), std::string::npos);
  const auto neg = write_config(R"({"verify": {"n_scale": 0.05, "reference_scale_factor": 2}})", "neg.json");
  EXPECT_EQ(run("--config " + neg.string() + " verify", "c"), 3);
  EXPECT_NE(slurp(out("verify_summary.txt", "c")).find("FAIL marginal_law"), std::string::npos);
}

}  // namespace
