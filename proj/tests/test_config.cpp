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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "iext/config.hpp"

namespace iext::config {
namespace {

std::string error_path(const std::string& text) {
  try {
    parse(text);
  } catch (const config_error& e) {
    return e.where();
  }
  return "<no error>";
}

TEST(Config, EmptyObjectGivesDefaults) {
  const RunConfig c = parse("{}");
  EXPECT_EQ(c, RunConfig{});
  EXPECT_EQ(c.seed, 20260101u);
  EXPECT_EQ(c.alpha, 1.5);
  EXPECT_EQ(c.backend, "series");
  EXPECT_EQ(c.replications, 20000u);
  EXPECT_EQ(c.integrands.size(), 1u);
  EXPECT_EQ(c.measure.ground.front().second, kInf);
}

TEST(Config, FullDocumentRoundTrips) {
  const std::string text = R"({
    "seed": 7, "alpha": 0.8,
    "loss": {"kind": "weighted_l1", "weights": [1, 2]},
    "kappa": {"kind": "discrete", "atoms": [{"theta": [1, 0], "prob": 0.25}, {"theta": [0, -1], "prob": 0.75}]},
    "measure": {"ground": [[null, "inf"]], "density": "exponential", "rate": 0.5},
    "integrands": [
      {"kind": "triangle", "center": 1, "half_width": 0.5, "support": [["-inf", 3]]},
      {"kind": "simple", "pieces": [{"cells": [[0, 1], [2, 3]], "coeff": 2}, {"cells": [[1, 2]], "coeff": 0.5}]},
      {"kind": "power", "exponent": 2, "support": [[1, null]]}
    ],
    "sample": {"sigma": 3},
    "process": {"kind": "kernels", "times": [1, 2, 5], "origin": 0},
    "backend": "cells", "level": 6, "replications": 123, "epsilon_trunc": 0.01,
    "output": "elsewhere",
    "verify": {"n_scale": 0.5, "reference_scale_factor": 1}
  })";
  const RunConfig c = parse(text);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.loss.dim, 2u);
  EXPECT_EQ(c.measure.ground.front().first, -kInf);
  EXPECT_EQ(c.integrands[0].support.front().first, -kInf);
  EXPECT_EQ(c.integrands[1].pieces.size(), 2u);
  EXPECT_EQ(c.integrands[2].support.front().second, kInf);
  EXPECT_EQ(c.sigma, 3.0);
  EXPECT_EQ(parse(serialize(c)), c);
  EXPECT_EQ(serialize(parse(serialize(c))), serialize(c));
}

TEST(Config, RoundTripOfDefaults) { EXPECT_EQ(parse(serialize(RunConfig{})), RunConfig{}); }

TEST(Config, LossWithoutKappaPicksCompatibleDefault) {
  const RunConfig c = parse(R"({"loss": {"kind": "asymmetric_1d", "up": 1, "down": 2}})");
  EXPECT_EQ(c.kappa.kind, "projection");
  EXPECT_NO_THROW(build_spec(c));
  const RunConfig c2 = parse(R"({"loss": {"kind": "l_infinity", "dim": 2}})");
  EXPECT_EQ(c2.kappa.kind, "discrete");
  EXPECT_NO_THROW(build_spec(c2));
}

TEST(Config, ErrorsCarryJsonPointer) {
  EXPECT_EQ(error_path(R"({"alpha": "x"})"), "/alpha");
  EXPECT_EQ(error_path(R"({"alpha": -1})"), "/alpha");
  EXPECT_EQ(error_path(R"({"bogus": 1})"), "/bogus");
  EXPECT_EQ(error_path(R"({"loss": {"kind": "nope"}})"), "/loss/kind");
  EXPECT_EQ(error_path(R"({"loss": {"kind": "euclidean", "dim": -2}})"), "/loss/dim");
  EXPECT_EQ(error_path(R"({"kappa": {"kind": "discrete", "atoms": [{"theta": [1, 0]}]}})"), "/kappa/atoms/0");
  EXPECT_EQ(error_path(R"({"integrands": [{"kind": "exp_decay"}, {"kind": "sinc"}]})"), "/integrands/1/kind");
  EXPECT_EQ(error_path(R"({"integrands": [{"kind": "indicator", "support": [[2, 1]]}]})"), "/integrands/0/support/0");
  EXPECT_EQ(error_path(R"({"integrands": [{"kind": "indicator", "support": [[0, "big"]]}]})"), "/integrands/0/support/0/1");
  EXPECT_EQ(error_path(R"({"process": {"times": [1, 3, 2]}})"), "/process/times/2");
  EXPECT_EQ(error_path(R"({"backend": "gpu"})"), "/backend");
  EXPECT_EQ(error_path(R"({"level": 31})"), "/level");
  EXPECT_EQ(error_path(R"({"replications": 0})"), "/replications");
  EXPECT_EQ(error_path(R"({"epsilon_trunc": 1})"), "/epsilon_trunc");
  EXPECT_EQ(error_path(R"({"sample": {"sigma": -1}})"), "/sample/sigma");
  EXPECT_EQ(error_path(R"({"verify": {"n_scale": 0}})"), "/verify/n_scale");
  EXPECT_EQ(error_path(R"([1, 2])"), "/");
}

TEST(Config, SyntaxErrorReportsLine) {
  try {
    parse("{\n  \"alpha\": 1.5,\n  \"seed\": ,\n}");
    FAIL() << "expected a config_error";
  } catch (const config_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, LoadFromFile) {
  const std::string path = testing::TempDir() + "iext_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"seed": 99, "alpha": 2})";
  }
  const RunConfig c = load(path);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.alpha, 2.0);
  std::remove(path.c_str());
  EXPECT_THROW(load(path), config_error);
}

TEST(Builders, SemanticErrorsMapToPaths) {
  auto where = [](const std::string& text, auto build) {
    try {
      build(parse(text));
    } catch (const config_error& e) {
      return e.where();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(where(R"({"kappa": {"kind": "discrete", "atoms": [{"theta": [1, 0], "prob": 0.5}]}})",
                  [](const RunConfig& c) { build_spec(c); }),
            "/kappa");
  EXPECT_EQ(where(R"({"kappa": {"kind": "dirac", "theta": [1, 0, 0]}})", [](const RunConfig& c) { build_spec(c); }), "/kappa");
  EXPECT_EQ(where(R"({"loss": {"kind": "weighted_l1", "weights": [1, -1]}})", [](const RunConfig& c) { build_loss(c); }),
            "/loss");
  EXPECT_EQ(where(R"({"integrands": [{"kind": "exp_decay", "rate": -1}]})", [](const RunConfig& c) { build_integrands(c); }),
            "/integrands/0");
  EXPECT_EQ(where(R"({"integrands": [{"kind": "power", "exponent": 1, "support": [[0, 1]]}]})",
                  [](const RunConfig& c) { build_integrands(c); }),
            "/integrands/0");
  EXPECT_EQ(where(R"({"alpha": 1, "integrands": [{"kind": "exp_decay"}, {"kind": "power", "exponent": 0.5, "support": [[1, "inf"]]}]})",
                  [](const RunConfig& c) { build_integrands(c); }),
            "/integrands/1");
  EXPECT_EQ(where(R"({"alpha": 1, "process": {"kind": "kernels"}, "integrands": [{"kind": "indicator", "support": [[0, "inf"]]}]})",
                  [](const RunConfig& c) { build_process(c); }),
            "/integrands/0");
  EXPECT_EQ(where(R"({"process": {"kind": "cumulative", "times": [-1, 2]}})", [](const RunConfig& c) { build_process(c); }),
            "/process/times");
}

TEST(Builders, BuildWhatWasConfigured) {
  const RunConfig c = parse(R"({
    "loss": {"kind": "l_infinity", "dim": 3},
    "kappa": {"kind": "projection", "base": "positive_orthant"},
    "measure": {"ground": [[0, 10]], "density": "exponential", "rate": 2},
    "integrands": [{"kind": "indicator", "support": [[0, 1], [2, 3]]}],
    "backend": "cells", "level": 5, "epsilon_trunc": 0.001,
    "process": {"kind": "cumulative", "times": [1, 2], "origin": 0.5}
  })");
  const auto spec = build_spec(c);
  EXPECT_EQ(spec->loss.kind(), LossKind::l_infinity);
  EXPECT_EQ(spec->loss.dimension(), 3u);
  EXPECT_FALSE(spec->kappa.is_discrete());
  EXPECT_NEAR(spec->space.measure(Cell(0, 1)), 1.0 - std::exp(-2.0), 1e-12);
  const auto g = build_integrands(c);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0](2.5), 1.0);
  EXPECT_EQ(g[0](1.5), 0.0);
  const auto ctl = build_controls(c);
  EXPECT_EQ(ctl.backend, Backend::cells);
  EXPECT_EQ(ctl.level, 5);
  EXPECT_EQ(ctl.epsilon_trunc, 0.001);
  const auto [kernels, times] = build_process(c);
  ASSERT_EQ(kernels.size(), 2u);
  EXPECT_EQ(times, (std::vector<double>{1, 2}));
  EXPECT_EQ(kernels[1].support(), Cell(0.5, 2.5));
  const auto suite = build_suite(c);
  EXPECT_EQ(suite.alpha, c.alpha);
  EXPECT_EQ(suite.context.seed, c.seed);
}

TEST(ShippedConfigs, ParseAndBuild) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(IEXT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    SCOPED_TRACE(entry.path().string());
    const RunConfig c = load(entry.path().string());
    EXPECT_NO_THROW(build_spec(c));
    EXPECT_NO_THROW(build_integrands(c));
    EXPECT_NO_THROW(build_process(c));
    EXPECT_EQ(parse(serialize(c)), c);
  }
  EXPECT_GE(seen, 1u);
  EXPECT_EQ(load(std::string(IEXT_CONFIG_DIR) + "/default.json"), RunConfig{});
}

}  // namespace
}  // namespace iext::config
