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

#include <algorithm>
#include <cmath>
#include <vector>

#include "iext/algebra.hpp"
#include "iext/rng.hpp"

namespace iext {
namespace {

std::vector<LossFunction> builtin_losses() {
  return {LossFunction::euclidean(3), LossFunction::l_infinity(3), LossFunction::weighted_l1({0.5, 2.0, 1.0}),
          LossFunction::user(3, [](std::span<const double> x) {
            return std::abs(x[0]) + 2.0 * std::sqrt(x[1] * x[1] + x[2] * x[2]);
          })};
}

Point random_point(Rng& rng, std::size_t d, double scale = 1.0) {
  Point x(d);
  for (auto& v : x) v = scale * rng.normal();
  return x;
}

TEST(Loss, ZeroOnlyAtOrigin) {
  Rng rng(1);
  for (const auto& f : builtin_losses()) {
    EXPECT_EQ(f(Point(3, 0.0)), 0.0);
    for (int i = 0; i < 1000; ++i) EXPECT_GT(f(random_point(rng, 3)), 0.0);
  }
}

TEST(Loss, PositivelyHomogeneous) {
  Rng rng(2);
  for (const auto& f : builtin_losses()) {
    for (int i = 0; i < 1000; ++i) {
      const Point x = random_point(rng, 3);
      const double lambda = rng.uniform(0.0, 50.0);
      EXPECT_NEAR(f(scaled(x, lambda)), lambda * f(x), 1e-12 * lambda * f(x) + 1e-300);
    }
  }
}

TEST(Loss, SphereConstantDominatesNormRatio) {
  Rng rng(3);
  for (const auto& f : builtin_losses()) {
    for (int i = 0; i < 5000; ++i) {
      const Point x = random_point(rng, 3);
      EXPECT_LE(euclidean_norm(x) / f(x), f.sphere_constant() * (1.0 + 1e-12));
    }
  }
}

TEST(Loss, ClosedFormSphereConstants) {
  EXPECT_DOUBLE_EQ(LossFunction::euclidean(4).sphere_constant(), 1.0);
  EXPECT_DOUBLE_EQ(LossFunction::l_infinity(4).sphere_constant(), 2.0);
  EXPECT_DOUBLE_EQ(LossFunction::weighted_l1({0.25, 2.0}).sphere_constant(), 4.0);
  EXPECT_DOUBLE_EQ(LossFunction::asymmetric_1d(2.0, 0.5).sphere_constant(), 2.0);
  // max |x| / f(x) for f(x) = |x_1| + 2 |(x_2, x_3)| is 1 (along e_1); the estimate is inflated by 5%.
  const auto user = builtin_losses()[3];
  EXPECT_GE(user.sphere_constant(), 1.0 * 0.98);
  EXPECT_LE(user.sphere_constant(), 1.05 + 1e-12);
}

TEST(Loss, RejectsBadInput) {
  EXPECT_THROW(LossFunction::euclidean(0), usage_error);
  EXPECT_THROW(LossFunction::weighted_l1({1.0, 0.0}), usage_error);
  EXPECT_THROW(LossFunction::asymmetric_1d(-1.0, 1.0), usage_error);
  const auto f = LossFunction::euclidean(2);
  EXPECT_THROW(f(Point{1.0, 2.0, 3.0}), usage_error);
}

TEST(VfMax, LeftWinsTies) {
  const auto f = LossFunction::euclidean(2);
  const std::vector<Point> xs{{3, 4}, {0, 5}, {1, 0}};
  const auto r = vf_max(f, xs);
  EXPECT_EQ(r.value, (Point{3, 4}));
  EXPECT_EQ(r.index, 0u);
  EXPECT_EQ(vf_max(f, xs[0], xs[1]), xs[0]);
  EXPECT_EQ(vf_max(f, xs[1], xs[0]), xs[1]);
}

TEST(VfMax, Singleton) {
  const auto f = LossFunction::l_infinity(2);
  const std::vector<Point> xs{{-2.5, 1.0}};
  EXPECT_EQ(vf_max(f, xs).value, xs[0]);
  EXPECT_EQ(vf_max(f, xs).index, 0u);
}

TEST(VfMax, OrdinaryMaximumOnTheLine) {
  const auto f = LossFunction::euclidean(1);
  const std::vector<Point> xs{{2}, {7}, {5}};
  const auto r = vf_max(f, xs);
  EXPECT_EQ(r.value, Point{7});
  EXPECT_EQ(r.index, 1u);
}

TEST(VfMax, Errors) {
  const auto f = LossFunction::euclidean(2);
  EXPECT_THROW(vf_max(f, std::vector<Point>{}), usage_error);
  EXPECT_THROW(vf_max(f, std::vector<Point>{{1, 2}, {1, 2, 3}}), usage_error);
}

TEST(VfMax, AllZeroReturnsFirst) {
  const auto f = LossFunction::euclidean(2);
  const std::vector<Point> xs{{0, 0}, {0, -0.0}, {0, 0}};
  EXPECT_EQ(vf_max(f, xs).index, 0u);
}

TEST(VfMax, ResultIsElementAndAttainsMaxF) {
  Rng rng(4);
  for (const auto& f : builtin_losses()) {
    for (int rep = 0; rep < 500; ++rep) {
      std::vector<Point> xs;
      const std::size_t k = 1 + rng.below(8);
      for (std::size_t i = 0; i < k; ++i) xs.push_back(random_point(rng, 3));
      const auto r = vf_max(f, xs);
      ASSERT_EQ(r.value, xs[r.index]);
      double m = 0.0;
      for (const auto& x : xs) m = std::max(m, f(x));
      EXPECT_EQ(f(r.value), m);
      for (std::size_t j = 0; j < r.index; ++j) EXPECT_LT(f(xs[j]), m);
    }
  }
}

TEST(VfMax, FoldGroupingDoesNotMatter) {
  Rng rng(5);
  const auto f = LossFunction::weighted_l1({1.0, 3.0});
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<Point> xs;
    for (int i = 0; i < 6; ++i) {
      // Quantised coordinates make ties common.
      xs.push_back({std::round(rng.uniform(-3, 3)), std::round(rng.uniform(-1, 1))});
    }
    const Point left = vf_max(f, vf_max(f, vf_max(f, xs[0], xs[1]), vf_max(f, xs[2], xs[3])), vf_max(f, xs[4], xs[5]));
    Point fold = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) fold = vf_max(f, fold, xs[i]);
    EXPECT_EQ(left, fold);
    EXPECT_EQ(fold, vf_max(f, xs).value);
  }
}

TEST(VfMax, CommutesIffComparable) {
  Rng rng(6);
  const auto f = LossFunction::euclidean(2);
  for (int rep = 0; rep < 2000; ++rep) {
    const Point x{std::round(rng.uniform(-2, 2)), std::round(rng.uniform(-2, 2))};
    const Point y{std::round(rng.uniform(-2, 2)), std::round(rng.uniform(-2, 2))};
    const bool comparable = leq_f(f, x, y) || leq_f(f, y, x);
    EXPECT_EQ(comparable, vf_max(f, x, y) == vf_max(f, y, x));
  }
}

TEST(VfMax, Homogeneity) {
  Rng rng(7);
  const auto f = LossFunction::l_infinity(3);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<Point> xs, ys;
    const double lambda = std::ldexp(1.0, static_cast<int>(rng.below(20)) - 10);
    for (int i = 0; i < 5; ++i) {
      xs.push_back(random_point(rng, 3));
      ys.push_back(scaled(xs.back(), lambda));
    }
    const auto a = vf_max(f, xs);
    const auto b = vf_max(f, ys);
    EXPECT_EQ(a.index, b.index);
    EXPECT_EQ(scaled(a.value, lambda), b.value);
  }
}

TEST(VfSecond, Examples) {
  const auto f = LossFunction::euclidean(2);
  EXPECT_EQ(vf_second(f, std::vector<Point>{{3, 4}, {1, 0}, {0, 5}}), (Point{0, 5}));
  const Point x{1.5, -2.0};
  EXPECT_EQ(vf_second(f, std::vector<Point>{x, x}), x);
  EXPECT_THROW(vf_second(f, std::vector<Point>{x}), usage_error);
}

TEST(VfSecond, EqualsMaxAfterDeletion) {
  Rng rng(8);
  const auto f = LossFunction::euclidean(2);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<Point> xs;
    const std::size_t k = 2 + rng.below(6);
    for (std::size_t i = 0; i < k; ++i) xs.push_back({std::round(rng.uniform(-3, 3)), std::round(rng.uniform(-3, 3))});
    const auto top = vf_max(f, xs);
    std::vector<Point> rest = xs;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(top.index));
    const Point second = vf_second(f, xs);
    EXPECT_EQ(second, vf_max(f, rest).value);
    EXPECT_LE(f(second), f(top.value));
  }
}

TEST(LeqF, Examples) {
  const auto f = LossFunction::euclidean(2);
  EXPECT_TRUE(leq_f(f, {1, 0}, {0, 2}));
  EXPECT_FALSE(leq_f(f, {1, 0}, {0, 1}));
  const Point x{0.3, -7.0};
  EXPECT_TRUE(leq_f(f, x, x));
}

TEST(LeqF, PartialOrderOnRandomTriples) {
  Rng rng(9);
  const auto f = LossFunction::weighted_l1({1.0, 2.0});
  auto draw = [&] { return Point{std::round(rng.uniform(-2, 2)), std::round(rng.uniform(-1, 1))}; };
  for (int rep = 0; rep < 5000; ++rep) {
    const Point x = draw(), y = draw(), z = draw();
    EXPECT_TRUE(leq_f(f, x, x));
    if (leq_f(f, x, y) && leq_f(f, y, x)) { EXPECT_EQ(x, y); }
    if (leq_f(f, x, y) && leq_f(f, y, z)) { EXPECT_TRUE(leq_f(f, x, z)); }
  }
}

TEST(Perturbation, IdenticalCoefficients) {
  const auto f = LossFunction::euclidean(2);
  const std::vector<Point> xs{{1, 0}, {0, 1}};
  const std::vector<double> a{4, 1};
  const auto r = perturbation_bound(f, a, a, xs, 3.0);
  EXPECT_TRUE(r.applicable);
  EXPECT_EQ(r.bound, 0.0);
}

TEST(Perturbation, WorkedExample) {
  const auto f = LossFunction::euclidean(2);
  const std::vector<Point> xs{{1, 0}, {0, 1}};
  const std::vector<double> a{4, 1}, b{4.1, 1.05};
  const auto r = perturbation_bound(f, a, b, xs, 3.0);
  EXPECT_TRUE(r.applicable);
  EXPECT_NEAR(r.bound, 0.1, 1e-12);
  std::vector<Point> ax, bx;
  for (std::size_t j = 0; j < 2; ++j) {
    ax.push_back(scaled(xs[j], a[j]));
    bx.push_back(scaled(xs[j], b[j]));
  }
  Point diff = vf_max(f, ax).value;
  const Point other = vf_max(f, bx).value;
  for (std::size_t i = 0; i < 2; ++i) diff[i] -= other[i];
  EXPECT_LE(euclidean_norm(diff), r.bound + 1e-12);
}

TEST(Perturbation, NotApplicableWhenRhoTooLarge) {
  const auto f = LossFunction::euclidean(2);
  const std::vector<Point> xs{{1, 0}, {0, 1}};
  const std::vector<double> a{4, 1}, b{6, 1};
  EXPECT_FALSE(perturbation_bound(f, a, b, xs, 3.0).applicable);
}

TEST(Perturbation, NotApplicableWithoutGap) {
  const auto f = LossFunction::euclidean(2);
  const std::vector<Point> xs{{1, 0}, {0, 1}};
  const std::vector<double> a{1.1, 1}, b{1.1, 1};
  EXPECT_FALSE(perturbation_bound(f, a, b, xs, 3.0).applicable);
}

TEST(Perturbation, Errors) {
  const auto f = LossFunction::euclidean(2);
  const std::vector<Point> xs{{1, 0}, {0, 1}};
  EXPECT_THROW(perturbation_bound(f, std::vector<double>{1, 0}, std::vector<double>{1, 1}, xs, 1.0), usage_error);
  EXPECT_THROW(perturbation_bound(f, std::vector<double>{1}, std::vector<double>{1, 1}, xs, 1.0), usage_error);
  EXPECT_THROW(perturbation_bound(f, std::vector<double>{1, 1}, std::vector<double>{1, 1}, xs, 0.0), usage_error);
}

TEST(Perturbation, DisplacementBoundHoldsWheneverApplicable) {
  Rng rng(10);
  const auto losses = builtin_losses();
  int applicable = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    const auto& f = losses[rep % losses.size()];
    const std::size_t k = 2 + rng.below(4);
    std::vector<Point> xs;
    std::vector<double> a, b;
    for (std::size_t j = 0; j < k; ++j) {
      xs.push_back(random_point(rng, 3));
      a.push_back(rng.uniform(0.5, 3.0));
      b.push_back(std::max(1e-3, a.back() + rng.uniform(-0.2, 0.2)));
    }
    const double delta = rng.uniform(0.1, 4.0);
    const auto r = perturbation_bound(f, a, b, xs, delta);
    if (!r.applicable) continue;
    ++applicable;
    std::vector<Point> ax, bx;
    for (std::size_t j = 0; j < k; ++j) {
      ax.push_back(scaled(xs[j], a[j]));
      bx.push_back(scaled(xs[j], b[j]));
    }
    Point diff = vf_max(f, ax).value;
    const Point other = vf_max(f, bx).value;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= other[i];
    EXPECT_LE(euclidean_norm(diff), r.bound * (1.0 + 1e-12));
  }
  EXPECT_GT(applicable, 1000);
}

}  // namespace
}  // namespace iext
