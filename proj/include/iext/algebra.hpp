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

// Loss functions and the implicit-maximum algebra built on them.
//
// A loss function f : R^d -> [0, inf) is continuous, 1-homogeneous and
// vanishes only at the origin. The implicit maximum x1 v_f x2 selects the
// argument with the larger loss, so the result is always one of the inputs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iext/errors.hpp"
#include "iext/rng.hpp"

namespace iext {

using Point = std::vector<double>;

enum class LossKind { euclidean, l_infinity, weighted_l1, asymmetric_1d, user };

inline const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::euclidean: return "euclidean";
    case LossKind::l_infinity: return "l_infinity";
    case LossKind::weighted_l1: return "weighted_l1";
    case LossKind::asymmetric_1d: return "asymmetric_1d";
    case LossKind::user: return "user";
  }
  return "?";
}

inline double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// The fixed loss f together with its dimension and the sphere constant
/// C = max{ |x| : f(x) = 1 } (Euclidean norm). Cheap to copy.
class LossFunction {
 public:
  using Eval = std::function<double(std::span<const double>)>;

  static LossFunction euclidean(std::size_t dim) {
    require_dim(dim);
    return LossFunction(LossKind::euclidean, dim, [](std::span<const double> x) { return euclidean_norm(x); }, 1.0);
  }

  static LossFunction l_infinity(std::size_t dim) {
    require_dim(dim);
    return LossFunction(
        LossKind::l_infinity, dim,
        [](std::span<const double> x) {
          double m = 0.0;
          for (double v : x) m = std::max(m, std::abs(v));
          return m;
        },
        std::sqrt(static_cast<double>(dim)));
  }

  static LossFunction weighted_l1(std::vector<double> weights) {
    require_dim(weights.size());
    double c = 0.0;
    for (double w : weights) {
      if (!(w > 0.0) || !std::isfinite(w)) throw usage_error("weighted_l1: weights must be positive and finite");
      c = std::max(c, 1.0 / w);
    }
    auto eval = [w = weights](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::abs(x[i]);
      return s;
    };
    LossFunction f(LossKind::weighted_l1, weights.size(), std::move(eval), c);
    f.params_ = std::move(weights);
    return f;
  }

  /// f(x) = up * x for x >= 0 and down * |x| for x < 0, on R^1.
  static LossFunction asymmetric_1d(double up, double down) {
    if (!(up > 0.0) || !(down > 0.0)) throw usage_error("asymmetric_1d: slopes must be positive");
    auto eval = [up, down](std::span<const double> x) { return x[0] >= 0.0 ? up * x[0] : -down * x[0]; };
    LossFunction f(LossKind::asymmetric_1d, 1, std::move(eval), std::max(1.0 / up, 1.0 / down));
    f.params_ = {up, down};
    return f;
  }

  /// User-supplied loss. The sphere constant is estimated by projecting random
  /// directions onto {f = 1} and inflating the observed maximum by 5%.
  static LossFunction user(std::size_t dim, Eval eval, std::uint64_t seed = 0x5eedULL, std::size_t draws = 20000) {
    require_dim(dim);
    Rng rng(seed);
    Point x(dim);
    double c = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      for (auto& v : x) v = rng.normal();
      const double fx = eval(x);
      if (!(fx > 0.0)) throw usage_error("user loss: f(x) must be positive for x != 0");
      c = std::max(c, euclidean_norm(x) / fx);
    }
    return LossFunction(LossKind::user, dim, std::move(eval), 1.05 * c);
  }

  double operator()(std::span<const double> x) const {
    if (x.size() != dim_) throw usage_error("loss: point dimension does not match loss dimension");
    return eval_(x);
  }

  std::size_t dimension() const noexcept { return dim_; }
  double sphere_constant() const noexcept { return sphere_constant_; }
  LossKind kind() const noexcept { return kind_; }
  /// Parameters of parametrised kinds (weights, or {up, down}).
  const std::vector<double>& params() const noexcept { return params_; }

 private:
  LossFunction(LossKind kind, std::size_t dim, Eval eval, double c)
      : kind_(kind), dim_(dim), eval_(std::move(eval)), sphere_constant_(c) {}

  static void require_dim(std::size_t dim) {
    if (dim == 0) throw usage_error("loss: dimension must be positive");
  }

  LossKind kind_;
  std::size_t dim_;
  Eval eval_;
  double sphere_constant_;
  std::vector<double> params_;
};

struct ImplicitMax {
  Point value;
  std::size_t index;  // 0-based position of value in the input list
};

/// Index of x_1 v_f ... v_f x_k (left fold; the earlier element wins ties).
inline std::size_t vf_argmax(const LossFunction& f, std::span<const Point> xs) {
  if (xs.empty()) throw usage_error("vf_max: empty list");
  std::size_t best = 0;
  double best_f = f(xs[0]);
  for (std::size_t j = 1; j < xs.size(); ++j) {
    const double fj = f(xs[j]);
    if (fj > best_f) {
      best = j;
      best_f = fj;
    }
  }
  return best;
}

inline ImplicitMax vf_max(const LossFunction& f, std::span<const Point> xs) {
  const std::size_t j = vf_argmax(f, xs);
  return {xs[j], j};
}

/// Binary form x v_f y.
inline const Point& vf_max(const LossFunction& f, const Point& x, const Point& y) {
  return f(y) > f(x) ? y : x;
}

/// Implicit second maximum: v_f over the list with the attaining element removed.
inline Point vf_second(const LossFunction& f, std::span<const Point> xs) {
  if (xs.size() < 2) throw usage_error("vf_second: need at least two points");
  const std::size_t j0 = vf_argmax(f, xs);
  std::size_t best = j0 == 0 ? 1 : 0;
  double best_f = f(xs[best]);
  for (std::size_t j = best + 1; j < xs.size(); ++j) {
    if (j == j0) continue;
    const double fj = f(xs[j]);
    if (fj > best_f) {
      best = j;
      best_f = fj;
    }
  }
  return xs[best];
}

/// x <=_f y  iff  f(x) < f(y) or x == y (bitwise coordinate equality).
inline bool leq_f(const LossFunction& f, const Point& x, const Point& y) {
  if (x.size() != y.size()) throw usage_error("leq_f: dimension mismatch");
  return f(x) < f(y) || x == y;
}

struct PerturbationBound {
  bool applicable;
  double bound;
};

/// Stability of v_f under perturbed coefficients. With gamma = min of all
/// coefficients and rho = max |alpha_j - beta_j|: if the leading term has a
/// (1 + delta) gap over the second and rho < gamma (sqrt(1 + delta) - 1), then
/// |v_f alpha_j x_j - v_f beta_j x_j| <= C rho max_j f(x_j).
/// The gap condition is re-checked here and folded into `applicable`.
inline PerturbationBound perturbation_bound(const LossFunction& f, std::span<const double> alphas,
                                            std::span<const double> betas, std::span<const Point> xs,
                                            double delta) {
  if (alphas.size() != xs.size() || betas.size() != xs.size())
    throw usage_error("perturbation_bound: coefficient and point lists differ in length");
  if (xs.empty()) throw usage_error("perturbation_bound: empty list");
  if (!(delta > 0.0)) throw usage_error("perturbation_bound: delta must be positive");
  double gamma = alphas[0];
  double rho = 0.0;
  double max_f = 0.0;
  std::vector<Point> scaled(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (!(alphas[j] > 0.0) || !(betas[j] > 0.0)) throw usage_error("perturbation_bound: coefficients must be positive");
    gamma = std::min({gamma, alphas[j], betas[j]});
    rho = std::max(rho, std::abs(alphas[j] - betas[j]));
    max_f = std::max(max_f, f(xs[j]));
    scaled[j] = xs[j];
    for (auto& v : scaled[j]) v *= alphas[j];
  }
  const double lead = f(vf_max(f, scaled).value);
  const double second = scaled.size() >= 2 ? f(vf_second(f, scaled)) : 0.0;
  const bool gap_holds = lead >= (1.0 + delta) * second;
  const bool applicable = gap_holds && rho < gamma * (std::sqrt(1.0 + delta) - 1.0);
  return {applicable, f.sphere_constant() * rho * max_f};
}

inline Point scaled(const Point& x, double a) {
  Point y = x;
  for (auto& v : y) v *= a;
  return y;
}

}  // namespace iext
