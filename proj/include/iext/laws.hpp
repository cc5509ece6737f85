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

// Scalar alpha-Frechet laws Phi_alpha(sigma) and their f-implicit vector
// counterparts sigma * Z * Theta.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iext/algebra.hpp"
#include "iext/errors.hpp"
#include "iext/rng.hpp"

namespace iext {

/// Phi_alpha(sigma): P(Z <= x) = exp(-sigma^alpha x^-alpha) for x > 0.
/// sigma = 0 is the point mass at zero.
struct FrechetLaw {
  double alpha = 1.0;
  double sigma = 1.0;

  FrechetLaw() = default;
  FrechetLaw(double a, double s) : alpha(a), sigma(s) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw usage_error("FrechetLaw: alpha must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw usage_error("FrechetLaw: sigma must be nonnegative");
  }

  /// sigma^alpha, the weight in front of x^-alpha in the log-CDF.
  double weight() const { return std::pow(sigma, alpha); }

  friend bool operator==(const FrechetLaw&, const FrechetLaw&) = default;
};

inline double frechet_cdf(const FrechetLaw& law, double x) {
  if (x <= 0.0) return law.sigma == 0.0 && x == 0.0 ? 1.0 : 0.0;
  if (law.sigma == 0.0) return 1.0;
  return std::exp(-std::pow(law.sigma / x, law.alpha));
}

inline double frechet_quantile(const FrechetLaw& law, double p) {
  if (!(p > 0.0 && p < 1.0)) throw usage_error("frechet_quantile: p must lie in (0, 1)");
  return law.sigma * std::pow(-std::log(p), -1.0 / law.alpha);
}

/// Inverse transform of a uniform u in (0, 1).
inline double frechet_from_uniform(const FrechetLaw& law, double u) {
  if (law.sigma == 0.0) return 0.0;
  return law.sigma * std::pow(-std::log(u), -1.0 / law.alpha);
}

inline double frechet_sample(const FrechetLaw& law, Rng& rng) {
  if (law.sigma == 0.0) return 0.0;
  return frechet_from_uniform(law, rng.uniform());
}

/// Law of the maximum of independent Phi_alpha(sigma_j): scale (sum sigma_j^alpha)^(1/alpha).
inline FrechetLaw max_scale(std::span<const FrechetLaw> laws) {
  if (laws.empty()) throw usage_error("max_scale: empty list");
  const double alpha = laws[0].alpha;
  double w = 0.0;
  for (const auto& l : laws) {
    if (l.alpha != alpha) throw usage_error("max_scale: laws must share alpha");
    w += l.weight();
  }
  return FrechetLaw(alpha, std::pow(w, 1.0 / alpha));
}

/// P(Y1 <= Y2 <= (1 + gamma) Y1) for independent Y_i ~ Phi_alpha(sigma_i).
/// With weights w_i = sigma_i^alpha this is
///   w1 / (w1 + (1+gamma)^-alpha w2) - w1 / (w1 + w2).
inline double sandwich_probability(double sigma1, double sigma2, double alpha, double gamma) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw usage_error("sandwich_probability: scales must be positive");
  if (!(alpha > 0.0)) throw usage_error("sandwich_probability: alpha must be positive");
  if (!(gamma >= 0.0)) throw usage_error("sandwich_probability: gamma must be nonnegative");
  const double w1 = std::pow(sigma1, alpha);
  const double w2 = std::pow(sigma2, alpha);
  const double shrink = std::pow(1.0 + gamma, -alpha);
  return w1 / (w1 + shrink * w2) - w1 / (w1 + w2);
}

/// Uniform bound 1 - (1+gamma)^-alpha on P(f(max) <= (1+gamma) f(second max)).
inline double gap_bound(double alpha, double gamma) { return 1.0 - std::pow(1.0 + gamma, -alpha); }

/// Probability measure kappa on the unit loss sphere S = {f = 1}.
class AngularMeasure {
 public:
  enum class Variant { discrete, projection };
  enum class Base { gaussian, uniform_cube, positive_orthant };

  struct Atom {
    Point theta;
    double prob;
  };

  /// Discrete kappa. Atoms are normalised onto S; probabilities must sum to 1.
  static AngularMeasure discrete(const LossFunction& f, std::vector<Atom> atoms) {
    if (atoms.empty()) throw usage_error("AngularMeasure: no atoms");
    double total = 0.0;
    for (auto& a : atoms) {
      if (a.theta.size() != f.dimension()) throw usage_error("AngularMeasure: atom dimension mismatch");
      if (!(a.prob >= 0.0)) throw usage_error("AngularMeasure: negative probability");
      const double fa = f(a.theta);
      if (!(fa > 0.0)) throw usage_error("AngularMeasure: atom at the origin");
      for (auto& v : a.theta) v /= fa;
      total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12) throw usage_error("AngularMeasure: probabilities must sum to 1");
    AngularMeasure k(f, Variant::discrete);
    k.cumulative_.reserve(atoms.size());
    double c = 0.0;
    for (const auto& a : atoms) k.cumulative_.push_back(c += a.prob);
    k.cumulative_.back() = 1.0;
    k.atoms_ = std::move(atoms);
    return k;
  }

  static AngularMeasure dirac(const LossFunction& f, Point theta) { return discrete(f, {{std::move(theta), 1.0}}); }

  /// Law of X / f(X) for X drawn from `base`.
  static AngularMeasure projection(const LossFunction& f, Base base) {
    AngularMeasure k(f, Variant::projection);
    k.base_ = base;
    return k;
  }

  Point sample(Rng& rng) const {
    if (variant_ == Variant::discrete) return atoms_[sample_index(rng)].theta;
    Point x(loss_.dimension());
    for (;;) {
      for (auto& v : x) {
        switch (base_) {
          case Base::gaussian: v = rng.normal(); break;
          case Base::uniform_cube: v = rng.uniform(-1.0, 1.0); break;
          case Base::positive_orthant: v = std::abs(rng.normal()); break;
        }
      }
      const double fx = loss_(x);
      if (fx >= 1e-12) {
        for (auto& v : x) v /= fx;
        return x;
      }
    }
  }

  /// Index of the drawn atom; discrete measures only.
  std::size_t sample_index(Rng& rng) const {
    const double u = rng.uniform();
    std::size_t i = 0;
    while (i + 1 < cumulative_.size() && u > cumulative_[i]) ++i;
    return i;
  }

  /// Index of the atom closest to `direction` (Euclidean); discrete only.
  std::size_t nearest_atom(const Point& direction) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      double d = 0.0;
      for (std::size_t c = 0; c < direction.size(); ++c) d += (direction[c] - atoms_[i].theta[c]) * (direction[c] - atoms_[i].theta[c]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  Variant variant() const noexcept { return variant_; }
  Base base() const noexcept { return base_; }
  const std::vector<Atom>& atoms() const& noexcept { return atoms_; }
  std::vector<Atom> atoms() && { return std::move(atoms_); }
  const LossFunction& loss() const noexcept { return loss_; }
  bool is_discrete() const noexcept { return variant_ == Variant::discrete; }

 private:
  AngularMeasure(LossFunction f, Variant v) : loss_(std::move(f)), variant_(v) {}

  LossFunction loss_;
  Variant variant_;
  Base base_ = Base::gaussian;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

/// Phi^f_{alpha,kappa}(sigma): law of sigma Z Theta, Z ~ Phi_alpha independent of Theta ~ kappa.
struct ImplicitFrechetLaw {
  double alpha;
  double sigma;
  AngularMeasure kappa;

  FrechetLaw radial() const { return FrechetLaw(alpha, sigma); }
};

inline Point implicit_sample(const ImplicitFrechetLaw& law, Rng& rng) {
  const double z = frechet_sample(FrechetLaw(law.alpha, 1.0), rng);
  Point theta = law.kappa.sample(rng);
  for (auto& v : theta) v *= law.sigma * z;
  return theta;
}

}  // namespace iext
