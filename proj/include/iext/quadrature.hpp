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

// Composite Gauss-Legendre quadrature with panel doubling, plus a tail rule
// for half-infinite ranges.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "iext/errors.hpp"

namespace iext::quad {

struct Options {
  double rel_tol = 1e-8;
  int max_doublings = 16;
  int max_tail_segments = 128;
};

template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    // Newton iteration on P_N starting from the Chebyshev-like guesses.
    for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= N; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[N - 1 - i] = x;
      weights[i] = w;
      weights[N - 1 - i] = w;
    }
  }
};

inline const GaussLegendre<16>& rule16() {
  static const GaussLegendre<16> rule;
  return rule;
}

template <class F>
double composite(F&& f, double a, double b, std::size_t panels) {
  const auto& r = rule16();
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < 16; ++i) s += r.weights[i] * f(mid + 0.5 * h * r.nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

/// Integral over the finite range [a, b]. Doubles the panel count until two
/// successive estimates agree to rel_tol.
template <class F>
double integrate_finite(F&& f, double a, double b, const Options& opt = {}) {
  if (!(b > a)) return 0.0;
  double prev = composite(f, a, b, 1);
  std::size_t panels = 1;
  for (int d = 0; d < opt.max_doublings; ++d) {
    panels *= 2;
    const double cur = composite(f, a, b, panels);
    if (!std::isfinite(cur)) throw integrability_error("quadrature: integrand is not finite");
    if (std::abs(cur - prev) <= opt.rel_tol * std::abs(cur) || cur == prev) return cur;
    prev = cur;
  }
  throw integrability_error("quadrature: no convergence on a finite range");
}

/// Integral over [a, inf). Segments of doubling width are added until the
/// newest one is negligible; divergence raises integrability_error.
template <class F>
double integrate_tail(F&& f, double a, const Options& opt = {}) {
  double total = 0.0;
  double lo = a;
  double width = 1.0;
  int quiet = 0;
  for (int seg = 0; seg < opt.max_tail_segments; ++seg) {
    const double hi = lo + width;
    const double part = integrate_finite(f, lo, hi, opt);
    total += part;
    if (part <= 1e-3 * opt.rel_tol * total) {
      if (total > 0.0 || ++quiet >= 64) return total;
    } else {
      quiet = 0;
    }
    lo = hi;
    width *= 2.0;
  }
  throw integrability_error("quadrature: tail integral does not converge");
}

/// Integral over [a, b] where either end may be infinite.
template <class F>
double integrate(F&& f, double a, double b, const Options& opt = {}) {
  if (!(b > a)) return 0.0;
  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) return integrate_finite(f, a, b, opt);
  auto mirrored = [&f](double s) { return f(-s); };
  if (lo_inf && hi_inf) return integrate_tail(f, 0.0, opt) + integrate_tail(mirrored, 0.0, opt);
  if (hi_inf) return integrate_tail(f, a, opt);
  return integrate_tail(mirrored, -b, opt);
}

}  // namespace iext::quad
