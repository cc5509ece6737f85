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

// Goodness-of-fit and dependence statistics used by the verification suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "iext/errors.hpp"

namespace iext::stats {

/// Asymptotic one-sample KS coefficient at the 1% level.
inline constexpr double kKsCoefficient01 = 1.628;

/// sup_x |F_N(x) - F(x)|. F may have atoms (it is evaluated at both sides of
/// each jump of F_N via the left limit F(x-) taken as F(prev(x))).
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw usage_error("ks_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double x = samples[i];
    std::size_t j = i;
    while (j < samples.size() && samples[j] == x) ++j;
    const double below = static_cast<double>(i) / n;
    const double upto = static_cast<double>(j) / n;
    const double f_at = cdf(x);
    const double f_left = cdf(std::nextafter(x, -INFINITY));
    d = std::max({d, std::abs(upto - f_at), std::abs(below - f_left)});
    i = j;
  }
  return d;
}

inline double ks_critical(std::size_t n) { return kKsCoefficient01 / std::sqrt(static_cast<double>(n)); }

/// Two-sample KS distance sup_x |F_a(x) - F_b(x)|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw usage_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) x = a[i]; else x = b[j];
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

inline double ks_two_sample_critical(std::size_t na, std::size_t nb) {
  const double a = static_cast<double>(na), b = static_cast<double>(nb);
  return kKsCoefficient01 * std::sqrt((a + b) / (a * b));
}

struct ChiSquare {
  double statistic;
  double df;
  double critical;  // 99% quantile
  bool pass() const { return statistic < critical; }
};

inline double chi_square_quantile(double df, double p) {
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), p);
}

/// Pearson goodness of fit of `counts` against category probabilities.
inline ChiSquare chi_square_gof(std::span<const std::size_t> counts, std::span<const double> probs) {
  if (counts.size() != probs.size()) throw usage_error("chi_square_gof: size mismatch");
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  double stat = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (probs[i] <= 0.0) {
      if (counts[i] > 0) stat = INFINITY;
      continue;
    }
    const double e = n * probs[i];
    stat += (static_cast<double>(counts[i]) - e) * (static_cast<double>(counts[i]) - e) / e;
    ++used;
  }
  const double df = std::max(1, used - 1);
  return {stat, df, chi_square_quantile(df, 0.99)};
}

/// Pearson test that two count vectors come from the same categorical law.
inline ChiSquare chi_square_homogeneity(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() != b.size()) throw usage_error("chi_square_homogeneity: size mismatch");
  double na = 0.0, nb = 0.0;
  for (auto c : a) na += static_cast<double>(c);
  for (auto c : b) nb += static_cast<double>(c);
  const double n = na + nb;
  double stat = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0.0) continue;
    ++used;
    const double ea = na * col / n, eb = nb * col / n;
    stat += (static_cast<double>(a[i]) - ea) * (static_cast<double>(a[i]) - ea) / ea;
    stat += (static_cast<double>(b[i]) - eb) * (static_cast<double>(b[i]) - eb) / eb;
  }
  const double df = std::max(1, used - 1);
  return {stat, df, chi_square_quantile(df, 0.99)};
}

/// Kendall's tau-b.
inline double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw usage_error("kendall_tau: need two equal-length samples of size >= 2");
  const std::size_t n = x.size();
  long double concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    long long c = 0, d = 0, tx = 0, ty = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) continue;
      if (dx == 0.0) { ++tx; continue; }
      if (dy == 0.0) { ++ty; continue; }
      if ((dx > 0.0) == (dy > 0.0)) ++c; else ++d;
    }
    concordant += c;
    discordant += d;
    tied_x += tx;
    tied_y += ty;
  }
  const long double denom = std::sqrt((concordant + discordant + tied_x) * (concordant + discordant + tied_y));
  return denom == 0 ? 0.0 : static_cast<double>((concordant - discordant) / denom);
}

/// Standard error of Kendall's tau under independence.
inline double kendall_se(std::size_t n) {
  const double m = static_cast<double>(n);
  return std::sqrt(2.0 * (2.0 * m + 5.0) / (9.0 * m * (m - 1.0)));
}

/// Mid-ranks scaled to (0, 1].
inline std::vector<double> ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = mid / static_cast<double>(n);
    i = j + 1;
  }
  return r;
}

struct DistanceCovariance {
  double dcov2;       // V_n^2
  double dcor;        // R_n
  double statistic;   // n V_n^2 / S2
  double critical;    // (z_{0.995})^2: asymptotically conservative 1% level
  bool independent() const { return statistic < critical; }
};

/// Distance covariance of two univariate samples with the conservative
/// asymptotic independence test. O(n^2) time, O(n) memory.
inline DistanceCovariance distance_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw usage_error("distance_covariance: need equal-length samples");
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  std::vector<double> ra(n, 0.0), rb(n, 0.0), rxx(n, 0.0), ryy(n, 0.0);
  long double s1 = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      const double a = std::abs(x[k] - x[l]);
      const double b = std::abs(y[k] - y[l]);
      ra[k] += a; ra[l] += a;
      rb[k] += b; rb[l] += b;
      s1 += 2.0L * a * b;
      sxx += 2.0L * a * a;
      syy += 2.0L * b * b;
    }
  }
  long double abar = 0, bbar = 0, s3 = 0, s3x = 0, s3y = 0;
  for (std::size_t k = 0; k < n; ++k) {
    abar += ra[k];
    bbar += rb[k];
    s3 += static_cast<long double>(ra[k]) * rb[k];
    s3x += static_cast<long double>(ra[k]) * ra[k];
    s3y += static_cast<long double>(rb[k]) * rb[k];
  }
  const long double n2 = static_cast<long double>(nd) * nd;
  abar /= n2;
  bbar /= n2;
  const long double s2 = abar * bbar;
  const long double v2 = s1 / n2 + s2 - 2.0L * s3 / (n2 * nd);
  const long double vx = sxx / n2 + abar * abar - 2.0L * s3x / (n2 * nd);
  const long double vy = syy / n2 + bbar * bbar - 2.0L * s3y / (n2 * nd);
  const double dcor = (vx > 0 && vy > 0) ? static_cast<double>(std::sqrt(std::max<long double>(v2, 0) / std::sqrt(vx * vy))) : 0.0;
  const double z = 2.5758293035489004;
  return {static_cast<double>(v2), dcor, s2 > 0 ? static_cast<double>(nd * v2 / s2) : 0.0, z * z};
}

}  // namespace iext::stats
