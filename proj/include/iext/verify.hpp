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

// Statistical verification of the closed-form laws and pathwise identities of
// the implicit extremal integral. Every check is reproducible from its seed:
// replication r draws from substream(check seed, r).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iext/algebra.hpp"
#include "iext/csv.hpp"
#include "iext/errors.hpp"
#include "iext/integral.hpp"
#include "iext/laws.hpp"
#include "iext/measure.hpp"
#include "iext/parallel.hpp"
#include "iext/rng.hpp"
#include "iext/stats.hpp"
#include "iext/supmeasure.hpp"

namespace iext {

struct CheckReport {
  std::string name;
  std::size_t n = 0;
  double statistic = 0.0;
  /// Reference value or bound the statistic is compared with.
  double reference = 0.0;
  /// Standard error of the statistic when meaningful, else NaN.
  double std_error = std::numeric_limits<double>::quiet_NaN();
  /// Acceptance threshold actually applied.
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string rule;
};

inline void write_reports_csv(std::ostream& os, std::span<const CheckReport> reports) {
  csv::write_row(os, {"check", "n", "statistic", "reference", "std_error", "threshold", "verdict", "seed", "rule"});
  for (const auto& r : reports) {
    csv::write_row(os, {r.name, csv::number(static_cast<std::uint64_t>(r.n)), csv::number(r.statistic), csv::number(r.reference),
                        csv::number(r.std_error), csv::number(r.threshold), r.pass ? "pass" : "fail", csv::number(r.seed),
                        r.rule});
  }
}

inline void write_summary(std::ostream& os, std::span<const CheckReport> reports) {
  std::size_t failed = 0;
  for (const auto& r : reports) {
    os << (r.pass ? "PASS " : "FAIL ") << r.name << "  N=" << r.n << "  stat=" << csv::number(r.statistic)
       << "  ref=" << csv::number(r.reference) << "  thr=" << csv::number(r.threshold) << "  [" << r.rule << "]\n";
    if (!r.pass) ++failed;
  }
  os << (reports.size() - failed) << "/" << reports.size() << " checks passed\n";
}

/// Stable seed of a named check under a root seed.
inline std::uint64_t check_seed(std::uint64_t root, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) h = (h ^ c) * 0x100000001b3ULL;
  return substream_seed(root, h);
}

/// One-sample KS at the 1% level: pass iff D_N < 1.628 / sqrt(N).
inline CheckReport ks_check(std::string name, std::vector<double> samples, const std::function<double(double)>& cdf,
                            std::uint64_t seed = 0) {
  if (samples.size() < 100) throw usage_error("ks_check: need at least 100 samples");
  CheckReport r;
  r.name = std::move(name);
  r.n = samples.size();
  r.statistic = stats::ks_statistic(std::move(samples), cdf);
  r.reference = 0.0;
  r.threshold = stats::ks_critical(r.n);
  r.pass = r.statistic < r.threshold;
  r.seed = seed;
  r.rule = "KS D < 1.628/sqrt(N)";
  return r;
}

/// Frequency compared with a reference probability: |freq - p| <= 3 SE.
inline CheckReport frequency_check(std::string name, std::size_t hits, std::size_t n, double p, std::uint64_t seed) {
  CheckReport r;
  r.name = std::move(name);
  r.n = n;
  r.statistic = static_cast<double>(hits) / static_cast<double>(n);
  r.reference = p;
  r.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  r.threshold = 3.0 * r.std_error;
  r.pass = p == 0.0 ? hits == 0 : std::abs(r.statistic - p) <= r.threshold;
  r.seed = seed;
  r.rule = "|freq - p| <= 3 SE";
  return r;
}

/// Fraction of replications where a pathwise identity held; pass iff all.
inline CheckReport pathwise_check(std::string name, std::size_t held, std::size_t n, std::uint64_t seed, std::string rule) {
  CheckReport r;
  r.name = std::move(name);
  r.n = n;
  r.statistic = static_cast<double>(held) / static_cast<double>(n);
  r.reference = 1.0;
  r.threshold = 1.0;
  r.pass = held == n;
  r.seed = seed;
  r.rule = std::move(rule);
  return r;
}

/// Shared setup of the checks: the loss, angular part and measure space, the
/// root seed and the replication parallelism.
struct CheckContext {
  LossFunction loss = LossFunction::euclidean(2);
  AngularMeasure kappa = default_kappa(LossFunction::euclidean(2));
  MeasureSpace space = MeasureSpace::lebesgue();
  std::uint64_t seed = 20260101;
  unsigned jobs = 1;
  /// Multiplies the reference scale in marginal-law checks. 1 in honest runs;
  /// anything else is a negative control that must fail.
  double reference_scale_factor = 1.0;

  SpecPtr spec(double alpha) const { return share(SupMeasureSpec(loss, alpha, kappa, space)); }

  /// Three unequal atoms on the unit sphere of f.
  static AngularMeasure default_kappa(const LossFunction& f) {
    const std::size_t d = f.dimension();
    std::vector<AngularMeasure::Atom> atoms;
    if (d == 1) return AngularMeasure::discrete(f, {{{1.0}, 0.7}, {{-1.0}, 0.3}});
    Point a(d, 0.0), b(d, 0.0), c(d, 0.0);
    a[0] = 1.0;
    b[1] = 1.0;
    c[0] = -1.0;
    c[1] = -1.0;
    return AngularMeasure::discrete(f, {{a, 0.5}, {b, 0.3}, {c, 0.2}});
  }
};

namespace detail {

template <class T, class Fn>
std::vector<T> replicate(std::size_t n, const CheckContext& ctx, std::uint64_t seed, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, ctx.jobs, [&](std::size_t i) { out[i] = fn(substream_seed(seed, i)); });
  return out;
}

inline std::vector<std::size_t> atom_counts(const AngularMeasure& kappa, std::span<const IntegralResult> results) {
  std::vector<std::size_t> counts(kappa.atoms().size(), 0);
  for (const auto& r : results) {
    if (!(r.f_value > 0.0)) continue;
    ++counts[kappa.nearest_atom(scaled(r.value, 1.0 / r.f_value))];
  }
  return counts;
}

inline bool supports_overlap(const Integrand& g1, const Integrand& g2, const MeasureSpace& m) {
  return m.measure(g1.support().intersect(g2.support())) > 0.0;
}

}  // namespace detail

/// f(I(g)) ~ Phi_alpha(||g||_alpha), series backend.
inline CheckReport check_marginal_law(const CheckContext& ctx, std::string name, const Integrand& g, double alpha,
                                      std::size_t n, const IntegrationControls& ctl = {}) {
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const IntegralPlan plan = plan_integral(spec, g, ctl);
  const auto fv = detail::replicate<double>(n, ctx, seed, [&](std::uint64_t s) { return integrate(plan, s).f_value; });
  const FrechetLaw ref(alpha, ctx.reference_scale_factor * lalpha_norm(g, ctx.space, alpha));
  auto r = ks_check(std::move(name), fv, [ref](double x) { return frechet_cdf(ref, x); }, seed);
  r.reference = ref.sigma;
  r.rule = "KS vs Phi_alpha(||g||_alpha) at 1%";
  return r;
}

/// Direction I(g)/f(I(g)) ~ kappa (discrete kappa only), chi-square at 1%.
inline CheckReport check_angular_law(const CheckContext& ctx, std::string name, const Integrand& g, double alpha,
                                     std::size_t n) {
  if (!ctx.kappa.is_discrete()) throw usage_error("check_angular_law: needs a discrete angular measure");
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const IntegralPlan plan = plan_integral(spec, g);
  const auto res = detail::replicate<IntegralResult>(n, ctx, seed, [&](std::uint64_t s) { return integrate(plan, s); });
  const auto counts = detail::atom_counts(ctx.kappa, res);
  std::vector<double> probs;
  for (const auto& a : ctx.kappa.atoms()) probs.push_back(a.prob);
  const auto chi = stats::chi_square_gof(counts, probs);
  CheckReport r{std::move(name), n, chi.statistic, chi.df, NAN, chi.critical, chi.pass(), seed, "chi-square vs kappa at 1% (reference = df)"};
  return r;
}

/// Cell backend vs series backend for a simple integrand: two-sample KS on
/// f-values and chi-square homogeneity on angular atoms.
inline std::vector<CheckReport> check_backend_equivalence(const CheckContext& ctx, const SimpleFunction& g, double alpha,
                                                          std::size_t n) {
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed_cells = check_seed(ctx.seed, "backend_equivalence/cells");
  const std::uint64_t seed_series = check_seed(ctx.seed, "backend_equivalence/series");
  const Partition part = g.partition();
  const auto cells = detail::replicate<IntegralResult>(n, ctx, seed_cells, [&](std::uint64_t s) {
    return integrate_simple(realize_cells(spec, part, s), g);
  });
  const Cell region = g.support().intersect(ctx.space.ground());
  const auto series = detail::replicate<IntegralResult>(n, ctx, seed_series, [&](std::uint64_t s) {
    SeriesRealization real(spec, region, s);
    return integrate_simple(real, g);
  });
  std::vector<double> fa, fb;
  for (const auto& r : cells) fa.push_back(r.f_value);
  for (const auto& r : series) fb.push_back(r.f_value);
  std::vector<CheckReport> out;
  CheckReport ks;
  ks.name = "backend_equivalence_ks";
  ks.n = n;
  ks.statistic = stats::ks_two_sample(fa, fb);
  ks.threshold = stats::ks_two_sample_critical(n, n);
  ks.pass = ks.statistic < ks.threshold;
  ks.seed = seed_series;
  ks.rule = "two-sample KS at 1%";
  out.push_back(ks);
  if (ctx.kappa.is_discrete()) {
    const auto chi = stats::chi_square_homogeneity(detail::atom_counts(ctx.kappa, cells), detail::atom_counts(ctx.kappa, series));
    out.push_back({"backend_equivalence_angular", n, chi.statistic, chi.df, NAN, chi.critical, chi.pass(), seed_series,
                   "chi-square homogeneity of angular atoms at 1% (reference = df)"});
  }
  return out;
}

/// Frequency of {f(v_f X_j) <= (1+gamma) f(second v_f X_j)} for k independent
/// X_j ~ Phi^f_{alpha,kappa}(sigma_j); pass iff it does not exceed
/// 1 - (1+gamma)^-alpha by more than 3 SE.
inline CheckReport check_gap_lemma(const CheckContext& ctx, std::string name, std::span<const double> scales, double alpha,
                                   double gamma, std::size_t n) {
  if (scales.size() < 2) throw usage_error("check_gap_lemma: need k >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) throw usage_error("check_gap_lemma: gamma must lie in (0, 1)");
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const std::vector<double> sig(scales.begin(), scales.end());
  const auto hits = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    Rng rng(s);
    std::vector<Point> xs;
    for (double sigma : sig) xs.push_back(implicit_sample({alpha, sigma, ctx.kappa}, rng));
    const double top = ctx.loss(vf_max(ctx.loss, xs).value);
    const double second = ctx.loss(vf_second(ctx.loss, xs));
    return top <= (1.0 + gamma) * second ? 1 : 0;
  });
  const std::size_t count = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
  const double bound = gap_bound(alpha, gamma);
  CheckReport r;
  r.name = std::move(name);
  r.n = n;
  r.statistic = static_cast<double>(count) / static_cast<double>(n);
  r.reference = bound;
  r.std_error = std::sqrt(bound * (1.0 - bound) / static_cast<double>(n));
  r.threshold = bound + 3.0 * r.std_error;
  r.pass = r.statistic <= r.threshold;
  r.seed = seed;
  r.rule = "freq <= 1-(1+gamma)^-alpha + 3 SE";
  return r;
}

/// Directed two-variable event {f(X_1) <= f(X_2) <= (1+gamma) f(X_1)} against
/// the closed form sandwich_probability.
inline CheckReport check_sandwich(const CheckContext& ctx, std::string name, double sigma1, double sigma2, double alpha,
                                  double gamma, std::size_t n) {
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const auto hits = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    Rng rng(s);
    const double y1 = ctx.loss(implicit_sample({alpha, sigma1, ctx.kappa}, rng));
    const double y2 = ctx.loss(implicit_sample({alpha, sigma2, ctx.kappa}, rng));
    return (y1 <= y2 && y2 <= (1.0 + gamma) * y1) ? 1 : 0;
  });
  const std::size_t count = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
  return frequency_check(std::move(name), count, n, sandwich_probability(sigma1, sigma2, alpha, gamma), seed);
}

/// Random nonnegative integrand supported in [lo, hi).
inline Integrand random_integrand(Rng& rng, double lo, double hi) {
  const Cell window(lo, hi);
  switch (rng.below(4)) {
    case 0: {
      const std::size_t k = 1 + rng.below(3);
      std::vector<double> cuts;
      for (std::size_t i = 0; i < 2 * k; ++i) cuts.push_back(rng.uniform(lo, hi));
      std::sort(cuts.begin(), cuts.end());
      std::vector<SimpleFunction::Piece> pieces;
      for (std::size_t i = 0; i < k; ++i) pieces.push_back({Cell(cuts[2 * i], cuts[2 * i + 1]), rng.uniform(0.1, 2.0)});
      return Integrand::simple(SimpleFunction(std::move(pieces)));
    }
    case 1: {
      const double a = rng.uniform(lo, hi), b = rng.uniform(lo, hi);
      return Integrand::exp_decay(rng.uniform(0.2, 2.0), Cell(std::min(a, b), std::max(a, b)));
    }
    case 2:
      return Integrand::triangle(rng.uniform(lo, hi), rng.uniform(0.2, 1.5)).restricted(window);
    default: {
      const double a = rng.uniform(lo, hi), b = rng.uniform(lo, hi);
      return Integrand::indicator(Cell(std::min(a, b), std::max(a, b)));
    }
  }
}

/// I(a g1 v b g2) and a I(g1) v_f b I(g2) select the same atom with equal
/// values on every coupled realisation.
inline CheckReport check_max_linearity(const CheckContext& ctx, double alpha, std::size_t n) {
  const std::string name = "max_linearity";
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const auto ok = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    Rng rng(substream_seed(s, 1));
    const Integrand g1 = random_integrand(rng, 0.0, 4.0);
    const Integrand g2 = random_integrand(rng, 0.0, 4.0);
    const double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
    SeriesRealization real(spec, Cell(0.0, 4.0), s);
    const auto mc = max_combine(real, a, g1, b, g2);
    const bool same_atom = mc.lhs.atom.has_value() == mc.rhs_atom.has_value() &&
                           (!mc.rhs_atom || mc.lhs.atom->index == *mc.rhs_atom);
    const double frhs = ctx.loss(mc.rhs);
    const bool same_value = std::abs(mc.lhs.f_value - frhs) <= 1e-12 * std::max(1.0, frhs);
    return same_atom && same_value ? 1 : 0;
  });
  return pathwise_check(name, static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), n, seed,
                        "same attaining atom in every realisation");
}

/// g1 <= g2 implies I(g1) <=_f I(g2); a.e.-equal integrands give identical
/// results. Both pathwise on coupled realisations.
inline CheckReport check_monotonicity(const CheckContext& ctx, double alpha, std::size_t n) {
  const std::string name = "monotonicity";
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const auto ok = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    Rng rng(substream_seed(s, 1));
    const Integrand g2 = random_integrand(rng, 0.0, 4.0);
    const double c = rng.uniform(0.05, 1.0);
    const double a = rng.uniform(0.0, 4.0), b = rng.uniform(0.0, 4.0);
    const Integrand g1 = g2.scaled(c).restricted(Cell(std::min(a, b), std::max(a, b)));
    // Same function, different representation: restricting to a superset of the support.
    const Integrand g2_again = g2.restricted(Cell(-1.0, 5.0));
    SeriesRealization real(spec, Cell(0.0, 4.0), s);
    const auto i1 = series_integral(real, g1, g1.sup_bound());
    const auto i2 = series_integral(real, g2, g2.sup_bound());
    const auto i2b = series_integral(real, g2_again, g2_again.sup_bound());
    return leq_f(ctx.loss, i1.value, i2.value) && i2.value == i2b.value ? 1 : 0;
  });
  return pathwise_check(name, static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), n, seed,
                        "I(g1) <=_f I(g2) and a.e.-equal integrands agree, every realisation");
}

/// Empirical P(I(g) != I(g 1_cell)) against the closed-form mismatch probability.
inline CheckReport check_remainder(const CheckContext& ctx, std::string name, const Integrand& g, const Cell& cell,
                                   double alpha, std::size_t n) {
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const double p = mismatch_probability(g, cell, ctx.space, alpha);
  const Cell region = g.support().intersect(ctx.space.ground());
  const Integrand inner = g.restricted(cell);
  const auto hits = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    SeriesRealization real(spec, region, s);
    const auto full = series_integral(real, g, g.sup_bound());
    const auto part = series_integral(real, inner, inner.sup_bound());
    return full.value != part.value ? 1 : 0;
  });
  return frequency_check(std::move(name), static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1)), n, p, seed);
}

/// Kendall tau of (f(I(g1)), f(I(g2))) on coupled realisations. Disjoint
/// supports: pass iff |tau| < 3 SE. Overlapping supports: pass iff tau > 3 SE.
inline CheckReport check_independence(const CheckContext& ctx, std::string name, const Integrand& g1, const Integrand& g2,
                                      double alpha, std::size_t n) {
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const Cell region = g1.support().unite(g2.support()).intersect(ctx.space.ground());
  const auto pairs = detail::replicate<std::pair<double, double>>(n, ctx, seed, [&](std::uint64_t s) {
    SeriesRealization real(spec, region, s);
    return std::pair{series_integral(real, g1, g1.sup_bound()).f_value, series_integral(real, g2, g2.sup_bound()).f_value};
  });
  std::vector<double> x, y;
  for (const auto& [a, b] : pairs) {
    x.push_back(a);
    y.push_back(b);
  }
  const bool overlap = detail::supports_overlap(g1, g2, ctx.space);
  CheckReport r;
  r.name = std::move(name);
  r.n = n;
  r.statistic = stats::kendall_tau(x, y);
  r.reference = 0.0;
  r.std_error = stats::kendall_se(n);
  r.threshold = 3.0 * r.std_error;
  r.pass = overlap ? r.statistic > r.threshold : std::abs(r.statistic) < r.threshold;
  r.seed = seed;
  r.rule = overlap ? "overlapping supports: tau > 3 SE" : "disjoint supports: |tau| < 3 SE";
  return r;
}

enum class ConvergenceMode { forward, divergent };

struct ConvergenceTrace {
  /// P(|I(g_n) - I(g)| > tol) per sequence element.
  std::vector<double> exceed_prob;
  /// Median of |I(g_n) - I(g)| per sequence element.
  std::vector<double> median_distance;
  /// Integral of |g_n^alpha - g^alpha| dm per element.
  std::vector<double> lalpha_gaps;
};

/// Coupled distances |I(g_n) - I(g)| over n realisations.
inline ConvergenceTrace convergence_trace(const CheckContext& ctx, const Integrand& g, std::span<const Integrand> seq,
                                          double alpha, std::size_t n, double tol, std::uint64_t seed) {
  const auto spec = ctx.spec(alpha);
  std::vector<Interval> parts = g.support().intervals();
  for (const auto& h : seq) {
    const Cell hs = h.support();
    parts.insert(parts.end(), hs.intervals().begin(), hs.intervals().end());
  }
  const Cell region = Cell(std::move(parts)).intersect(ctx.space.ground());
  const auto dist = detail::replicate<std::vector<double>>(n, ctx, seed, [&](std::uint64_t s) {
    SeriesRealization real(spec, region, s);
    const Point target = series_integral(real, g, g.sup_bound()).value;
    std::vector<double> d;
    for (const auto& h : seq) {
      const Point v = series_integral(real, h, h.sup_bound()).value;
      double acc = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) acc += (v[i] - target[i]) * (v[i] - target[i]);
      d.push_back(std::sqrt(acc));
    }
    return d;
  });
  ConvergenceTrace t;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    std::vector<double> col;
    std::size_t exceed = 0;
    for (const auto& row : dist) {
      col.push_back(row[k]);
      if (row[k] > tol) ++exceed;
    }
    std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(col.size() / 2), col.end());
    t.median_distance.push_back(col[col.size() / 2]);
    t.exceed_prob.push_back(static_cast<double>(exceed) / static_cast<double>(n));
    t.lalpha_gaps.push_back(lalpha_gap(seq[k], g, ctx.space, alpha));
  }
  return t;
}

/// I(g_n) -> I(g) in probability iff the L^alpha gap vanishes.
///  forward:   pass iff P(|I(g_n) - I(g)| > 0.05) < 0.05 at the last n;
///  divergent: pass iff that probability exceeds 0.5 for every n.
inline CheckReport check_convergence_theorem(const CheckContext& ctx, std::string name, const Integrand& g,
                                             std::span<const Integrand> seq, ConvergenceMode mode, double alpha,
                                             std::size_t n) {
  if (seq.empty()) throw usage_error("check_convergence_theorem: empty sequence");
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const auto trace = convergence_trace(ctx, g, seq, alpha, n, 0.05, seed);
  CheckReport r;
  r.name = std::move(name);
  r.n = n;
  r.seed = seed;
  if (mode == ConvergenceMode::forward) {
    r.statistic = trace.exceed_prob.back();
    r.reference = trace.lalpha_gaps.back();
    r.threshold = 0.05;
    r.pass = r.statistic < r.threshold;
    r.rule = "P(|I(g_n)-I(g)|>0.05) < 0.05 at last n (reference = L^alpha gap)";
  } else {
    r.statistic = *std::min_element(trace.exceed_prob.begin(), trace.exceed_prob.end());
    r.reference = *std::min_element(trace.lalpha_gaps.begin(), trace.lalpha_gaps.end());
    r.threshold = 0.5;
    r.pass = r.statistic > r.threshold;
    r.rule = "min_n P(|I(g_n)-I(g)|>0.05) > 0.5 (reference = min L^alpha gap)";
  }
  return r;
}

/// d = 1, f = |.|, kappa = point mass at 1: results are nonnegative scalars
/// and the implicit max-linearity is the ordinary one.
inline CheckReport check_classical_recovery(const CheckContext& ctx, double alpha, std::size_t n) {
  const std::string name = "classical_recovery";
  CheckContext classical = ctx;
  classical.loss = LossFunction::euclidean(1);
  classical.kappa = AngularMeasure::dirac(classical.loss, {1.0});
  const auto spec = classical.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const auto ok = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    Rng rng(substream_seed(s, 1));
    const Integrand g1 = random_integrand(rng, 0.0, 4.0);
    const Integrand g2 = random_integrand(rng, 0.0, 4.0);
    const double a = rng.uniform(0.0, 2.0), b = rng.uniform(0.0, 2.0);
    SeriesRealization real(spec, Cell(0.0, 4.0), s);
    const auto mc = max_combine(real, a, g1, b, g2);
    const double x1 = a * mc.first.value[0];
    const double x2 = b * mc.second.value[0];
    const double lhs = mc.lhs.value[0];
    const bool nonneg = lhs >= 0.0 && mc.first.value[0] >= 0.0 && mc.second.value[0] >= 0.0;
    const double ordinary = std::max(x1, x2);
    return nonneg && std::abs(lhs - ordinary) <= 1e-12 * std::max(1.0, ordinary) ? 1 : 0;
  });
  return pathwise_check(name, static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), n, seed,
                        "nonnegative and I(a g1 v b g2) = max(a I(g1), b I(g2)) every realisation");
}

/// M(A u B) = M(A) v_f M(B) exactly for disjoint A, B on the series backend.
inline CheckReport check_rm2(const CheckContext& ctx, double alpha, std::size_t n) {
  const std::string name = "sup_measure_union";
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const auto ok = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    Rng rng(substream_seed(s, 1));
    std::vector<double> cuts;
    for (int i = 0; i < 4; ++i) cuts.push_back(rng.uniform(0.0, 4.0));
    std::sort(cuts.begin(), cuts.end());
    const Cell a(cuts[0], cuts[1]), b(cuts[2], cuts[3]);
    SeriesRealization real(spec, Cell(0.0, 4.0), s);
    const Point ma = series_measure(real, a);
    const Point mb = series_measure(real, b);
    const Point mab = series_measure(real, a.unite(b));
    return mab == vf_max(ctx.loss, ma, mb) ? 1 : 0;
  });
  return pathwise_check(name, static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), n, seed,
                        "M(A u B) == M(A) v_f M(B) bitwise");
}

/// Cell backend: f-values of M on two disjoint cells are independent
/// (distance covariance of ranks, conservative 1% test).
inline CheckReport check_rm1(const CheckContext& ctx, double alpha, std::size_t n) {
  const std::string name = "sup_measure_independence";
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const Partition part({Cell(0.0, 1.0), Cell(1.0, 3.0)});
  const auto pairs = detail::replicate<std::pair<double, double>>(n, ctx, seed, [&](std::uint64_t s) {
    const auto real = realize_cells(spec, part, s);
    return std::pair{ctx.loss(real.values[0]), ctx.loss(real.values[1])};
  });
  std::vector<double> x, y;
  for (const auto& [a, b] : pairs) {
    x.push_back(a);
    y.push_back(b);
  }
  const auto dc = stats::distance_covariance(stats::ranks(x), stats::ranks(y));
  return {name, n, dc.statistic, dc.dcor, NAN, dc.critical, dc.independent(), seed,
          "n dCov^2/S2 of ranks < 6.635 (reference = dCor)"};
}

/// Cumulative process X(t) = M([0, t)): f(X(t)) ~ Phi_alpha(t^(1/alpha)).
inline CheckReport check_process_marginal(const CheckContext& ctx, double t, double alpha, std::size_t n) {
  const std::string name = "process_marginal_t" + csv::number(t);
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  const std::vector<Integrand> kernels{Integrand::indicator(Cell(0.0, 0.5 * t)), Integrand::indicator(Cell(0.0, t))};
  const auto fv = detail::replicate<double>(n, ctx, seed, [&](std::uint64_t s) {
    return simulate_process(spec, kernels, s).values[1].f_value;
  });
  const FrechetLaw ref(alpha, ctx.reference_scale_factor * std::pow(ctx.space.measure(Cell(0.0, t)), 1.0 / alpha));
  auto r = ks_check(name, fv, [ref](double x) { return frechet_cdf(ref, x); }, seed);
  r.reference = ref.sigma;
  r.rule = "KS vs Phi_alpha(m([0,t))^(1/alpha)) at 1%";
  return r;
}

/// s < t implies X(s) <=_f X(t) along every cumulative path.
inline CheckReport check_process_monotone(const CheckContext& ctx, double alpha, std::size_t n) {
  const std::string name = "process_monotone";
  const auto spec = ctx.spec(alpha);
  const std::uint64_t seed = check_seed(ctx.seed, name);
  std::vector<Integrand> kernels;
  for (int j = 1; j <= 8; ++j) kernels.push_back(Integrand::indicator(Cell(0.0, 0.5 * j)));
  const auto ok = detail::replicate<char>(n, ctx, seed, [&](std::uint64_t s) -> char {
    const auto path = simulate_process(spec, kernels, s);
    for (std::size_t j = 1; j < path.values.size(); ++j)
      if (!leq_f(ctx.loss, path.values[j - 1].value, path.values[j].value)) return 0;
    return 1;
  });
  return pathwise_check(name, static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1)), n, seed,
                        "X(s) <=_f X(t) for s < t on every path");
}

struct SuiteOptions {
  CheckContext context;
  /// alpha for the checks whose setting does not pin it.
  double alpha = 1.5;
  /// Multiplies every default sample size.
  double n_scale = 1.0;
};

/// The full verification suite in a fixed order.
inline std::vector<CheckReport> run_suite(const SuiteOptions& opt) {
  const auto& ctx = opt.context;
  auto size = [&](std::size_t n) {
    return std::max<std::size_t>(100, static_cast<std::size_t>(std::llround(static_cast<double>(n) * opt.n_scale)));
  };
  std::vector<CheckReport> out;
  const Integrand exp_decay = Integrand::exp_decay(1.0, Cell(0.0, 20.0));

  out.push_back(check_marginal_law(ctx, "marginal_law_exp_decay", exp_decay, 2.0, size(20000)));
  CheckContext angular = ctx;
  if (!angular.kappa.is_discrete()) angular.kappa = CheckContext::default_kappa(ctx.loss);
  out.push_back(check_angular_law(angular, "angular_law_exp_decay", exp_decay, 2.0, size(20000)));

  const SimpleFunction three_cells({{Cell(0.0, 1.0), 2.0}, {Cell(1.0, 3.0), 1.0}, {Cell(3.0, 4.0), 0.5}});
  for (auto& r : check_backend_equivalence(angular, three_cells, opt.alpha, size(20000))) out.push_back(std::move(r));

  const std::vector<double> five(5, 1.0);
  out.push_back(check_gap_lemma(ctx, "gap_lemma_k5", five, 1.0, 0.5, size(100000)));
  out.push_back(check_sandwich(ctx, "sandwich_k2", 1.0, 1.0, 1.0, 1.0, size(100000)));

  out.push_back(check_max_linearity(ctx, opt.alpha, size(1000)));
  out.push_back(check_monotonicity(ctx, opt.alpha, size(1000)));

  out.push_back(check_remainder(ctx, "remainder", Integrand::indicator(Cell(0.0, 4.0)), Cell(0.0, 3.0), 1.0, size(100000)));

  out.push_back(check_independence(ctx, "independence_disjoint", Integrand::indicator(Cell(0.0, 1.0)),
                                   Integrand::indicator(Cell(1.0, 2.0)), opt.alpha, size(20000)));
  out.push_back(check_independence(ctx, "dependence_overlap", Integrand::indicator(Cell(0.0, 2.0)),
                                   Integrand::indicator(Cell(1.0, 3.0)), opt.alpha, size(20000)));

  std::vector<Integrand> dyadic;
  for (int lvl = 2; lvl <= 8; ++lvl) dyadic.push_back(Integrand::simple(monotone_approximation(exp_decay, lvl)));
  out.push_back(check_convergence_theorem(ctx, "convergence_dyadic", exp_decay, dyadic, ConvergenceMode::forward, 2.0, size(1000)));
  std::vector<Integrand> translates;
  for (int k = 1; k <= 8; ++k) translates.push_back(Integrand::indicator(Cell(k, k + 1.0)));
  out.push_back(check_convergence_theorem(ctx, "convergence_translates", Integrand::indicator(Cell(0.0, 1.0)), translates,
                                          ConvergenceMode::divergent, 1.0, size(1000)));

  out.push_back(check_classical_recovery(ctx, opt.alpha, size(1000)));
  out.push_back(check_rm2(ctx, opt.alpha, size(1000)));
  out.push_back(check_rm1(ctx, opt.alpha, size(10000)));
  out.push_back(check_process_marginal(ctx, 1.0, opt.alpha, size(20000)));
  out.push_back(check_process_marginal(ctx, 2.0, opt.alpha, size(20000)));
  out.push_back(check_process_monotone(ctx, opt.alpha, size(1000)));
  return out;
}

}  // namespace iext
