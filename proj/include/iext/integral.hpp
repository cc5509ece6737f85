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

// The f-implicit extremal integral I(g) for simple and general integrands,
// its max-linear combinations, and coupled process paths X(t) = I(g_t).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "iext/algebra.hpp"
#include "iext/errors.hpp"
#include "iext/integral_result.hpp"
#include "iext/measure.hpp"
#include "iext/supmeasure.hpp"

namespace iext {

struct IntegrationControls {
  double epsilon_trunc = 1e-4;
  int level = 8;
  Backend backend = Backend::series;
  std::size_t max_atoms = SeriesRealization::kDefaultMaxAtoms;
};

/// I(g) = v_f over cells of c_j M(A_j). g must be constant on every cell of
/// the realised partition and supported inside it.
inline IntegralResult integrate_simple(const CellRealization& real, const SimpleFunction& g) {
  if (!g.support().subset_of(real.partition.support()))
    throw usage_error("integrate_simple: integrand support is not covered by the realised partition");
  std::vector<double> coeffs;
  try {
    coeffs = represent_on(real.partition, g);
  } catch (const usage_error&) {
    throw usage_error("integrate_simple: integrand cells do not refine into the realised partition");
  }
  const auto& f = real.spec->loss;
  IntegralResult out;
  out.backend = Backend::cells;
  out.atoms_used = coeffs.size();
  if (coeffs.empty()) {
    out.value.assign(f.dimension(), 0.0);
    return out;
  }
  std::vector<Point> terms;
  terms.reserve(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) terms.push_back(scaled(real.values[j], coeffs[j]));
  const auto [value, j0] = vf_max(f, terms);
  out.value = value;
  out.f_value = f(out.value);
  out.atom = AttainingAtom{j0, real.partition.cells()[j0].lower(), f(real.values[j0])};
  return out;
}

inline IntegralResult integrate_simple(SeriesRealization& real, const SimpleFunction& g) {
  return series_integral(real, Integrand::simple(g), g.max_coeff());
}

/// I(g) on an existing series realisation. Mass of g outside the region is
/// dropped and its mismatch probability reported.
inline IntegralResult integrate(SeriesRealization& real, const Integrand& g) {
  const auto& spec = real.spec();
  const Cell outside = g.support().intersect(spec.space.ground()).subtract(real.region());
  if (outside.empty()) return series_integral(real, g, g.sup_bound());
  const double mismatch = mismatch_probability(g, real.region(), spec.space, spec.alpha);
  const Integrand inside = g.restricted(real.region());
  IntegralResult r = series_integral(real, inside, inside.sup_bound());
  r.mismatch_prob = mismatch;
  return r;
}

/// Region on which a series realisation represents g up to epsilon:
/// the support itself when it has finite measure, else the exhausting cell.
inline Cell integration_region(const SupMeasureSpec& spec, const Integrand& g, double epsilon) {
  const Cell support = g.support().intersect(spec.space.ground());
  if (std::isfinite(spec.space.measure(support))) return support;
  return exhausting_cell(g, spec.space, spec.alpha, epsilon);
}

/// Everything about I(g) that does not depend on the seed: the norm, the
/// realised region and the truncation diagnostics. Build once, draw many.
struct IntegralPlan {
  SpecPtr spec;
  Integrand g;
  IntegrationControls ctl;
  double norm_power = 0.0;
  /// series: region of the realisation; g restricted to it is what gets integrated.
  Cell region;
  Integrand inside;
  /// cells: the level-n approximation.
  std::optional<SimpleFunction> approximation;
  double mismatch_prob = 0.0;
  std::optional<double> lalpha_gap;
};

/// Throws integrability_error when ||g||_alpha is infinite.
inline IntegralPlan plan_integral(const SpecPtr& spec, const Integrand& g, const IntegrationControls& ctl = {}) {
  IntegralPlan p{spec, g, ctl, lalpha_power(g, spec->space, spec->alpha), Cell(), g, std::nullopt, 0.0, std::nullopt};
  if (p.norm_power == 0.0) return p;
  if (ctl.backend == Backend::series) {
    p.region = integration_region(*spec, g, ctl.epsilon_trunc);
    const Cell outside = g.support().intersect(spec->space.ground()).subtract(p.region);
    if (!outside.empty()) {
      p.mismatch_prob = mismatch_probability(g, p.region, spec->space, spec->alpha);
      p.inside = g.restricted(p.region);
    }
    return p;
  }
  p.approximation = monotone_approximation(g, ctl.level);
  p.lalpha_gap = lalpha_gap(Integrand::simple(*p.approximation), g, spec->space, spec->alpha);
  p.mismatch_prob = mismatch_probability(g, exhausting_window(g.support(), ctl.level), spec->space, spec->alpha);
  return p;
}

/// Fresh draw of I(g) from `seed`.
///  * series: exact draw on the epsilon_trunc exhausting cell;
///  * cells:  I(g_n) for the level-n monotone approximation, with the
///            L^alpha gap of g_n against g attached.
inline IntegralResult integrate(const IntegralPlan& p, std::uint64_t seed) {
  IntegralResult r;
  r.backend = p.ctl.backend;
  if (p.norm_power == 0.0) {
    r.value.assign(p.spec->loss.dimension(), 0.0);
    r.atoms_used = p.ctl.backend == Backend::series ? 1 : 0;
    return r;
  }
  if (p.ctl.backend == Backend::series) {
    SeriesRealization real(p.spec, p.region, seed, p.ctl.max_atoms);
    r = series_integral(real, p.inside, p.inside.sup_bound());
  } else if (p.approximation->pieces().empty()) {
    r.value.assign(p.spec->loss.dimension(), 0.0);
  } else {
    r = integrate_simple(realize_cells(p.spec, p.approximation->partition(), seed), *p.approximation);
  }
  r.backend = p.ctl.backend;
  r.mismatch_prob = p.mismatch_prob;
  r.lalpha_gap = p.lalpha_gap;
  return r;
}

inline IntegralResult integrate(const SpecPtr& spec, std::uint64_t seed, const Integrand& g, const IntegrationControls& ctl = {}) {
  return integrate(plan_integral(spec, g, ctl), seed);
}

struct MaxCombination {
  /// I(a g1 v b g2), integrated directly.
  IntegralResult lhs;
  /// a I(g1) v_f b I(g2).
  Point rhs;
  /// Attaining atoms of I(g1) and I(g2), and which side rhs took (0 or 1).
  IntegralResult first;
  IntegralResult second;
  std::size_t rhs_side = 0;
  /// Atom index behind rhs, if any.
  std::optional<std::size_t> rhs_atom;
};

/// Both sides of I(a g1 v b g2) = a I(g1) v_f b I(g2) on one realisation.
/// Scalar multiples are applied to the results, not re-integrated.
inline MaxCombination max_combine(SeriesRealization& real, double a, const Integrand& g1, double b, const Integrand& g2) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw usage_error("max_combine: coefficients must be nonnegative");
  const auto& f = real.spec().loss;
  MaxCombination out;
  const Integrand combined = pointwise_max(g1.scaled(a), g2.scaled(b));
  out.lhs = series_integral(real, combined, std::max(a * g1.sup_bound(), b * g2.sup_bound()));
  out.first = series_integral(real, g1, g1.sup_bound());
  out.second = series_integral(real, g2, g2.sup_bound());
  const Point left = scaled(out.first.value, a);
  const Point right = scaled(out.second.value, b);
  out.rhs_side = f(right) > f(left) ? 1 : 0;
  out.rhs = out.rhs_side == 0 ? left : right;
  const auto& src = out.rhs_side == 0 ? out.first : out.second;
  const double coef = out.rhs_side == 0 ? a : b;
  if (src.atom && coef > 0.0) out.rhs_atom = src.atom->index;
  return out;
}

/// Homogeneity by scaling: I(a g) = a I(g).
inline IntegralResult scale_result(IntegralResult r, double a, const LossFunction& f) {
  for (auto& v : r.value) v *= a;
  r.f_value = f(r.value);
  if (a == 0.0) r.atom.reset();
  return r;
}

struct ProcessPath {
  Cell region;
  std::vector<IntegralResult> values;
};

/// X(t_j) = I(g_{t_j}) for all kernels on one shared series realisation.
inline ProcessPath simulate_process(const SpecPtr& spec, std::span<const Integrand> kernels, std::uint64_t seed,
                                    const IntegrationControls& ctl = {}) {
  if (kernels.empty()) throw usage_error("simulate_process: no kernels");
  std::vector<Interval> parts;
  for (const auto& g : kernels) {
    if (g.is_zero()) continue;
    if (!(lalpha_power(g, spec->space, spec->alpha) > 0.0)) continue;
    const Cell r = integration_region(*spec, g, ctl.epsilon_trunc);
    parts.insert(parts.end(), r.intervals().begin(), r.intervals().end());
  }
  ProcessPath path{Cell(std::move(parts)), {}};
  if (path.region.empty()) {
    IntegralResult zero;
    zero.value.assign(spec->loss.dimension(), 0.0);
    path.values.assign(kernels.size(), zero);
    return path;
  }
  SeriesRealization real(spec, path.region, seed, ctl.max_atoms);
  for (const auto& g : kernels) path.values.push_back(integrate(real, g));
  return path;
}

}  // namespace iext
