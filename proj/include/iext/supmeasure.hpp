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

// Realisations of the f-implicit alpha-Frechet sup-measure M with control
// measure m and angular part kappa.
//
// Two backends:
//  * cells:  independent values M(A_j) = m(A_j)^(1/alpha) Z_j Theta_j on a
//            fixed partition;
//  * series: a transformed Poisson series (s_k, u_k, Theta_k) on a region A_0
//            with u_k = (Gamma_k / m(A_0))^(-1/alpha). Every integrand is
//            evaluated against the same atoms, so M(A) = I(1_A) is one coupled
//            random set function.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "iext/algebra.hpp"
#include "iext/errors.hpp"
#include "iext/integral_result.hpp"
#include "iext/laws.hpp"
#include "iext/measure.hpp"
#include "iext/rng.hpp"

namespace iext {

struct SupMeasureSpec {
  LossFunction loss;
  double alpha;
  AngularMeasure kappa;
  MeasureSpace space;

  SupMeasureSpec(LossFunction f, double a, AngularMeasure k, MeasureSpace m)
      : loss(std::move(f)), alpha(a), kappa(std::move(k)), space(std::move(m)) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw usage_error("SupMeasureSpec: alpha must be positive");
    const auto& kl = kappa.loss();
    if (kl.dimension() != loss.dimension() || kl.kind() != loss.kind() || kl.params() != loss.params())
      throw usage_error("SupMeasureSpec: angular measure is defined for a different loss");
  }
};

using SpecPtr = std::shared_ptr<const SupMeasureSpec>;

inline SpecPtr share(SupMeasureSpec spec) { return std::make_shared<const SupMeasureSpec>(std::move(spec)); }

/// Independent cell values on a partition.
struct CellRealization {
  Partition partition;
  std::vector<Point> values;
  SpecPtr spec;
  std::uint64_t seed = 0;
};

inline CellRealization realize_cells(SpecPtr spec, Partition partition, std::uint64_t seed) {
  Rng rng(seed);
  CellRealization r{std::move(partition), {}, std::move(spec), seed};
  r.values.reserve(r.partition.size());
  for (const auto& cell : r.partition.cells()) {
    const double mass = r.spec->space.measure(cell);
    if (!std::isfinite(mass)) throw usage_error("realize_cells: cell of infinite measure");
    const ImplicitFrechetLaw law{r.spec->alpha, std::pow(mass, 1.0 / r.spec->alpha), r.spec->kappa};
    r.values.push_back(implicit_sample(law, rng));
  }
  return r;
}

struct SeriesAtom {
  double location;
  double magnitude;
  Point mark;
  /// Gamma_k = m(A_0) * magnitude^-alpha, the running sum of unit exponentials.
  double gamma;
};

/// Lazily extended point series on a region of finite measure. Atoms are
/// generated in order from a single stream, so the k-th atom depends only on
/// (spec, region, seed) and not on when it was first requested.
/// Not safe for concurrent use; give each thread its own realisation.
class SeriesRealization {
 public:
  static constexpr std::size_t kDefaultMaxAtoms = 10'000'000;

  SeriesRealization(SpecPtr spec, const Cell& region, std::uint64_t seed, std::size_t max_atoms = kDefaultMaxAtoms)
      : spec_(std::move(spec)), sampler_(spec_->space, region), rng_(seed), seed_(seed), max_atoms_(max_atoms) {}

  const Cell& region() const noexcept { return sampler_.region(); }
  double region_measure() const noexcept { return sampler_.total(); }
  const SupMeasureSpec& spec() const noexcept { return *spec_; }
  const SpecPtr& spec_ptr() const noexcept { return spec_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t generated() const noexcept { return atoms_.size(); }
  std::size_t max_atoms() const noexcept { return max_atoms_; }

  /// Atom k (0-based), generating atoms up to k if needed.
  const SeriesAtom& atom(std::size_t k) {
    if (k >= max_atoms_) throw truncation_error("series realisation: atom cap exceeded (zero norm on the region or invalid sup bound?)");
    while (atoms_.size() <= k) extend();
    return atoms_[k];
  }

 private:
  void extend() {
    gamma_ += rng_.exponential();
    const double mu = sampler_.total();
    SeriesAtom a;
    a.gamma = gamma_;
    a.magnitude = std::pow(gamma_ / mu, -1.0 / spec_->alpha);
    a.location = sampler_(rng_);
    a.mark = spec_->kappa.sample(rng_);
    atoms_.push_back(std::move(a));
  }

  SpecPtr spec_;
  RegionSampler sampler_;
  Rng rng_;
  std::uint64_t seed_;
  std::size_t max_atoms_;
  double gamma_ = 0.0;
  std::vector<SeriesAtom> atoms_;
};

/// I(g) on a series realisation: the atom maximising g(s_k) u_k, returned as
/// g(s_k) u_k Theta_k. Atoms are consumed until u_{k+1} * sup_bound < best,
/// after which no later atom can win, so the draw is exact.
inline IntegralResult series_integral(SeriesRealization& real, const Integrand& g, double sup_bound) {
  const auto& spec = real.spec();
  const std::size_t dim = spec.loss.dimension();
  IntegralResult out;
  out.backend = Backend::series;
  out.value.assign(dim, 0.0);
  if (!(sup_bound >= 0.0)) throw usage_error("series_integral: sup bound must be nonnegative");
  if (!g.support().intersect(spec.space.ground()).subset_of(real.region()))
    throw usage_error("series_integral: integrand support exceeds the realised region");
  if (g.is_zero() || sup_bound == 0.0) {
    (void)real.atom(0);
    out.atoms_used = 1;
    return out;
  }
  double best = 0.0;
  std::size_t best_k = 0;
  bool found = false;
  std::size_t k = 0;
  for (;; ++k) {
    const SeriesAtom& a = real.atom(k);
    const double reach = a.magnitude * sup_bound;
    if (reach < best || reach < 1e-300) break;
    const double v = g(a.location) * a.magnitude;
    if (v > best) {
      best = v;
      best_k = k;
      found = true;
    }
  }
  out.atoms_used = k + 1;
  if (!found) return out;
  const SeriesAtom& a = real.atom(best_k);
  const double coeff = g(a.location) * a.magnitude;
  for (std::size_t i = 0; i < dim; ++i) out.value[i] = coeff * a.mark[i];
  out.f_value = spec.loss(out.value);
  out.atom = AttainingAtom{best_k, a.location, a.magnitude};
  return out;
}

/// M(cell) = I(1_cell) on the series realisation.
inline Point series_measure(SeriesRealization& real, const Cell& cell) {
  const Cell c = cell.intersect(real.spec().space.ground());
  if (!c.subset_of(real.region())) throw usage_error("series_measure: cell exceeds the realised region");
  if (c.empty() || real.spec().space.measure(c) == 0.0) return Point(real.spec().loss.dimension(), 0.0);
  return series_integral(real, Integrand::indicator(c), 1.0).value;
}

}  // namespace iext
