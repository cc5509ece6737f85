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

// Control measures on the real line, cells (finite unions of half-open
// intervals), partitions, simple functions, integrands and L^alpha
// functionals.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iext/errors.hpp"
#include "iext/quadrature.hpp"
#include "iext/rng.hpp"

namespace iext {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Half-open interval [lo, hi). Either end may be infinite.
struct Interval {
  double lo;
  double hi;

  bool empty() const { return !(hi > lo); }
  bool contains(double s) const { return s >= lo && s < hi; }
  double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint half-open intervals, kept sorted with touching
/// pieces merged, so equal sets compare equal.
class Cell {
 public:
  Cell() = default;
  Cell(double lo, double hi) : Cell(std::vector<Interval>{{lo, hi}}) {}
  explicit Cell(std::vector<Interval> parts) {
    for (const auto& p : parts) {
      if (std::isnan(p.lo) || std::isnan(p.hi)) throw usage_error("Cell: NaN endpoint");
    }
    std::erase_if(parts, [](const Interval& p) { return p.empty(); });
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& p : parts) {
      if (!parts_.empty() && p.lo <= parts_.back().hi) {
        parts_.back().hi = std::max(parts_.back().hi, p.hi);
      } else {
        parts_.push_back(p);
      }
    }
  }

  static Cell everything() { return Cell(-kInf, kInf); }

  const std::vector<Interval>& intervals() const& noexcept { return parts_; }
  std::vector<Interval> intervals() && { return std::move(parts_); }
  bool empty() const noexcept { return parts_.empty(); }
  double lower() const { return parts_.empty() ? kInf : parts_.front().lo; }
  double upper() const { return parts_.empty() ? -kInf : parts_.back().hi; }
  bool bounded() const { return !parts_.empty() && std::isfinite(lower()) && std::isfinite(upper()); }

  bool contains(double s) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), s, [](double v, const Interval& p) { return v < p.lo; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(s);
  }

  /// Lebesgue length.
  double length() const {
    double t = 0.0;
    for (const auto& p : parts_) t += p.length();
    return t;
  }

  Cell unite(const Cell& other) const {
    std::vector<Interval> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return Cell(std::move(all));
  }

  Cell intersect(const Cell& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
      const Interval& a = parts_[i];
      const Interval& b = other.parts_[j];
      const Interval c{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
      if (!c.empty()) out.push_back(c);
      if (a.hi < b.hi) ++i; else ++j;
    }
    return Cell(std::move(out));
  }

  Cell subtract(const Cell& other) const {
    std::vector<Interval> out;
    for (const auto& a : parts_) {
      double cursor = a.lo;
      for (const auto& b : other.parts_) {
        if (b.hi <= cursor) continue;
        if (b.lo >= a.hi) break;
        if (b.lo > cursor) out.push_back({cursor, b.lo});
        cursor = std::max(cursor, b.hi);
        if (cursor >= a.hi) break;
      }
      if (cursor < a.hi) out.push_back({cursor, a.hi});
    }
    return Cell(std::move(out));
  }

  bool subset_of(const Cell& other) const { return subtract(other).empty(); }
  bool disjoint_from(const Cell& other) const { return intersect(other).empty(); }

  Cell translated(double shift) const {
    std::vector<Interval> out = parts_;
    for (auto& p : out) {
      p.lo += shift;
      p.hi += shift;
    }
    return Cell(std::move(out));
  }

  friend bool operator==(const Cell&, const Cell&) = default;

 private:
  std::vector<Interval> parts_;
};

/// Density of the control measure m with respect to Lebesgue measure.
class Density {
 public:
  enum class Kind { lebesgue, exponential, custom };

  static Density lebesgue() { return Density(Kind::lebesgue); }
  /// rate * exp(-rate * s).
  static Density exponential(double rate) {
    if (!(rate > 0.0)) throw usage_error("exponential density: rate must be positive");
    Density d(Kind::exponential);
    d.rate_ = rate;
    return d;
  }
  static Density custom(std::function<double(double)> fn) {
    Density d(Kind::custom);
    d.fn_ = std::move(fn);
    return d;
  }

  Kind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }

  double operator()(double s) const {
    switch (kind_) {
      case Kind::lebesgue: return 1.0;
      case Kind::exponential: return rate_ * std::exp(-rate_ * s);
      case Kind::custom: return fn_(s);
    }
    return 0.0;
  }

  /// m([lo, hi)).
  double mass(const Interval& iv, const quad::Options& opt) const {
    if (iv.empty()) return 0.0;
    switch (kind_) {
      case Kind::lebesgue: return iv.length();
      case Kind::exponential: return std::exp(-rate_ * iv.lo) - std::exp(-rate_ * iv.hi);
      case Kind::custom: return quad::integrate(fn_, iv.lo, iv.hi, opt);
    }
    return 0.0;
  }

  /// Point x in [lo, hi) with m([lo, x)) = p * m([lo, hi)).
  double invert(const Interval& iv, double p, const quad::Options& opt) const {
    switch (kind_) {
      case Kind::lebesgue: return iv.lo + p * iv.length();
      case Kind::exponential: {
        const double a = std::exp(-rate_ * iv.lo);
        const double b = std::exp(-rate_ * iv.hi);
        return -std::log(a - p * (a - b)) / rate_;
      }
      case Kind::custom: {
        const double target = p * mass(iv, opt);
        double lo = iv.lo, hi = iv.hi;
        for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mass({iv.lo, mid}, opt) < target) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
      }
    }
    return iv.lo;
  }

 private:
  explicit Density(Kind k) : kind_(k) {}
  Kind kind_;
  double rate_ = 1.0;
  std::function<double(double)> fn_;
};

/// (E, m): ground set E (a cell) with control measure m = density * Lebesgue.
class MeasureSpace {
 public:
  MeasureSpace(Cell ground, Density density, quad::Options opt = {})
      : ground_(std::move(ground)), density_(std::move(density)), opt_(opt) {}

  static MeasureSpace lebesgue(Cell ground = Cell::everything()) { return {std::move(ground), Density::lebesgue()}; }

  const Cell& ground() const noexcept { return ground_; }
  const Density& density() const noexcept { return density_; }
  const quad::Options& options() const noexcept { return opt_; }

  /// m(A intersected with E).
  double measure(const Cell& a) const {
    double t = 0.0;
    for (const auto& iv : a.intersect(ground_).intervals()) t += density_.mass(iv, opt_);
    return t;
  }

  /// Integral of h over (region intersected with E) against m; each interval
  /// is further split at `breaks`.
  template <class F>
  double integrate(F&& h, const Cell& region, std::span<const double> breaks = {}) const {
    double total = 0.0;
    auto weighted = [&](double s) {
      const double v = h(s);
      return v == 0.0 ? 0.0 : v * density_(s);
    };
    for (const auto& iv : region.intersect(ground_).intervals()) {
      auto first = std::upper_bound(breaks.begin(), breaks.end(), iv.lo);
      double lo = iv.lo;
      for (auto it = first; it != breaks.end() && *it < iv.hi; ++it) {
        total += quad::integrate(weighted, lo, *it, opt_);
        lo = *it;
      }
      total += quad::integrate(weighted, lo, iv.hi, opt_);
    }
    return total;
  }

  /// Single draw from m restricted to `region`, normalised. Requires
  /// 0 < m(region) < inf. Use RegionSampler for repeated draws.
  double sample_location(const Cell& region, Rng& rng) const;

 private:
  Cell ground_;
  Density density_;
  quad::Options opt_;
};

/// Repeated draws from m restricted to a fixed region, normalised.
class RegionSampler {
 public:
  RegionSampler(const MeasureSpace& m, const Cell& region) : density_(m.density()), opt_(m.options()) {
    region_ = region.intersect(m.ground());
    for (const auto& iv : region_.intervals()) cumulative_.push_back(total_ += density_.mass(iv, opt_));
    if (!(total_ > 0.0) || !std::isfinite(total_)) throw usage_error("RegionSampler: region must have finite positive measure");
  }

  double total() const noexcept { return total_; }
  const Cell& region() const noexcept { return region_; }

  double operator()(Rng& rng) const {
    const double u = rng.uniform() * total_;
    std::size_t k = 0;
    while (k + 1 < cumulative_.size() && u > cumulative_[k]) ++k;
    const double before = k == 0 ? 0.0 : cumulative_[k - 1];
    const Interval& iv = region_.intervals()[k];
    const double p = std::clamp((u - before) / (cumulative_[k] - before), 0.0, 1.0);
    return std::clamp(density_.invert(iv, p, opt_), iv.lo, std::nextafter(iv.hi, iv.lo));
  }

 private:
  Density density_;
  quad::Options opt_;
  Cell region_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

inline double MeasureSpace::sample_location(const Cell& region, Rng& rng) const {
  return RegionSampler(*this, region)(rng);
}

/// Finite list of pairwise disjoint nonempty cells.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Cell> cells) {
    std::erase_if(cells, [](const Cell& c) { return c.empty(); });
    if (!pairwise_disjoint(cells)) throw usage_error("Partition: cells overlap");
    cells_ = std::move(cells);
  }

  static bool pairwise_disjoint(const std::vector<Cell>& cells) {
    std::vector<Interval> all;
    for (const auto& c : cells) all.insert(all.end(), c.intervals().begin(), c.intervals().end());
    std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < all.size(); ++i)
      if (all[i].lo < all[i - 1].hi) return false;
    return true;
  }

  const std::vector<Cell>& cells() const& noexcept { return cells_; }
  std::vector<Cell> cells() && { return std::move(cells_); }
  std::size_t size() const noexcept { return cells_.size(); }
  Cell support() const {
    std::vector<Interval> all;
    for (const auto& c : cells_) all.insert(all.end(), c.intervals().begin(), c.intervals().end());
    return Cell(std::move(all));
  }

  /// Index of the cell containing s, if any.
  std::optional<std::size_t> locate(double s) const {
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (cells_[i].contains(s)) return i;
    return std::nullopt;
  }

  /// True iff `this` refines `coarse` on the coarse support: every coarse
  /// cell is a union of cells of this partition.
  bool refines(const Partition& coarse) const {
    const Cell fine_support = support();
    for (const auto& c : coarse.cells_) {
      if (!c.subset_of(fine_support)) return false;
    }
    for (const auto& f : cells_) {
      int hits = 0;
      for (const auto& c : coarse.cells_) {
        if (f.disjoint_from(c)) continue;
        if (!f.subset_of(c)) return false;
        ++hits;
      }
      if (hits > 1) return false;
    }
    return true;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Cell> cells_;
};

namespace detail {

struct LabelledInterval {
  Interval iv;
  std::size_t label;
};

inline std::vector<LabelledInterval> flatten(const Partition& p) {
  std::vector<LabelledInterval> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (const auto& iv : p.cells()[i].intervals()) out.push_back({iv, i});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.iv.lo < b.iv.lo; });
  return out;
}

inline constexpr std::size_t kNoLabel = static_cast<std::size_t>(-1);

inline std::size_t label_at(const std::vector<LabelledInterval>& flat, double lo) {
  auto it = std::upper_bound(flat.begin(), flat.end(), lo, [](double v, const LabelledInterval& li) { return v < li.iv.lo; });
  if (it == flat.begin()) return kNoLabel;
  --it;
  return lo < it->iv.hi ? it->label : kNoLabel;
}

}  // namespace detail

/// Coarsest common refinement of two partitions over the union of their
/// supports. Each returned cell lies in at most one cell of `a` and of `b`;
/// parent[i] gives those indices (kNoLabel when outside).
struct RefinedPartition {
  Partition partition;
  std::vector<std::size_t> parent_a;
  std::vector<std::size_t> parent_b;
};

inline RefinedPartition refine(const Partition& a, const Partition& b) {
  const auto fa = detail::flatten(a);
  const auto fb = detail::flatten(b);
  std::vector<double> breaks;
  for (const auto& li : fa) breaks.insert(breaks.end(), {li.iv.lo, li.iv.hi});
  for (const auto& li : fb) breaks.insert(breaks.end(), {li.iv.lo, li.iv.hi});
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<std::vector<Interval>> pieces;
  RefinedPartition out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const std::size_t la = detail::label_at(fa, lo);
    const std::size_t lb = detail::label_at(fb, lo);
    if (la == detail::kNoLabel && lb == detail::kNoLabel) continue;
    auto [it, inserted] = index.try_emplace({la, lb}, pieces.size());
    if (inserted) {
      pieces.emplace_back();
      out.parent_a.push_back(la);
      out.parent_b.push_back(lb);
    }
    pieces[it->second].push_back({lo, breaks[k + 1]});
  }
  std::vector<Cell> cells;
  cells.reserve(pieces.size());
  for (auto& p : pieces) cells.emplace_back(std::move(p));
  out.partition = Partition(std::move(cells));
  return out;
}

/// g(s) = sum_j c_j 1_{A_j}(s) with disjoint cells A_j and c_j >= 0.
class SimpleFunction {
 public:
  struct Piece {
    Cell cell;
    double coeff;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  SimpleFunction() = default;
  explicit SimpleFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    std::erase_if(pieces_, [](const Piece& p) { return p.cell.empty(); });
    for (const auto& p : pieces_) {
      if (!(p.coeff >= 0.0) || !std::isfinite(p.coeff)) throw usage_error("SimpleFunction: coefficients must be finite and nonnegative");
    }
    std::vector<Cell> cells;
    for (const auto& p : pieces_) cells.push_back(p.cell);
    if (!Partition::pairwise_disjoint(cells)) throw usage_error("SimpleFunction: cells overlap");
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      for (const auto& iv : pieces_[i].cell.intervals()) lookup_.push_back({iv, i});
    std::sort(lookup_.begin(), lookup_.end(), [](const auto& a, const auto& b) { return a.iv.lo < b.iv.lo; });
  }

  static SimpleFunction indicator(const Cell& c, double coeff = 1.0) { return SimpleFunction({{c, coeff}}); }

  double operator()(double s) const {
    const std::size_t i = detail::label_at(lookup_, s);
    return i == detail::kNoLabel ? 0.0 : pieces_[i].coeff;
  }

  const std::vector<Piece>& pieces() const& noexcept { return pieces_; }
  std::vector<Piece> pieces() && { return std::move(pieces_); }
  /// Intervals of all pieces sorted by left end, labelled with the piece index.
  const std::vector<detail::LabelledInterval>& intervals_by_start() const noexcept { return lookup_; }
  Partition partition() const {
    std::vector<Cell> cells;
    for (const auto& p : pieces_) cells.push_back(p.cell);
    return Partition(std::move(cells));
  }
  Cell support() const {
    std::vector<Interval> all;
    for (const auto& p : pieces_)
      if (p.coeff > 0.0) all.insert(all.end(), p.cell.intervals().begin(), p.cell.intervals().end());
    return Cell(std::move(all));
  }
  double max_coeff() const {
    double m = 0.0;
    for (const auto& p : pieces_) m = std::max(m, p.coeff);
    return m;
  }
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (const auto& li : lookup_) b.insert(b.end(), {li.iv.lo, li.iv.hi});
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
  }

  SimpleFunction scaled(double a) const {
    auto p = pieces_;
    for (auto& x : p) x.coeff *= a;
    return SimpleFunction(std::move(p));
  }
  SimpleFunction restricted(const Cell& c) const {
    auto p = pieces_;
    for (auto& x : p) x.cell = x.cell.intersect(c);
    return SimpleFunction(std::move(p));
  }
  SimpleFunction translated(double shift) const {
    auto p = pieces_;
    for (auto& x : p) x.cell = x.cell.translated(shift);
    return SimpleFunction(std::move(p));
  }

 private:
  std::vector<Piece> pieces_;
  std::vector<detail::LabelledInterval> lookup_;
};

struct CommonRefinement {
  Partition partition;
  std::vector<double> coeffs1;
  std::vector<double> coeffs2;
};

/// Common partition of two simple functions with both coefficient lists.
/// Cells where a function is not represented carry coefficient 0.
inline CommonRefinement common_refinement(const SimpleFunction& g1, const SimpleFunction& g2) {
  auto r = refine(g1.partition(), g2.partition());
  CommonRefinement out{std::move(r.partition), {}, {}};
  for (std::size_t i = 0; i < out.partition.size(); ++i) {
    out.coeffs1.push_back(r.parent_a[i] == detail::kNoLabel ? 0.0 : g1.pieces()[r.parent_a[i]].coeff);
    out.coeffs2.push_back(r.parent_b[i] == detail::kNoLabel ? 0.0 : g2.pieces()[r.parent_b[i]].coeff);
  }
  return out;
}

/// Coefficients of g on the cells of p. Throws if g is not constant on some cell.
inline std::vector<double> represent_on(const Partition& p, const SimpleFunction& g) {
  const auto& flat = g.intervals_by_start();
  // Piece containing all of iv, kNoLabel if iv misses the support; throws if iv straddles.
  auto piece_of = [&](const Interval& iv) {
    auto it = std::upper_bound(flat.begin(), flat.end(), iv.lo, [](double v, const detail::LabelledInterval& li) { return v < li.iv.lo; });
    if (it != flat.begin() && iv.lo < std::prev(it)->iv.hi) {
      if (iv.hi > std::prev(it)->iv.hi) throw usage_error("represent_on: function is not constant on a partition cell");
      return std::prev(it)->label;
    }
    if (it != flat.end() && it->iv.lo < iv.hi) throw usage_error("represent_on: function is not constant on a partition cell");
    return detail::kNoLabel;
  };
  std::vector<double> coeffs;
  coeffs.reserve(p.size());
  for (const auto& cell : p.cells()) {
    const auto& ivs = cell.intervals();
    const std::size_t label = ivs.empty() ? detail::kNoLabel : piece_of(ivs.front());
    for (std::size_t k = 1; k < ivs.size(); ++k)
      if (piece_of(ivs[k]) != label) throw usage_error("represent_on: function is not constant on a partition cell");
    coeffs.push_back(label == detail::kNoLabel ? 0.0 : g.pieces()[label].coeff);
  }
  return coeffs;
}

struct ConsistentStep {
  Partition partition;
  /// coefficients[k] represents the k-th input function on `partition` (k <= step).
  std::vector<std::vector<double>> coefficients;
};

/// Nested partitions P_1 <= P_2 <= ... where P_n represents g_1, ..., g_n.
inline std::vector<ConsistentStep> consistent_sequence(std::span<const SimpleFunction> gs) {
  if (gs.empty()) throw usage_error("consistent_sequence: empty list");
  std::vector<ConsistentStep> out;
  Partition current = gs[0].partition();
  for (std::size_t n = 0; n < gs.size(); ++n) {
    if (n > 0) current = refine(current, gs[n].partition()).partition;
    ConsistentStep step{current, {}};
    for (std::size_t k = 0; k <= n; ++k) step.coefficients.push_back(represent_on(current, gs[k]));
    out.push_back(std::move(step));
  }
  return out;
}

/// A nonnegative integrand: either a simple function or a kernel with a
/// declared support and an upper bound on its values there.
class Integrand {
 public:
  using Eval = std::function<double(double)>;
  /// Lower bound on inf of g over [lo, hi); must not decrease when the
  /// interval shrinks and must tend to g(s) as the interval shrinks to s.
  using LowerBound = std::function<double(double, double)>;

  static Integrand simple(SimpleFunction g) {
    auto node = std::make_shared<Node>();
    node->name = "simple";
    node->support = g.support();
    node->sup = g.max_coeff();
    node->breaks = g.breakpoints();
    node->simple = std::move(g);
    const SimpleFunction* sf = &*node->simple;
    node->eval = [sf](double s) { return (*sf)(s); };
    node->lower = [sf](double lo, double hi) {
      double m = kInf;
      const Cell window(lo, hi);
      double covered = 0.0;
      for (const auto& p : sf->pieces()) {
        const double overlap = p.cell.intersect(window).length();
        if (overlap > 0.0) {
          m = std::min(m, p.coeff);
          covered += overlap;
        }
      }
      return covered < hi - lo ? 0.0 : m;
    };
    return Integrand(std::move(node));
  }

  static Integrand indicator(const Cell& support) { return simple(SimpleFunction::indicator(support)); }

  /// exp(-rate * s) on `support`.
  static Integrand exp_decay(double rate, Cell support) {
    if (!(rate >= 0.0)) throw usage_error("exp_decay: rate must be nonnegative");
    if (!std::isfinite(support.lower())) throw usage_error("exp_decay: support must be bounded below");
    const double sup = std::exp(-rate * support.lower());
    return kernel("exp_decay", std::move(support), sup, [rate](double s) { return std::exp(-rate * s); },
                  [rate](double, double hi) { return std::exp(-rate * hi); });
  }

  /// max(0, 1 - |s - center| / half_width) on [center - w, center + w).
  static Integrand triangle(double center, double half_width) {
    if (!(half_width > 0.0)) throw usage_error("triangle: half_width must be positive");
    auto f = [center, half_width](double s) { return std::max(0.0, 1.0 - std::abs(s - center) / half_width); };
    auto node = kernel_node("triangle", Cell(center - half_width, center + half_width), 1.0, f,
                            [f](double lo, double hi) { return std::min(f(lo), f(hi)); });
    node->breaks = {center - half_width, center, center + half_width};
    return Integrand(std::move(node));
  }

  /// s^-exponent on `support`, which must lie in (0, inf).
  static Integrand power(double exponent, Cell support) {
    if (!(exponent > 0.0)) throw usage_error("power: exponent must be positive");
    if (!(support.lower() > 0.0)) throw usage_error("power: support must be bounded away from 0");
    const double sup = std::pow(support.lower(), -exponent);
    return kernel("power", std::move(support), sup, [exponent](double s) { return std::pow(s, -exponent); },
                  [exponent](double, double hi) { return std::isinf(hi) ? 0.0 : std::pow(hi, -exponent); });
  }

  /// Arbitrary kernel. Without `lower` the integrand cannot be approximated
  /// by monotone_approximation.
  static Integrand custom(std::string name, Eval f, Cell support, double sup_bound, LowerBound lower = {},
                          std::vector<double> breaks = {}) {
    auto node = kernel_node(std::move(name), std::move(support), sup_bound, std::move(f), std::move(lower));
    node->breaks.insert(node->breaks.end(), breaks.begin(), breaks.end());
    normalise_breaks(node->breaks);
    return Integrand(std::move(node));
  }

  double operator()(double s) const { return node_->eval(s); }

  double lower_bound_on(double lo, double hi) const {
    if (!node_->lower) throw usage_error("integrand '" + node_->name + "' declares no lower bound");
    return node_->lower(lo, hi);
  }
  bool has_lower_bound() const { return static_cast<bool>(node_->lower); }

  const Cell& support() const noexcept { return node_->support; }
  double sup_bound() const noexcept { return node_->sup; }
  const std::vector<double>& breakpoints() const noexcept { return node_->breaks; }
  const SimpleFunction* simple_function() const noexcept { return node_->simple ? &*node_->simple : nullptr; }
  bool is_zero() const noexcept { return node_->sup == 0.0 || node_->support.empty(); }
  const std::string& name() const noexcept { return node_->name; }

  Integrand scaled(double a) const {
    if (!(a >= 0.0)) throw usage_error("Integrand::scaled: factor must be nonnegative");
    if (const auto* sf = simple_function()) return simple(sf->scaled(a));
    auto self = node_;
    return custom("scaled(" + node_->name + ")", [self, a](double s) { return a * self->eval(s); }, a > 0.0 ? node_->support : Cell{},
                  a * node_->sup,
                  node_->lower ? LowerBound([self, a](double lo, double hi) { return a * self->lower(lo, hi); }) : LowerBound{},
                  node_->breaks);
  }

  Integrand restricted(const Cell& c) const {
    if (const auto* sf = simple_function()) return simple(sf->restricted(c));
    auto self = node_;
    Cell support = node_->support.intersect(c);
    auto breaks = node_->breaks;
    for (const auto& iv : c.intervals()) breaks.insert(breaks.end(), {iv.lo, iv.hi});
    LowerBound lower;
    if (node_->lower) {
      lower = [self, support](double lo, double hi) {
        return Cell(lo, hi).subset_of(support) ? self->lower(lo, hi) : 0.0;
      };
    }
    return custom(node_->name, [self, c](double s) { return c.contains(s) ? self->eval(s) : 0.0; }, std::move(support),
                  node_->sup, std::move(lower), std::move(breaks));
  }

  /// s -> g(s - shift).
  Integrand translated(double shift) const {
    if (const auto* sf = simple_function()) return simple(sf->translated(shift));
    auto self = node_;
    auto breaks = node_->breaks;
    for (auto& b : breaks) b += shift;
    LowerBound lower;
    if (node_->lower) lower = [self, shift](double lo, double hi) { return self->lower(lo - shift, hi - shift); };
    return custom(node_->name, [self, shift](double s) { return self->eval(s - shift); }, node_->support.translated(shift),
                  node_->sup, std::move(lower), std::move(breaks));
  }

  /// s -> max(g1(s), g2(s)).
  friend Integrand pointwise_max(const Integrand& g1, const Integrand& g2) {
    const auto* s1 = g1.simple_function();
    const auto* s2 = g2.simple_function();
    if (s1 && s2) {
      const auto r = common_refinement(*s1, *s2);
      std::vector<SimpleFunction::Piece> pieces;
      for (std::size_t i = 0; i < r.partition.size(); ++i)
        pieces.push_back({r.partition.cells()[i], std::max(r.coeffs1[i], r.coeffs2[i])});
      return simple(SimpleFunction(std::move(pieces)));
    }
    auto a = g1.node_;
    auto b = g2.node_;
    auto breaks = a->breaks;
    breaks.insert(breaks.end(), b->breaks.begin(), b->breaks.end());
    LowerBound lower;
    if (a->lower && b->lower) lower = [a, b](double lo, double hi) { return std::max(a->lower(lo, hi), b->lower(lo, hi)); };
    return custom("max(" + a->name + "," + b->name + ")", [a, b](double s) { return std::max(a->eval(s), b->eval(s)); },
                  a->support.unite(b->support), std::max(a->sup, b->sup), std::move(lower), std::move(breaks));
  }

 private:
  struct Node {
    std::string name;
    Eval eval;
    LowerBound lower;
    Cell support;
    double sup = 0.0;
    std::vector<double> breaks;
    std::optional<SimpleFunction> simple;
  };

  explicit Integrand(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static void normalise_breaks(std::vector<double>& b) {
    std::erase_if(b, [](double x) { return !std::isfinite(x); });
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }

  static std::shared_ptr<Node> kernel_node(std::string name, Cell support, double sup, Eval f, LowerBound lower) {
    if (!(sup >= 0.0)) throw usage_error("integrand: sup bound must be nonnegative");
    auto node = std::make_shared<Node>();
    node->name = std::move(name);
    node->support = support;
    node->sup = sup;
    for (const auto& iv : support.intervals()) node->breaks.insert(node->breaks.end(), {iv.lo, iv.hi});
    normalise_breaks(node->breaks);
    node->eval = [f = std::move(f), support = std::move(support)](double s) { return support.contains(s) ? f(s) : 0.0; };
    if (lower) {
      node->lower = [lower = std::move(lower), s = node->support](double lo, double hi) {
        return Cell(lo, hi).subset_of(s) ? lower(lo, hi) : 0.0;
      };
    }
    return node;
  }

  static Integrand kernel(std::string name, Cell support, double sup, Eval f, LowerBound lower) {
    return Integrand(kernel_node(std::move(name), std::move(support), sup, std::move(f), std::move(lower)));
  }

  std::shared_ptr<const Node> node_;
};

/// Integral of g^alpha over `region` against m.
inline double lalpha_power_on(const Integrand& g, const MeasureSpace& m, double alpha, const Cell& region) {
  if (!(alpha > 0.0)) throw usage_error("lalpha: alpha must be positive");
  if (const auto* sf = g.simple_function()) {
    double t = 0.0;
    for (const auto& p : sf->pieces()) {
      if (p.coeff == 0.0) continue;
      const double mass = m.measure(p.cell.intersect(region));
      if (mass == 0.0) continue;
      if (!std::isfinite(mass)) throw integrability_error("lalpha: simple function has a cell of infinite measure");
      t += std::pow(p.coeff, alpha) * mass;
    }
    return t;
  }
  if (g.is_zero()) return 0.0;
  const double t = m.integrate([&g, alpha](double s) { const double v = g(s); return v > 0.0 ? std::pow(v, alpha) : 0.0; },
                               g.support().intersect(region), g.breakpoints());
  if (!std::isfinite(t)) throw integrability_error("lalpha: integral is infinite");
  return t;
}

/// ||g||_alpha^alpha.
inline double lalpha_power(const Integrand& g, const MeasureSpace& m, double alpha) {
  return lalpha_power_on(g, m, alpha, g.support());
}

/// ||g||_alpha = (integral of g^alpha dm)^(1/alpha).
inline double lalpha_norm(const Integrand& g, const MeasureSpace& m, double alpha) {
  return std::pow(lalpha_power(g, m, alpha), 1.0 / alpha);
}

/// Integral of |g1^alpha - g2^alpha| dm.
inline double lalpha_gap(const Integrand& g1, const Integrand& g2, const MeasureSpace& m, double alpha) {
  if (!(alpha > 0.0)) throw usage_error("lalpha_gap: alpha must be positive");
  const auto* s1 = g1.simple_function();
  const auto* s2 = g2.simple_function();
  if (s1 && s2) {
    const auto r = common_refinement(*s1, *s2);
    double t = 0.0;
    for (std::size_t i = 0; i < r.partition.size(); ++i) {
      const double d = std::abs(std::pow(r.coeffs1[i], alpha) - std::pow(r.coeffs2[i], alpha));
      if (d == 0.0) continue;
      const double mass = m.measure(r.partition.cells()[i]);
      if (!std::isfinite(mass)) throw integrability_error("lalpha_gap: infinite-measure cell");
      t += d * mass;
    }
    return t;
  }
  std::vector<double> breaks = g1.breakpoints();
  breaks.insert(breaks.end(), g2.breakpoints().begin(), g2.breakpoints().end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto h = [&](double s) { return std::abs(std::pow(g1(s), alpha) - std::pow(g2(s), alpha)); };
  return m.integrate(h, g1.support().unite(g2.support()), breaks);
}

/// E_n: the level-n exhausting window of a support. Anchored at the lower
/// end of the support when finite, at the upper end otherwise, else centred.
inline Cell exhausting_window(const Cell& support, double length) {
  if (std::isfinite(support.lower())) return Cell(support.lower(), support.lower() + length);
  if (std::isfinite(support.upper())) return Cell(support.upper() - length, support.upper());
  return Cell(-0.5 * length, 0.5 * length);
}

/// Dyadic simple approximation g_n <= g_{n+1} <= g with g_n -> g pointwise:
/// g_n = min(floor(2^n g) / 2^n, n) on E_n. Simple functions are floored
/// coefficient-wise; kernels use their lower bound on the 2^-n grid.
inline SimpleFunction monotone_approximation(const Integrand& g, int n) {
  if (n < 0) throw usage_error("monotone_approximation: level must be nonnegative");
  const double scale = std::ldexp(1.0, n);
  const double cap = static_cast<double>(n);
  auto level = [&](double v) { return std::min(std::floor(scale * v) / scale, cap); };
  const Cell window = exhausting_window(g.support(), static_cast<double>(n));
  std::vector<SimpleFunction::Piece> pieces;
  if (const auto* sf = g.simple_function()) {
    for (const auto& p : sf->pieces()) {
      const double c = level(p.coeff);
      const Cell cell = p.cell.intersect(window);
      if (c > 0.0 && !cell.empty()) pieces.push_back({cell, c});
    }
    return SimpleFunction(std::move(pieces));
  }
  const Cell domain = g.support().intersect(window);
  const double h = 1.0 / scale;
  for (const auto& iv : domain.intervals()) {
    const double first = std::floor(iv.lo * scale);
    const double last = std::ceil(iv.hi * scale);
    for (double k = first; k < last; k += 1.0) {
      const double lo = std::max(iv.lo, k * h);
      const double hi = std::min(iv.hi, (k + 1.0) * h);
      if (!(hi > lo)) continue;
      const double c = level(g.lower_bound_on(lo, hi));
      if (c > 0.0) pieces.push_back({Cell(lo, hi), c});
    }
  }
  return SimpleFunction(std::move(pieces));
}

/// P(I(g) != I(g 1_cell)) = ||g 1_{cell^c}||^alpha / ||g||^alpha.
inline double mismatch_probability(const Integrand& g, const Cell& cell, const MeasureSpace& m, double alpha) {
  const double total = lalpha_power(g, m, alpha);
  if (!(total > 0.0)) throw usage_error("mismatch_probability: integrand has zero norm");
  const Cell outside = g.support().subtract(cell);
  if (outside.empty()) return 0.0;
  return lalpha_power_on(g, m, alpha, outside) / total;
}

/// Smallest exhausting window E (up to bisection precision) whose mismatch
/// probability does not exceed epsilon. Returned intersected with the support.
inline Cell exhausting_cell(const Integrand& g, const MeasureSpace& m, double alpha, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw usage_error("exhausting_cell: epsilon must lie in (0, 1)");
  const Cell support = g.support().intersect(m.ground());
  const double total = lalpha_power(g, m, alpha);
  if (!(total > 0.0)) throw usage_error("exhausting_cell: integrand has zero norm");
  auto window_mismatch = [&](double len) {
    const Cell e = exhausting_window(support, len).intersect(support);
    const Cell outside = support.subtract(e);
    return outside.empty() ? 0.0 : lalpha_power_on(g, m, alpha, outside) / total;
  };
  double hi = 1.0;
  if (support.bounded()) hi = std::max(hi, support.upper() - support.lower());
  double lo = 0.0;
  if (!support.bounded()) {
    hi = 1.0;
    int doublings = 0;
    while (window_mismatch(hi) > epsilon) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 200) throw truncation_error("exhausting_cell: epsilon unreachable on the declared support");
    }
  } else if (window_mismatch(hi) > epsilon) {
    throw truncation_error("exhausting_cell: epsilon unreachable on the declared support");
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (window_mismatch(mid) <= epsilon) hi = mid; else lo = mid;
  }
  return exhausting_window(support, hi).intersect(support);
}

}  // namespace iext
