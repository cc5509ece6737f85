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

// Run configuration: a single JSON document describing the loss, angular
// measure, control measure, integrands and run controls. Every parse failure
// is reported as a config_error carrying the JSON pointer of the bad field.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "iext/algebra.hpp"
#include "iext/errors.hpp"
#include "iext/integral.hpp"
#include "iext/laws.hpp"
#include "iext/measure.hpp"
#include "iext/supmeasure.hpp"
#include "iext/verify.hpp"

namespace iext::config {

using Json = nlohmann::json;
using Bounds = std::pair<double, double>;

struct LossSpec {
  std::string kind = "euclidean";
  std::size_t dim = 2;
  std::vector<double> weights;
  double up = 1.0;
  double down = 1.0;
  bool operator==(const LossSpec&) const = default;
};

struct AtomSpec {
  std::vector<double> theta;
  double prob = 0.0;
  bool operator==(const AtomSpec&) const = default;
};

struct KappaSpec {
  std::string kind = "discrete";
  std::vector<AtomSpec> atoms{{{1.0, 0.0}, 0.5}, {{0.0, 1.0}, 0.3}, {{-1.0, -1.0}, 0.2}};
  std::vector<double> theta;
  std::string base = "gaussian";
  bool operator==(const KappaSpec&) const = default;
};

struct MeasureSpec {
  std::vector<Bounds> ground{{0.0, kInf}};
  std::string density = "lebesgue";
  double rate = 1.0;
  bool operator==(const MeasureSpec&) const = default;
};

struct PieceSpec {
  std::vector<Bounds> cells;
  double coeff = 0.0;
  bool operator==(const PieceSpec&) const = default;
};

struct IntegrandSpec {
  std::string kind = "exp_decay";
  double rate = 1.0;
  double exponent = 1.0;
  double center = 0.0;
  double half_width = 1.0;
  std::vector<Bounds> support{{0.0, 20.0}};
  std::vector<PieceSpec> pieces;
  bool operator==(const IntegrandSpec&) const = default;
};

struct ProcessSpec {
  /// "cumulative": X(t) = M([origin, origin + t)); "kernels": X(t_j) = I(g_j)
  /// over the configured integrands.
  std::string kind = "cumulative";
  std::vector<double> times{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  double origin = 0.0;
  bool operator==(const ProcessSpec&) const = default;
};

struct VerifySpec {
  double n_scale = 1.0;
  double reference_scale_factor = 1.0;
  bool operator==(const VerifySpec&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 20260101;
  double alpha = 1.5;
  LossSpec loss;
  KappaSpec kappa;
  MeasureSpec measure;
  std::vector<IntegrandSpec> integrands{IntegrandSpec{}};
  double sigma = 1.0;
  ProcessSpec process;
  std::string backend = "series";
  int level = 8;
  std::size_t replications = 20000;
  double epsilon_trunc = 1e-4;
  std::string output = "out";
  VerifySpec verify;
  bool operator==(const RunConfig&) const = default;
};

namespace detail {

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_ + "/" + key; }
  std::string at(std::size_t i) const { return path_ + "/" + std::to_string(i); }

  [[noreturn]] void fail(const std::string& what) const { throw config_error(path_.empty() ? "/" : path_, what); }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    for (const auto& [key, _] : j_.items()) {
      bool known = false;
      for (const char* k : allowed) known = known || key == k;
      if (!known) throw config_error(at(key), "unknown field");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  Reader child(const char* key) const { return Reader(j_.at(key), at(key)); }
  Reader child(std::size_t i) const { return Reader(j_.at(i), at(i)); }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  /// Number, or "inf"/"-inf", or null standing for `null_value`.
  double extended(double null_value) const {
    if (j_.is_null()) return null_value;
    if (j_.is_string()) {
      const auto s = j_.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
      fail("expected a number, \"inf\" or \"-inf\"");
    }
    return number();
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::uint64_t unsigned_integer() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0))
      fail("expected a nonnegative integer");
    return j_.get<std::uint64_t>();
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  std::vector<double> numbers() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = child(i).number();
    return out;
  }
  std::vector<Bounds> intervals() const {
    std::vector<Bounds> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Reader iv = child(i);
      if (iv.size() != 2) iv.fail("expected [lo, hi]");
      out[i] = {iv.child(std::size_t{0}).extended(-kInf), iv.child(1).extended(kInf)};
      if (!(out[i].first < out[i].second)) iv.fail("interval must satisfy lo < hi");
    }
    return out;
  }

 private:
  const Json& j_;
  std::string path_;
};

inline Json bound_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

inline Json intervals_json(const std::vector<Bounds>& ivs) {
  Json out = Json::array();
  for (const auto& [lo, hi] : ivs) out.push_back({bound_json(lo), bound_json(hi)});
  return out;
}

inline LossSpec read_loss(const Reader& r) {
  r.require_object({"kind", "dim", "weights", "up", "down"});
  LossSpec s;
  if (!r.has("kind")) r.fail("missing field \"kind\"");
  s.kind = r.child("kind").string();
  if (s.kind == "euclidean" || s.kind == "l_infinity") {
    if (r.has("dim")) s.dim = r.child("dim").unsigned_integer();
  } else if (s.kind == "weighted_l1") {
    if (!r.has("weights")) r.fail("weighted_l1 needs \"weights\"");
    s.weights = r.child("weights").numbers();
    s.dim = s.weights.size();
  } else if (s.kind == "asymmetric_1d") {
    s.dim = 1;
    if (r.has("up")) s.up = r.child("up").number();
    if (r.has("down")) s.down = r.child("down").number();
  } else {
    throw config_error(r.at("kind"), "unknown loss \"" + s.kind + "\"");
  }
  return s;
}

inline KappaSpec read_kappa(const Reader& r) {
  r.require_object({"kind", "atoms", "theta", "base"});
  KappaSpec s;
  s.atoms.clear();
  if (!r.has("kind")) r.fail("missing field \"kind\"");
  s.kind = r.child("kind").string();
  if (s.kind == "discrete") {
    if (!r.has("atoms")) r.fail("discrete kappa needs \"atoms\"");
    const Reader atoms = r.child("atoms");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Reader a = atoms.child(i);
      a.require_object({"theta", "prob"});
      if (!a.has("theta") || !a.has("prob")) a.fail("atom needs \"theta\" and \"prob\"");
      s.atoms.push_back({a.child("theta").numbers(), a.child("prob").number()});
    }
  } else if (s.kind == "dirac") {
    if (!r.has("theta")) r.fail("dirac kappa needs \"theta\"");
    s.theta = r.child("theta").numbers();
  } else if (s.kind == "projection") {
    if (r.has("base")) s.base = r.child("base").string();
    if (s.base != "gaussian" && s.base != "uniform_cube" && s.base != "positive_orthant")
      throw config_error(r.at("base"), "unknown base \"" + s.base + "\"");
  } else {
    throw config_error(r.at("kind"), "unknown kappa \"" + s.kind + "\"");
  }
  return s;
}

inline MeasureSpec read_measure(const Reader& r) {
  r.require_object({"ground", "density", "rate"});
  MeasureSpec s;
  if (r.has("ground")) s.ground = r.child("ground").intervals();
  if (r.has("density")) s.density = r.child("density").string();
  if (s.density != "lebesgue" && s.density != "exponential")
    throw config_error(r.at("density"), "unknown density \"" + s.density + "\"");
  if (r.has("rate")) s.rate = r.child("rate").number();
  return s;
}

inline IntegrandSpec read_integrand(const Reader& r) {
  r.require_object({"kind", "rate", "exponent", "center", "half_width", "support", "pieces"});
  IntegrandSpec s;
  if (!r.has("kind")) r.fail("missing field \"kind\"");
  s.kind = r.child("kind").string();
  if (s.kind != "exp_decay" && s.kind != "triangle" && s.kind != "power" && s.kind != "indicator" && s.kind != "simple")
    throw config_error(r.at("kind"), "unknown integrand \"" + s.kind + "\"");
  if (r.has("rate")) s.rate = r.child("rate").number();
  if (r.has("exponent")) s.exponent = r.child("exponent").number();
  if (r.has("center")) s.center = r.child("center").number();
  if (r.has("half_width")) s.half_width = r.child("half_width").number();
  if (r.has("support")) s.support = r.child("support").intervals();
  if (s.kind == "simple") {
    s.support.clear();
    if (!r.has("pieces")) r.fail("simple integrand needs \"pieces\"");
    const Reader pieces = r.child("pieces");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const Reader p = pieces.child(i);
      p.require_object({"cells", "coeff"});
      if (!p.has("cells") || !p.has("coeff")) p.fail("piece needs \"cells\" and \"coeff\"");
      s.pieces.push_back({p.child("cells").intervals(), p.child("coeff").number()});
    }
  } else if (r.has("pieces")) {
    throw config_error(r.at("pieces"), "only simple integrands take pieces");
  }
  return s;
}

inline ProcessSpec read_process(const Reader& r) {
  r.require_object({"kind", "times", "origin"});
  ProcessSpec s;
  if (r.has("kind")) s.kind = r.child("kind").string();
  if (s.kind != "cumulative" && s.kind != "kernels") throw config_error(r.at("kind"), "unknown process \"" + s.kind + "\"");
  if (r.has("times")) s.times = r.child("times").numbers();
  if (r.has("origin")) s.origin = r.child("origin").number();
  for (std::size_t i = 1; i < s.times.size(); ++i)
    if (!(s.times[i] > s.times[i - 1])) throw config_error(r.at("times") + "/" + std::to_string(i), "times must increase");
  return s;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// Parse a JSON document. Missing fields keep their defaults.
inline RunConfig parse(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw config_error("/", "JSON syntax error at line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  const detail::Reader r(j, "");
  r.require_object({"seed", "alpha", "loss", "kappa", "measure", "integrands", "sample", "process", "backend", "level",
                    "replications", "epsilon_trunc", "output", "verify"});
  RunConfig c;
  if (r.has("seed")) c.seed = r.child("seed").unsigned_integer();
  if (r.has("alpha")) c.alpha = r.child("alpha").number();
  if (!(c.alpha > 0.0)) throw config_error("/alpha", "alpha must be positive");
  if (r.has("loss")) {
    c.loss = detail::read_loss(r.child("loss"));
    if (!r.has("kappa") && c.loss.dim != 2) {
      c.kappa.kind = "projection";
      c.kappa.atoms.clear();
    }
  }
  if (r.has("kappa")) c.kappa = detail::read_kappa(r.child("kappa"));
  if (r.has("measure")) c.measure = detail::read_measure(r.child("measure"));
  if (r.has("integrands")) {
    const detail::Reader list = r.child("integrands");
    c.integrands.clear();
    for (std::size_t i = 0; i < list.size(); ++i) c.integrands.push_back(detail::read_integrand(list.child(i)));
  }
  if (r.has("sample")) {
    const detail::Reader s = r.child("sample");
    s.require_object({"sigma"});
    if (s.has("sigma")) c.sigma = s.child("sigma").number();
    if (!(c.sigma >= 0.0)) throw config_error("/sample/sigma", "sigma must be nonnegative");
  }
  if (r.has("process")) c.process = detail::read_process(r.child("process"));
  if (r.has("backend")) c.backend = r.child("backend").string();
  if (c.backend != "series" && c.backend != "cells") throw config_error("/backend", "expected \"series\" or \"cells\"");
  if (r.has("level")) c.level = r.child("level").integer();
  if (c.level < 0 || c.level > 30) throw config_error("/level", "level must lie in [0, 30]");
  if (r.has("replications")) c.replications = r.child("replications").unsigned_integer();
  if (c.replications == 0) throw config_error("/replications", "need at least one replication");
  if (r.has("epsilon_trunc")) c.epsilon_trunc = r.child("epsilon_trunc").number();
  if (!(c.epsilon_trunc > 0.0 && c.epsilon_trunc < 1.0)) throw config_error("/epsilon_trunc", "must lie in (0, 1)");
  if (r.has("output")) c.output = r.child("output").string();
  if (r.has("verify")) {
    const detail::Reader v = r.child("verify");
    v.require_object({"n_scale", "reference_scale_factor"});
    if (v.has("n_scale")) c.verify.n_scale = v.child("n_scale").number();
    if (v.has("reference_scale_factor")) c.verify.reference_scale_factor = v.child("reference_scale_factor").number();
    if (!(c.verify.n_scale > 0.0)) throw config_error("/verify/n_scale", "must be positive");
    if (!(c.verify.reference_scale_factor > 0.0)) throw config_error("/verify/reference_scale_factor", "must be positive");
  }
  return c;
}

inline RunConfig load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("/", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline Json to_json(const RunConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["alpha"] = c.alpha;
  Json loss{{"kind", c.loss.kind}};
  if (c.loss.kind == "weighted_l1") loss["weights"] = c.loss.weights;
  else if (c.loss.kind == "asymmetric_1d") loss["up"] = c.loss.up, loss["down"] = c.loss.down;
  else loss["dim"] = c.loss.dim;
  j["loss"] = loss;
  Json kappa{{"kind", c.kappa.kind}};
  if (c.kappa.kind == "discrete") {
    kappa["atoms"] = Json::array();
    for (const auto& a : c.kappa.atoms) kappa["atoms"].push_back({{"theta", a.theta}, {"prob", a.prob}});
  } else if (c.kappa.kind == "dirac") {
    kappa["theta"] = c.kappa.theta;
  } else {
    kappa["base"] = c.kappa.base;
  }
  j["kappa"] = kappa;
  j["measure"] = {{"ground", detail::intervals_json(c.measure.ground)}, {"density", c.measure.density}, {"rate", c.measure.rate}};
  j["integrands"] = Json::array();
  for (const auto& g : c.integrands) {
    Json e{{"kind", g.kind}};
    if (g.kind == "simple") {
      e["pieces"] = Json::array();
      for (const auto& p : g.pieces) e["pieces"].push_back({{"cells", detail::intervals_json(p.cells)}, {"coeff", p.coeff}});
    } else {
      e["rate"] = g.rate;
      e["exponent"] = g.exponent;
      e["center"] = g.center;
      e["half_width"] = g.half_width;
      e["support"] = detail::intervals_json(g.support);
    }
    j["integrands"].push_back(e);
  }
  j["sample"] = {{"sigma", c.sigma}};
  j["process"] = {{"kind", c.process.kind}, {"times", c.process.times}, {"origin", c.process.origin}};
  j["backend"] = c.backend;
  j["level"] = c.level;
  j["replications"] = c.replications;
  j["epsilon_trunc"] = c.epsilon_trunc;
  j["output"] = c.output;
  j["verify"] = {{"n_scale", c.verify.n_scale}, {"reference_scale_factor", c.verify.reference_scale_factor}};
  return j;
}

inline std::string serialize(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

// ---- builders -------------------------------------------------------------

namespace detail {

template <class Fn>
auto at_path(const std::string& where, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const usage_error& e) {
    throw config_error(where, e.what());
  } catch (const integrability_error& e) {
    throw config_error(where, e.what());
  }
}

inline Cell cell_of(const std::vector<Bounds>& ivs) {
  std::vector<Interval> parts;
  for (const auto& [lo, hi] : ivs) parts.push_back({lo, hi});
  return Cell(std::move(parts));
}

}  // namespace detail

inline LossFunction build_loss(const RunConfig& c) {
  return detail::at_path("/loss", [&] {
    const auto& s = c.loss;
    if (s.kind == "euclidean") return LossFunction::euclidean(s.dim);
    if (s.kind == "l_infinity") return LossFunction::l_infinity(s.dim);
    if (s.kind == "weighted_l1") return LossFunction::weighted_l1(s.weights);
    return LossFunction::asymmetric_1d(s.up, s.down);
  });
}

inline AngularMeasure build_kappa(const RunConfig& c, const LossFunction& f) {
  return detail::at_path("/kappa", [&] {
    const auto& s = c.kappa;
    if (s.kind == "discrete") {
      std::vector<AngularMeasure::Atom> atoms;
      for (const auto& a : s.atoms) atoms.push_back({a.theta, a.prob});
      return AngularMeasure::discrete(f, std::move(atoms));
    }
    if (s.kind == "dirac") return AngularMeasure::dirac(f, s.theta);
    const auto base = s.base == "gaussian"       ? AngularMeasure::Base::gaussian
                      : s.base == "uniform_cube" ? AngularMeasure::Base::uniform_cube
                                                 : AngularMeasure::Base::positive_orthant;
    return AngularMeasure::projection(f, base);
  });
}

inline MeasureSpace build_space(const RunConfig& c) {
  return detail::at_path("/measure", [&] {
    const Cell ground = detail::cell_of(c.measure.ground);
    if (c.measure.density == "lebesgue") return MeasureSpace::lebesgue(ground);
    return MeasureSpace(ground, Density::exponential(c.measure.rate));
  });
}

inline SpecPtr build_spec(const RunConfig& c) {
  const LossFunction f = build_loss(c);
  const AngularMeasure k = build_kappa(c, f);
  const MeasureSpace m = build_space(c);
  return detail::at_path("/", [&] { return share(SupMeasureSpec(f, c.alpha, k, m)); });
}

inline Integrand build_integrand(const IntegrandSpec& s, const std::string& where) {
  return detail::at_path(where, [&] {
    const Cell support = detail::cell_of(s.support);
    if (s.kind == "exp_decay") return Integrand::exp_decay(s.rate, support);
    if (s.kind == "triangle") return Integrand::triangle(s.center, s.half_width).restricted(support);
    if (s.kind == "power") return Integrand::power(s.exponent, support);
    if (s.kind == "indicator") return Integrand::indicator(support);
    std::vector<SimpleFunction::Piece> pieces;
    for (const auto& p : s.pieces) pieces.push_back({detail::cell_of(p.cells), p.coeff});
    return Integrand::simple(SimpleFunction(std::move(pieces)));
  });
}

/// Builds every integrand and checks that it lies in L^alpha_+(m).
inline std::vector<Integrand> build_integrands(const RunConfig& c) {
  const MeasureSpace space = build_space(c);
  std::vector<Integrand> out;
  for (std::size_t i = 0; i < c.integrands.size(); ++i) {
    const std::string where = "/integrands/" + std::to_string(i);
    out.push_back(build_integrand(c.integrands[i], where));
    detail::at_path(where, [&] { return lalpha_power(out.back(), space, c.alpha); });
  }
  return out;
}

inline IntegrationControls build_controls(const RunConfig& c) {
  IntegrationControls ctl;
  ctl.epsilon_trunc = c.epsilon_trunc;
  ctl.level = c.level;
  ctl.backend = c.backend == "cells" ? Backend::cells : Backend::series;
  return ctl;
}

/// Kernels and time labels of the configured process.
inline std::pair<std::vector<Integrand>, std::vector<double>> build_process(const RunConfig& c) {
  if (c.process.kind == "cumulative") {
    if (c.process.times.empty()) throw config_error("/process/times", "cumulative process needs times");
    std::vector<Integrand> kernels;
    for (double t : c.process.times) {
      if (!(t >= 0.0)) throw config_error("/process/times", "times must be nonnegative");
      kernels.push_back(t > 0.0 ? Integrand::indicator(Cell(c.process.origin, c.process.origin + t))
                                : Integrand::simple(SimpleFunction(std::vector<SimpleFunction::Piece>{})));
    }
    return {std::move(kernels), c.process.times};
  }
  auto kernels = build_integrands(c);
  if (kernels.empty()) throw config_error("/integrands", "kernel process needs integrands");
  std::vector<double> times = c.process.times;
  if (times.size() != kernels.size()) {
    times.clear();
    for (std::size_t j = 0; j < kernels.size(); ++j) times.push_back(static_cast<double>(j + 1));
  }
  return {std::move(kernels), std::move(times)};
}

inline SuiteOptions build_suite(const RunConfig& c) {
  SuiteOptions opt;
  opt.context.loss = build_loss(c);
  opt.context.kappa = build_kappa(c, opt.context.loss);
  opt.context.space = build_space(c);
  opt.context.seed = c.seed;
  opt.context.reference_scale_factor = c.verify.reference_scale_factor;
  opt.alpha = c.alpha;
  opt.n_scale = c.verify.n_scale;
  return opt;
}

}  // namespace iext::config
