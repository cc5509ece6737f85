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

// The four batch commands behind the `iext` executable. Each writes its files
// into the output directory and returns a process exit code.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iext/config.hpp"
#include "iext/csv.hpp"
#include "iext/errors.hpp"
#include "iext/integral.hpp"
#include "iext/laws.hpp"
#include "iext/parallel.hpp"
#include "iext/rng.hpp"
#include "iext/svg.hpp"
#include "iext/verify.hpp"

namespace iext::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kRuntimeError = 2, kVerificationFailure = 3 };

struct Invocation {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned jobs = 1;
};

inline config::RunConfig resolve(const Invocation& inv) {
  config::RunConfig c = inv.config_path.empty() ? config::RunConfig{} : config::load(inv.config_path);
  if (inv.seed) c.seed = *inv.seed;
  if (inv.out) c.output = *inv.out;
  return c;
}

namespace detail {

inline std::filesystem::path output_dir(const config::RunConfig& c) {
  std::filesystem::path dir(c.output);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

inline std::vector<std::string> numbered(const char* prefix, std::size_t d) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= d; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace detail

/// N draws of sigma Z Theta: samples.csv and samples_cdf.svg.
inline int cmd_sample(const config::RunConfig& c, unsigned jobs, std::ostream& log) {
  const SpecPtr spec = config::build_spec(c);
  const ImplicitFrechetLaw law{c.alpha, c.sigma, spec->kappa};
  std::vector<Point> ys(c.replications);
  parallel_for(ys.size(), jobs, [&](std::size_t r) {
    Rng rng(substream_seed(c.seed, r));
    ys[r] = implicit_sample(law, rng);
  });
  const std::size_t d = spec->loss.dimension();
  std::ostringstream os;
  std::vector<std::string> header{"rep"};
  for (auto& h : detail::numbered("y_", d)) header.push_back(std::move(h));
  header.push_back("f_value");
  csv::write_row(os, header);
  std::vector<double> fv;
  fv.reserve(ys.size());
  for (std::size_t r = 0; r < ys.size(); ++r) {
    std::vector<std::string> row{csv::number(static_cast<std::uint64_t>(r))};
    for (double y : ys[r]) row.push_back(csv::number(y));
    fv.push_back(spec->loss(ys[r]));
    row.push_back(csv::number(fv.back()));
    csv::write_row(os, row);
  }
  const auto dir = detail::output_dir(c);
  detail::write_file(dir / "samples.csv", os.str());
  const FrechetLaw radial = law.radial();
  detail::write_file(dir / "samples_cdf.svg",
                     svg::cdf_overlay(fv, [radial](double x) { return frechet_cdf(radial, x); },
                                      "f(Y): empirical (black) vs Frechet reference (red)"));
  log << "wrote " << ys.size() << " samples to " << (dir / "samples.csv").string() << "\n";
  return kSuccess;
}

/// The first `count` atoms (k, s, u, theta_1..d) of a series realisation.
inline std::string atoms_csv(SeriesRealization& real, std::size_t count) {
  std::ostringstream os;
  std::vector<std::string> header{"k", "s", "u"};
  for (auto& h : detail::numbered("theta_", real.spec().loss.dimension())) header.push_back(std::move(h));
  csv::write_row(os, header);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& a = real.atom(k);
    std::vector<std::string> row{csv::number(static_cast<std::uint64_t>(k)), csv::number(a.location), csv::number(a.magnitude)};
    for (double v : a.mark) row.push_back(csv::number(v));
    csv::write_row(os, row);
  }
  return os.str();
}

/// N draws of I(g) per configured integrand: integral_<i>.csv. With
/// dump_atoms > 0 the series backend also writes atoms_<i>.csv, the first
/// max(dump_atoms, atoms_used) atoms behind replication 0.
inline int cmd_integrate(const config::RunConfig& c, unsigned jobs, std::ostream& log, std::size_t dump_atoms = 0) {
  const SpecPtr spec = config::build_spec(c);
  const auto integrands = config::build_integrands(c);
  const IntegrationControls ctl = config::build_controls(c);
  const std::size_t d = spec->loss.dimension();
  const auto dir = detail::output_dir(c);
  for (std::size_t i = 0; i < integrands.size(); ++i) {
    const IntegralPlan plan = plan_integral(spec, integrands[i], ctl);
    std::vector<IntegralResult> res(c.replications);
    parallel_for(res.size(), jobs, [&](std::size_t r) { res[r] = integrate(plan, substream_seed(c.seed, r)); });
    std::ostringstream os;
    std::vector<std::string> header{"replication"};
    for (auto& h : detail::numbered("value_", d)) header.push_back(std::move(h));
    for (const char* h : {"f_value", "atom_index", "atoms_used", "mismatch_prob"}) header.emplace_back(h);
    if (ctl.backend == Backend::cells) header.emplace_back("lalpha_gap");
    csv::write_row(os, header);
    for (std::size_t r = 0; r < res.size(); ++r) {
      const auto& x = res[r];
      std::vector<std::string> row{csv::number(static_cast<std::uint64_t>(r))};
      for (double v : x.value) row.push_back(csv::number(v));
      row.push_back(csv::number(x.f_value));
      row.push_back(x.atom ? csv::number(static_cast<std::uint64_t>(x.atom->index)) : std::string());
      row.push_back(csv::number(static_cast<std::uint64_t>(x.atoms_used)));
      row.push_back(csv::number(x.mismatch_prob));
      if (ctl.backend == Backend::cells) row.push_back(csv::number(x.lalpha_gap.value_or(0.0)));
      csv::write_row(os, row);
    }
    const std::string name = "integral_" + std::to_string(i + 1) + ".csv";
    detail::write_file(dir / name, os.str());
    log << "wrote " << res.size() << " draws of I(" << integrands[i].name() << ") to " << (dir / name).string() << "\n";
    if (dump_atoms > 0 && ctl.backend == Backend::series && plan.norm_power > 0.0) {
      SeriesRealization real(spec, plan.region, substream_seed(c.seed, 0), ctl.max_atoms);
      const std::string atoms_name = "atoms_" + std::to_string(i + 1) + ".csv";
      detail::write_file(dir / atoms_name, atoms_csv(real, std::max(dump_atoms, res[0].atoms_used)));
      log << "wrote the atoms of replication 0 to " << (dir / atoms_name).string() << "\n";
    }
  }
  return kSuccess;
}

/// N paths of the configured process: process.csv and process_paths.svg.
inline int cmd_process(const config::RunConfig& c, unsigned jobs, std::ostream& log) {
  const SpecPtr spec = config::build_spec(c);
  const auto [kernels, times] = config::build_process(c);
  IntegrationControls ctl = config::build_controls(c);
  std::vector<ProcessPath> paths(c.replications);
  parallel_for(paths.size(), jobs, [&](std::size_t r) { paths[r] = simulate_process(spec, kernels, substream_seed(c.seed, r), ctl); });
  const std::size_t d = spec->loss.dimension();
  std::ostringstream os;
  std::vector<std::string> header{"rep", "t"};
  for (auto& h : detail::numbered("x_", d)) header.push_back(std::move(h));
  header.emplace_back("f_value");
  csv::write_row(os, header);
  std::vector<std::vector<double>> shown;
  for (std::size_t r = 0; r < paths.size(); ++r) {
    std::vector<double> fpath;
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto& x = paths[r].values[k];
      std::vector<std::string> row{csv::number(static_cast<std::uint64_t>(r)), csv::number(times[k])};
      for (double v : x.value) row.push_back(csv::number(v));
      row.push_back(csv::number(x.f_value));
      csv::write_row(os, row);
      fpath.push_back(x.f_value);
    }
    if (shown.size() < 10) shown.push_back(std::move(fpath));
  }
  const auto dir = detail::output_dir(c);
  detail::write_file(dir / "process.csv", os.str());
  detail::write_file(dir / "process_paths.svg", svg::step_paths(times, shown, "f(X(t)) along the first paths"));
  log << "wrote " << paths.size() << " paths to " << (dir / "process.csv").string() << "\n";
  return kSuccess;
}

/// The verification suite: verify_report.csv and verify_summary.txt.
/// Exit 0 iff every check passes. Timing goes to stderr only so the files
/// stay byte-identical across runs.
inline int cmd_verify(const config::RunConfig& c, unsigned jobs, std::ostream& log) {
  SuiteOptions opt = config::build_suite(c);
  opt.context.jobs = jobs;
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = run_suite(opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream table, summary;
  write_reports_csv(table, reports);
  write_summary(summary, reports);
  const auto dir = detail::output_dir(c);
  detail::write_file(dir / "verify_report.csv", table.str());
  detail::write_file(dir / "verify_summary.txt", summary.str());
  log << summary.str();
  std::cerr << "verify: " << reports.size() << " checks in " << secs << " s\n";
  const bool all = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
  return all ? kSuccess : kVerificationFailure;
}

}  // namespace iext::cli
