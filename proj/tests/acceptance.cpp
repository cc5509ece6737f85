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

// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Usage: acceptance PATH_TO_IEXT_CLI

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "iext/verify.hpp"

namespace {

using namespace iext;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Tolerances of the criteria.
constexpr double kNormTarget = 0.70711;
constexpr double kNormTolerance = 5e-6;
constexpr double kKsLimitN20000 = 0.0115;
constexpr double kMarginalSeconds = 30.0;
constexpr double kGapBoundAlpha1Gamma05 = 1.0 / 3.0;
constexpr double kSandwichEqualWeights = 1.0 / 6.0;
constexpr double kRemainderTarget = 0.25;
constexpr double kVerifySeconds = 300.0;
constexpr double kExactTolerance = 1e-12;

int failures = 0;

void line(int id, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
  if (!pass) ++failures;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string describe(const CheckReport& r) {
  return r.name + " N=" + std::to_string(r.n) + " stat=" + fmt(r.statistic) + " ref=" + fmt(r.reference) +
         " thr=" + fmt(r.threshold);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion1(const CheckContext& ctx) {
  const Integrand g = Integrand::exp_decay(1.0, Cell(0.0, 20.0));
  const double norm = lalpha_norm(g, ctx.space, 2.0);
  const auto t0 = Clock::now();
  const auto r = check_marginal_law(ctx, "marginal_law_exp_decay", g, 2.0, 20000);
  const double secs = seconds_since(t0);
  const bool pass = std::abs(norm - kNormTarget) < kNormTolerance && r.statistic < kKsLimitN20000 && r.pass &&
                    secs < kMarginalSeconds;
  line(1, pass, "||g||_2=" + fmt(norm) + " " + describe(r) + " D<" + fmt(kKsLimitN20000) + " time=" + fmt(secs) + "s");
}

void criterion2(const CheckContext& ctx) {
  const SimpleFunction g({{Cell(0.0, 1.0), 2.0}, {Cell(1.0, 3.0), 1.0}, {Cell(3.0, 4.0), 0.5}});
  const auto reps = check_backend_equivalence(ctx, g, 1.5, 20000);
  bool pass = reps.size() == 2;
  std::string detail;
  for (const auto& r : reps) {
    pass = pass && r.pass;
    detail += describe(r) + "; ";
  }
  line(2, pass, detail);
}

void criterion3(const CheckContext& ctx) {
  const std::vector<double> five(5, 1.0);
  const auto gap = check_gap_lemma(ctx, "gap_lemma_k5", five, 1.0, 0.5, 100000);
  const auto sw = check_sandwich(ctx, "sandwich_k2", 1.0, 1.0, 1.0, 1.0, 100000);
  const bool pass = std::abs(gap.reference - kGapBoundAlpha1Gamma05) < kExactTolerance && gap.pass &&
                    std::abs(sw.reference - kSandwichEqualWeights) < kExactTolerance && sw.pass;
  line(3, pass, describe(gap) + "; " + describe(sw));
}

void criterion4(const CheckContext& ctx) {
  const auto r = check_max_linearity(ctx, 1.5, 1000);
  line(4, r.pass && r.statistic == 1.0, describe(r));
}

void criterion5(const CheckContext& ctx) {
  const auto r = check_monotonicity(ctx, 1.5, 1000);
  line(5, r.pass && r.statistic == 1.0, describe(r));
}

void criterion6(const CheckContext& ctx) {
  const auto r = check_remainder(ctx, "remainder", Integrand::indicator(Cell(0.0, 4.0)), Cell(0.0, 3.0), 1.0, 100000);
  line(6, r.pass && std::abs(r.reference - kRemainderTarget) < kExactTolerance, describe(r));
}

void criterion7(const CheckContext& ctx) {
  const auto a = check_independence(ctx, "independence_disjoint", Integrand::indicator(Cell(0.0, 1.0)),
                                    Integrand::indicator(Cell(1.0, 2.0)), 1.5, 20000);
  const auto b = check_independence(ctx, "dependence_overlap", Integrand::indicator(Cell(0.0, 2.0)),
                                    Integrand::indicator(Cell(1.0, 3.0)), 1.5, 20000);
  line(7, a.pass && b.pass, describe(a) + "; " + describe(b));
}

void criterion8(const CheckContext& ctx) {
  const Integrand g = Integrand::exp_decay(1.0, Cell(0.0, 20.0));
  std::vector<Integrand> dyadic;
  for (int n = 2; n <= 8; ++n) dyadic.push_back(Integrand::simple(monotone_approximation(g, n)));
  const auto fwd = check_convergence_theorem(ctx, "convergence_dyadic", g, dyadic, ConvergenceMode::forward, 2.0, 1000);
  std::vector<Integrand> translates;
  for (int k = 1; k <= 8; ++k) translates.push_back(Integrand::indicator(Cell(k, k + 1.0)));
  const auto div = check_convergence_theorem(ctx, "convergence_translates", Integrand::indicator(Cell(0.0, 1.0)), translates,
                                             ConvergenceMode::divergent, 1.0, 1000);
  line(8, fwd.pass && div.pass,
       "P(dist>0.05) at n=8: " + fmt(fwd.statistic) + " (< 0.05); min over translates: " + fmt(div.statistic) + " (> 0.5)");
}

void criterion9(const CheckContext& ctx) {
  const auto r = check_classical_recovery(ctx, 1.5, 1000);
  line(9, r.pass && r.statistic == 1.0, describe(r));
}

void criterion10(const std::string& cli) {
  const fs::path root = fs::temp_directory_path() / "iext_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  double worst = 0.0;
  int codes[2];
  for (int i = 0; i < 2; ++i) {
    const auto t0 = Clock::now();
    codes[i] = run_cli(cli, "--jobs 1 --out " + (root / ("run" + std::to_string(i))).string() + " verify");
    worst = std::max(worst, seconds_since(t0));
  }
  const std::string r0 = slurp(root / "run0" / "verify_report.csv");
  const std::string r1 = slurp(root / "run1" / "verify_report.csv");
  const bool identical = !r0.empty() && r0 == r1 &&
                         slurp(root / "run0" / "verify_summary.txt") == slurp(root / "run1" / "verify_summary.txt");
  const fs::path neg = root / "negative.json";
  std::ofstream(neg) << R"({"verify": {"reference_scale_factor": 2}})";
  const int neg_code = run_cli(cli, "--config " + neg.string() + " --out " + (root / "neg").string() + " verify");
  const bool pass = codes[0] == 0 && codes[1] == 0 && identical && worst <= kVerifySeconds && neg_code != 0;
  line(10, pass,
       "exit codes " + std::to_string(codes[0]) + "," + std::to_string(codes[1]) + (identical ? " identical" : " DIFFERENT") +
           " reports, slowest " + fmt(worst) + "s (<= 300s), negative control exit " + std::to_string(neg_code));
  fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance PATH_TO_IEXT_CLI\n";
    return 2;
  }
  const CheckContext ctx;
  criterion1(ctx);
  criterion2(ctx);
  criterion3(ctx);
  criterion4(ctx);
  criterion5(ctx);
  criterion6(ctx);
  criterion7(ctx);
  criterion8(ctx);
  criterion9(ctx);
  criterion10(argv[1]);
  std::cout << (10 - failures) << "/10 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
