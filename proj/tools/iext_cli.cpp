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

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "iext/commands.hpp"

int main(int argc, char** argv) {
  using namespace iext::cli;

  CLI::App app{"iext: simulation and verification of f-implicit max-stable extremal integrals"};
  app.require_subcommand(1);
  app.fallthrough();

  Invocation inv;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--config", inv.config_path, "JSON run configuration (defaults apply when omitted)")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "override the configured seed");
  auto* out_opt = app.add_option("--out", out, "output directory (overrides the configured one)");
  app.add_option("--jobs", inv.jobs, "worker threads; results do not depend on this")->check(CLI::Range(1u, 1024u));

  auto* sample = app.add_subcommand("sample", "draw sigma Z Theta from the implicit Frechet law");
  auto* integrate = app.add_subcommand("integrate", "draw the extremal integral of every configured integrand");
  std::size_t dump_atoms = 0;
  integrate->add_option("--dump-atoms", dump_atoms, "also write the first K series atoms of replication 0 as CSV");
  auto* process = app.add_subcommand("process", "simulate paths of the configured max-stable process");
  auto* verify = app.add_subcommand("verify", "run the statistical verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  if (*seed_opt) inv.seed = seed;
  if (*out_opt) inv.out = out;

  try {
    const auto cfg = resolve(inv);
    if (*sample) return cmd_sample(cfg, inv.jobs, std::cout);
    if (*integrate) return cmd_integrate(cfg, inv.jobs, std::cout, dump_atoms);
    if (*process) return cmd_process(cfg, inv.jobs, std::cout);
    if (*verify) return cmd_verify(cfg, inv.jobs, std::cout);
  } catch (const iext::config_error& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kRuntimeError;
}
