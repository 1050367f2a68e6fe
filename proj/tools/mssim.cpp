/*
   Copyright 2026 The mssim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// mssim: command-line front end for the simulation and verification suites.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "mssim/experiments.hpp"

namespace {

struct Options {
  mssim::ExperimentConfig config;
  std::string out;
  std::optional<std::size_t> reps;
  std::optional<double> horizon, trunc_m, trunc_eps;
};

void add_sampling_flags(CLI::App& sub, Options& o) {
  auto& c = o.config;
  sub.add_option("--beta", c.beta_spec,
                 "stability index: constant:c | affine:c0,c1 | "
                 "sin:c0,c1,c2 | table:t0,b0;t1,b1;...")
      ->capture_default_str();
  sub.add_option("--horizon", o.horizon, "time horizon of the index");
  sub.add_option("--t", c.ts, "times / levels")
      ->delimiter(',')
      ->capture_default_str();
  sub.add_option("--trunc-m", o.trunc_m, "stationary truncation M");
  sub.add_option("--trunc-eps", o.trunc_eps, "threshold truncation epsilon");
}

int write_report(const mssim::ExperimentReport& report,
                 const std::string& out) {
  if (out.empty()) {
    report.write(std::cout);
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + out);
    report.write(file);
  }
  return report.pass() ? 0 : 1;
}

int write_paths(const mssim::ExperimentConfig& config,
                const std::string& out) {
  if (out.empty()) return write_report(mssim::run_paths(config), out);
  std::filesystem::create_directories(out);
  const auto reports = mssim::emit_paths(config);
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto path =
        std::filesystem::path(out) / ("path_" + std::to_string(r) + ".csv");
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path.string());
    reports[r].write(file);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multistable subordinator and multifractional Poisson process "
               "simulator"};
  app.set_version_flag("--version", mssim::kVersion);
  app.require_subcommand(1);

  Options o;
  auto& c = o.config;
  c.workers = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--seed", c.seed, "master seed")->capture_default_str();
  app.add_option("--reps", o.reps, "replications (>= 2)");
  app.add_option("--workers", c.workers, "worker threads")
      ->capture_default_str();
  app.add_option("--out", o.out, "output file (directory for paths)");

  auto* laplace = app.add_subcommand("laplace", "Laplace transform of D(t)");
  add_sampling_flags(*laplace, o);
  laplace->add_option("--theta", c.thetas, "Laplace arguments")
      ->delimiter(',')
      ->capture_default_str();

  auto* mfpp = app.add_subcommand("mfpp", "law of X(t) = N(E(t))");
  add_sampling_flags(*mfpp, o);
  mfpp->add_option("--lambda", c.lambda, "Poisson rate")->capture_default_str();

  auto* ctrw = app.add_subcommand("ctrw", "CTRW limit theorems");
  add_sampling_flags(*ctrw, o);
  ctrw->add_option("--n", c.ns, "array sizes")->delimiter(',')
      ->capture_default_str();
  ctrw->add_option("--lambda", c.lambda, "Poisson rate")->capture_default_str();
  ctrw->add_option("--pn-rule", c.pn_rule, "sqrt | const:<p>")
      ->capture_default_str();
  ctrw->add_option("--lfamily", c.lfamily, "slowly varying factor: unit | log")
      ->capture_default_str();
  ctrw->add_option("--alpha", c.alpha, "KS significance level")
      ->capture_default_str();

  auto* paths = app.add_subcommand("paths", "sampled trajectories of D, E, X");
  add_sampling_flags(*paths, o);
  paths->add_option("--lambda", c.lambda, "Poisson rate")
      ->capture_default_str();
  paths->add_option("--grid", c.grid, "grid intervals on [0, max t]")
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "acceptance suite");
  verify->add_flag("--quick", c.quick, "reduced replication counts");

  for (auto* sub : {laplace, mfpp, ctrw, paths, verify}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  c.reps = o.reps;
  c.horizon = o.horizon;
  c.trunc_m = o.trunc_m;
  c.trunc_eps = o.trunc_eps;
  if (*laplace) c.command = mssim::Command::laplace;
  if (*mfpp) c.command = mssim::Command::mfpp;
  if (*ctrw) c.command = mssim::Command::ctrw;
  if (*paths) c.command = mssim::Command::paths;
  if (*verify) c.command = mssim::Command::verify;

  try {
    if (c.command == mssim::Command::paths) return write_paths(c, o.out);
    return write_report(mssim::run(c), o.out);
  } catch (const mssim::UsageError& e) {
    std::cerr << "mssim: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mssim: error: " << e.what() << '\n';
    return 3;
  }
}
