// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: solve, exact, compare, generate, check, bench.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nsw/generator.hpp"
#include "nsw/io.hpp"
#include "nsw/pipeline.hpp"
#include "nsw/recombination.hpp"
#include "nsw/rounding.hpp"

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string instance_path;
  std::string out_path;
  nsw::PipelineConfig config;
  std::string estimator = "exact";
};

void add_solver_flags(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("instance", opts->instance_path, "instance JSON file")->required();
  cmd->add_option("--seed", opts->config.seed, "master RNG seed");
  cmd->add_option("--delta", opts->config.greedy.delta, "continuous greedy step size");
  cmd->add_option("--samples", opts->config.greedy.samples_per_estimate,
                  "samples per gradient estimate");
  cmd->add_option("--gain-threshold", opts->config.greedy.gain_threshold,
                  "per-agent log gain required to keep iterating");
  cmd->add_option("--max-iters", opts->config.greedy.max_iterations, "greedy iteration cap");
  cmd->add_option("--estimator", opts->estimator, "exact | sample")
      ->check(CLI::IsMember({"exact", "sample"}));
  cmd->add_option("--c", opts->config.c, "large-item threshold");
  cmd->add_option("--d", opts->config.d, "recombination parameter (default c+2)");
  cmd->add_option("--trials", opts->config.trials, "rounding trial count");
  cmd->add_flag("--assign-leftovers", opts->config.assign_leftovers,
                "assign unallocated items to the max-marginal agent");
  cmd->add_option("--out", opts->out_path, "write the JSON report here");
}

nsw::PipelineConfig finish_config(CommonOptions& opts) {
  opts.config.greedy.estimator = opts.estimator == "sample"
                                     ? nsw::EstimatorMode::always_sample
                                     : nsw::EstimatorMode::exact_when_possible;
  return opts.config;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = nsw::dump_json(j);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    nsw::write_file(out_path, text);
  }
}

int run_solve(CommonOptions& opts) {
  const nsw::Instance instance = nsw::load_instance(opts.instance_path);
  const nsw::RunReport report = nsw::run_pipeline(instance, finish_config(opts));
  std::cout << "solved n=" << report.n << " m=" << report.m
            << " opt_zero=" << (report.opt_zero ? "true" : "false")
            << " log_nsw=" << report.best_log_nsw << "\n";
  emit(nsw::report_to_json(report), opts.out_path);
  return 0;
}

int run_exact(CommonOptions& opts) {
  const nsw::Instance instance = nsw::load_instance(opts.instance_path);
  const nsw::ExactResult result = nsw::brute_force_nsw(instance);
  std::cout << "exact log_nsw=" << result.log_nsw << " nsw=" << result.nsw
            << " enumerated=" << result.enumerated << "\n";
  emit(nsw::exact_to_json(result), opts.out_path);
  return 0;
}

int run_compare(CommonOptions& opts) {
  const nsw::Instance instance = nsw::load_instance(opts.instance_path);
  const nsw::CompareReport report = nsw::compare_run(instance, finish_config(opts));
  if (report.exact) {
    std::cout << "alg log_nsw=" << report.run.best_log_nsw
              << " opt log_nsw=" << report.exact->log_nsw
              << " ratio=" << (report.run.ratio ? *report.run.ratio : 1.0)
              << " ratio_ok=" << (report.ratio_ok ? "true" : "false") << "\n";
  } else {
    std::cout << "instance too large for the exact oracle; pipeline only\n";
  }
  emit(nsw::compare_to_json(report), opts.out_path);
  return 0;
}

int run_check(CommonOptions& opts) {
  const nsw::Instance instance = nsw::load_instance(opts.instance_path);
  const nsw::PipelineConfig config = finish_config(opts);
  const nsw::RunReport report = nsw::run_pipeline(instance, config);
  json j;
  j["opt_zero"] = report.opt_zero;
  if (report.opt_zero) {
    std::cout << "opt_zero instance; recombination diagnostics skipped\n";
    emit(j, opts.out_path);
    return 0;
  }
  const double d = config.resolved_d();
  const nsw::Matching& pi = report.trials[static_cast<std::size_t>(report.best_trial)].sigma;
  const nsw::RecombineResult rec = nsw::recombine(instance, report.tau, pi, report.y, d);
  const nsw::RecombinationCertificate cert =
      nsw::verify_recombination(instance, report.tau, pi, rec, report.y, d);
  j["recombination"] = nsw::certificate_to_json(cert);

  // Large-set diagnostics on the padded fractional solution.
  const nsw::PaddedProblem padded =
      nsw::pad_with_dummies(instance, report.y, report.a_prime, config.c);
  json large_sets = json::array();
  bool large_ok = true;
  for (int i : report.a_prime) {
    const nsw::ItemSet large =
        nsw::find_large_set(padded.instance, i, padded.y.row(i), config.c);
    double mass = 0;
    large.for_each([&](int jj) { mass += padded.y.at(i, jj); });
    const bool window_ok = mass >= config.c - 1e-9 && mass <= config.c + 1 + 1e-9;
    large_ok = large_ok && window_ok;
    large_sets.push_back({{"agent", i}, {"items", large.indices()}, {"mass", mass},
                          {"window_ok", window_ok}});
  }
  j["large_sets"] = std::move(large_sets);
  j["large_sets_ok"] = large_ok;

  try {
    const nsw::ExactResult opt = nsw::brute_force_nsw(instance);
    const nsw::ExtensionBoundReport bound =
        nsw::matching_extension_bound(instance, report.y, report.h, opt, report.a_prime);
    j["extension_bound"] = nsw::extension_bound_to_json(bound);
  } catch (const nsw::SizeLimitError&) {
    j["extension_bound"] = nullptr;
  }

  std::cout << "check " << (cert.all_ok() && large_ok ? "ok" : "FAILED") << "\n";
  emit(j, opts.out_path);
  return cert.all_ok() && large_ok ? 0 : 4;
}

int run_bench(const std::string& family, int n, int m, std::uint64_t seed,
              const std::string& estimator) {
  nsw::GeneratorSpec spec;
  spec.family = family;
  spec.n = n;
  spec.m = m;
  const nsw::Instance instance = nsw::generate_instance(spec, seed);
  nsw::PipelineConfig config;
  config.seed = seed;
  config.greedy.estimator = estimator == "sample" ? nsw::EstimatorMode::always_sample
                                                  : nsw::EstimatorMode::exact_when_possible;
  const auto start = std::chrono::steady_clock::now();
  const nsw::RunReport report = nsw::run_pipeline(instance, config);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "bench family=" << family << " n=" << n << " m=" << m << " seed=" << seed
            << " iters=" << report.greedy_trace.iterations << " log_nsw=" << report.best_log_nsw
            << " seconds=" << secs << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nash Social Welfare solver for monotone submodular valuations"};
  app.require_subcommand(1);

  CommonOptions solve_opts, exact_opts, compare_opts, check_opts;
  add_solver_flags(app.add_subcommand("solve", "run the approximation pipeline"), &solve_opts);
  {
    auto* cmd = app.add_subcommand("exact", "brute-force optimum (small instances)");
    cmd->add_option("instance", exact_opts.instance_path, "instance JSON file")->required();
    cmd->add_option("--out", exact_opts.out_path, "write the JSON result here");
  }
  add_solver_flags(app.add_subcommand("compare", "pipeline vs brute force"), &compare_opts);
  add_solver_flags(app.add_subcommand("check", "recombination and rounding diagnostics"),
                   &check_opts);

  std::string gen_family = "additive", gen_out;
  int gen_n = 2, gen_m = 4, gen_weight_max = 20;
  double gen_density = 0.4;
  std::uint64_t gen_seed = 0;
  {
    auto* cmd = app.add_subcommand("generate", "write a seeded random instance");
    cmd->add_option("--family", gen_family,
                    "additive | coverage | budget_additive | partition_matroid_rank | tightness");
    cmd->add_option("--n", gen_n, "agent count");
    cmd->add_option("--m", gen_m, "item count");
    cmd->add_option("--density", gen_density, "coverage edge density");
    cmd->add_option("--weight-max", gen_weight_max, "max integer weight");
    cmd->add_option("--seed", gen_seed, "generator seed");
    cmd->add_option("--out", gen_out, "output path")->required();
  }

  std::string bench_family = "coverage", bench_estimator = "sample";
  int bench_n = 10, bench_m = 50;
  std::uint64_t bench_seed = 0;
  {
    auto* cmd = app.add_subcommand("bench", "time one pipeline run");
    cmd->add_option("--family", bench_family, "generator family");
    cmd->add_option("--n", bench_n, "agent count");
    cmd->add_option("--m", bench_m, "item count");
    cmd->add_option("--seed", bench_seed, "seed");
    cmd->add_option("--estimator", bench_estimator, "exact | sample");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are invalid input
  }

  try {
    if (app.got_subcommand("solve")) return run_solve(solve_opts);
    if (app.got_subcommand("exact")) return run_exact(exact_opts);
    if (app.got_subcommand("compare")) return run_compare(compare_opts);
    if (app.got_subcommand("check")) return run_check(check_opts);
    if (app.got_subcommand("generate")) {
      nsw::GeneratorSpec spec;
      spec.family = gen_family;
      spec.n = gen_n;
      spec.m = gen_m;
      spec.density = gen_density;
      spec.weight_max = gen_weight_max;
      nsw::save_instance(nsw::generate_instance(spec, gen_seed), gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    if (app.got_subcommand("bench")) {
      return run_bench(bench_family, bench_n, bench_m, bench_seed, bench_estimator);
    }
  } catch (const nsw::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nsw::SizeLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nsw::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
