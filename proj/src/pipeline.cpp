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

#include "nsw/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "nsw/rounding.hpp"

namespace nsw {

namespace {

constexpr double kApproximationFactor = 380.0;

// Trial ranking uses raw (unscaled) log values so per-agent rescaling can
// never flip the selection; the reported numbers carry the scale shift.
struct TrialValue {
  double raw_log = kNegInf;
  double scaled_log = kNegInf;
};

TrialValue allocation_log_nsw(const Instance& instance, const std::vector<ItemSet>& allocation) {
  TrialValue out;
  double raw_sum = 0, scaled_sum = 0;
  for (int i = 0; i < instance.n; ++i) {
    const double raw = instance.oracles[static_cast<std::size_t>(i)].raw_value(allocation[static_cast<std::size_t>(i)]);
    if (raw <= 0) return out;  // both stay -inf
    raw_sum += std::log(raw);
    scaled_sum += std::log(raw) + instance.oracles[static_cast<std::size_t>(i)].log_scale();
  }
  out.raw_log = raw_sum / static_cast<double>(instance.n);
  out.scaled_log = scaled_sum / static_cast<double>(instance.n);
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(c > 0)) throw InvalidInput("c must be positive");
  if (trials < 1) throw InvalidInput("at least one rounding trial required");
  if (resolved_d() < 2) throw InvalidInput("d must be at least 2");
}

RunReport run_pipeline(const Instance& instance, const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  instance.validate();
  config.validate();
  RunReport report;
  report.n = instance.n;
  report.m = instance.m;
  report.meta = instance.meta;

  const RngKey master = RngKey::root(config.seed);

  InitialMatchingResult initial = initial_matching(instance);
  report.tau = initial.tau;
  report.h = initial.h;
  report.opt_zero = initial.opt_zero;

  if (initial.opt_zero) {
    // No positive-product matching exists. Return the best-effort matching
    // allocation; its value is 0 by definition.
    report.best_allocation.assign(static_cast<std::size_t>(instance.n), ItemSet(instance.m));
    for (int i = 0; i < instance.n; ++i) {
      const int j = initial.tau.to_item[static_cast<std::size_t>(i)];
      if (j >= 0) report.best_allocation[static_cast<std::size_t>(i)].set(j);
    }
    report.best_log_nsw = allocation_log_nsw(instance, report.best_allocation).scaled_log;
    const ItemSet assigned = initial.tau.image(instance.m);
    for (int j = 0; j < instance.m; ++j) {
      if (!assigned.test(j)) report.discarded_items.push_back(j);
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
  }

  report.a_prime = active_agents(instance, initial.h);
  const ItemSet g_prime = initial.h.complement();

  GreedyResult greedy;
  try {
    greedy = iterated_continuous_greedy(instance, report.a_prime, g_prime, config.greedy,
                                        master.child("greedy"));
  } catch (const IterationLimitError& e) {
    report.greedy_trace = e.trace;
    throw PipelineError(e.what(), std::move(report));
  } catch (const InvariantError& e) {
    throw PipelineError(e.what(), std::move(report));
  }
  report.greedy_trace = greedy.trace;
  report.y = greedy.y;

  double best_raw = kNegInf;
  for (int t = 0; t < config.trials; ++t) {
    RoundingOutcome outcome =
        report.y.empty()
            ? RoundingOutcome{std::vector<int>(static_cast<std::size_t>(instance.m), -1),
                              std::vector<ItemSet>(static_cast<std::size_t>(instance.n), ItemSet(instance.m))}
            : randomized_rounding(report.y, master.child("trial").child(static_cast<std::uint64_t>(t)));
    Matching sigma = final_matching(instance, outcome.bundles, initial.h);
    std::vector<ItemSet> allocation = outcome.bundles;
    for (int i = 0; i < instance.n; ++i) {
      const int j = sigma.to_item[static_cast<std::size_t>(i)];
      if (j >= 0) allocation[static_cast<std::size_t>(i)].set(j);
    }
    const TrialValue value = allocation_log_nsw(instance, allocation);
    report.trials.push_back({outcome.assigned_agent, sigma, value.scaled_log});
    if (report.best_trial < 0 || value.raw_log > best_raw) {
      best_raw = value.raw_log;
      report.best_trial = t;
      report.best_allocation = std::move(allocation);
      report.best_log_nsw = value.scaled_log;
    }
  }

  ItemSet assigned(instance.m);
  for (const auto& bundle : report.best_allocation) assigned = assigned.union_with(bundle);
  if (config.assign_leftovers) {
    // Monotone post-process: each leftover goes to the agent with the
    // largest marginal on its current bundle (ties to the lowest index).
    for (int j = 0; j < instance.m; ++j) {
      if (assigned.test(j)) continue;
      int best_agent = 0;
      double best_gain = -1;
      for (int i = 0; i < instance.n; ++i) {
        const double gain =
            instance.oracles[static_cast<std::size_t>(i)].raw_marginal(report.best_allocation[static_cast<std::size_t>(i)], j);
        if (gain > best_gain) {
          best_gain = gain;
          best_agent = i;
        }
      }
      report.best_allocation[static_cast<std::size_t>(best_agent)].set(j);
    }
    report.best_log_nsw = allocation_log_nsw(instance, report.best_allocation).scaled_log;
  } else {
    for (int j = 0; j < instance.m; ++j) {
      if (!assigned.test(j)) report.discarded_items.push_back(j);
    }
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RelaxationCertificate relaxation_certificate(const Instance& instance,
                                           const std::vector<int>& a_prime, const ItemSet& h,
                                           const FractionalAllocation& y, int iterations,
                                           const ExactResult& optimum) {
  RelaxationCertificate cert;
  cert.iterations = iterations;
  const ItemSet g_prime = h.complement();
  double sum = 0;
  for (int i : a_prime) {
    const auto& oracle = instance.oracles[static_cast<std::size_t>(i)];
    const ItemSet star = optimum.allocation[static_cast<std::size_t>(i)].intersect_with(g_prime);
    const double numer = oracle.raw_value(star);
    if (numer == 0) continue;
    const double denom = multilinear::eval_exact_raw(oracle, y.row(i));
    if (denom <= 0) {
      sum = std::numeric_limits<double>::infinity();
      break;
    }
    sum += numer / denom;
  }
  cert.ratio_sum = sum / static_cast<double>(instance.n);
  cert.ratio_ok = cert.ratio_sum <= std::numbers::e + 1e-6;
  cert.iterations_ok =
      iterations <= static_cast<int>(std::ceil(8.0 * std::log(static_cast<double>(instance.n)))) + 2;
  return cert;
}

CompareReport compare_run(const Instance& instance, const PipelineConfig& config) {
  CompareReport out;
  out.run = run_pipeline(instance, config);
  try {
    out.exact = brute_force_nsw(instance);
  } catch (const SizeLimitError&) {
    out.exact.reset();
  }
  if (out.exact) {
    out.run.opt_log_nsw = out.exact->log_nsw;
    const double opt_log = out.exact->log_nsw;
    if (std::isinf(opt_log) && opt_log < 0) {
      out.ratio_ok = true;  // OPT = 0
    } else {
      out.run.ratio = std::exp(out.run.best_log_nsw - opt_log);
      out.ratio_ok = out.run.best_log_nsw >= opt_log - std::log(kApproximationFactor) - 1e-9;
    }
    if (!out.run.opt_zero && !out.run.a_prime.empty()) {
      out.certificate = relaxation_certificate(instance, out.run.a_prime, out.run.h, out.run.y,
                                              out.run.greedy_trace.iterations, *out.exact);
    }
  }
  return out;
}

}  // namespace nsw
