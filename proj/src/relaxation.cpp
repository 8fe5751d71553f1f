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

#include "nsw/relaxation.hpp"

#include <algorithm>
#include <cmath>

namespace nsw {

namespace {

struct ObjectiveEstimate {
  double raw_avg_log = 0;   // (1/n) sum ln V_i (unscaled)
  double log_std_error = 0; // combined standard error on the same scale
  bool sampled = false;
};

// Per-agent floor guarding against estimator collapse: values this small
// mean the estimates can no longer be trusted.
std::vector<double> value_floors(const Instance& instance, const std::vector<int>& a_prime,
                                 const ItemSet& g_prime) {
  std::vector<double> floors(a_prime.size(), 0.0);
  const double denom = std::pow(static_cast<double>(instance.m) * instance.n, 2.0);
  for (std::size_t k = 0; k < a_prime.size(); ++k) {
    const auto& oracle = instance.oracles[static_cast<std::size_t>(a_prime[k])];
    double min_pos = 0;
    g_prime.for_each([&](int j) {
      const double s = oracle.raw_singleton(j);
      if (s > 0 && (min_pos == 0 || s < min_pos)) min_pos = s;
    });
    floors[k] = denom > 0 ? min_pos / denom : 0.0;
  }
  return floors;
}

ObjectiveEstimate estimate_objective(const Instance& instance, const std::vector<int>& a_prime,
                                     const FractionalAllocation& y, const GreedyConfig& config,
                                     RngKey key) {
  ObjectiveEstimate est;
  double var = 0;
  for (std::size_t k = 0; k < a_prime.size(); ++k) {
    const int i = a_prime[k];
    const auto& oracle = instance.oracles[static_cast<std::size_t>(i)];
    const auto row = y.row(i);
    const bool exact = config.estimator == EstimatorMode::exact_when_possible &&
                       multilinear::exact_available(oracle, row);
    double v;
    if (exact) {
      v = multilinear::eval_exact_raw(oracle, row);
    } else {
      const EstimateWithError e = multilinear::eval_sample_raw(
          oracle, row, config.samples_per_estimate, key.child(static_cast<std::uint64_t>(i)));
      v = e.mean;
      est.sampled = true;
      if (e.mean > 0) {
        const double rel = e.std_error / e.mean;  // delta method on ln V
        var += rel * rel;
      }
    }
    if (v <= 0) throw InvariantError("objective estimate collapsed to zero");
    est.raw_avg_log += std::log(v);
  }
  est.raw_avg_log /= static_cast<double>(instance.n);
  est.log_std_error = std::sqrt(var) / static_cast<double>(instance.n);
  return est;
}

double scale_shift(const Instance& instance, const std::vector<int>& a_prime) {
  double shift = 0;
  for (int i : a_prime) shift += instance.oracles[static_cast<std::size_t>(i)].log_scale();
  return shift / static_cast<double>(instance.n);
}

}  // namespace

GreedyConfig GreedyConfig::resolved(int n, int m) const {
  GreedyConfig cfg = *this;
  if (cfg.delta == 0) cfg.delta = 1.0 / (4.0 * std::max(1, m));
  if (cfg.samples_per_estimate == 0) {
    cfg.samples_per_estimate = static_cast<long>(
        std::ceil(50.0 * (m + n) * std::log(static_cast<double>(m) * n + 1.0)));
    cfg.samples_per_estimate = std::max<long>(cfg.samples_per_estimate, 1);
  }
  if (!(cfg.delta > 0 && cfg.delta <= 0.5)) throw InvalidInput("delta must lie in (0, 1/2]");
  const double steps = 0.5 / cfg.delta;
  if (std::abs(steps - std::lround(steps)) > 1e-9) {
    throw InvalidInput("delta must divide 1/2 into an integer number of steps");
  }
  if (cfg.gain_threshold <= 0) throw InvalidInput("gain threshold must be positive");
  if (cfg.max_iterations < 1) throw InvalidInput("max iterations must be at least 1");
  if (cfg.samples_per_estimate < 1) throw InvalidInput("sample count must be at least 1");
  return cfg;
}

std::vector<int> active_agents(const Instance& instance, const ItemSet& h) {
  instance.validate();
  const ItemSet g_prime = h.complement();
  std::vector<int> out;
  for (int i = 0; i < instance.n; ++i) {
    if (instance.oracles[static_cast<std::size_t>(i)].raw_value(g_prime) > 0) out.push_back(i);
  }
  return out;
}

namespace {

// Argmax of omega_kj / value_at[k] per item, ties to the lowest agent. A
// true zero value (possible only when a pass is started from the zero
// vector in exact mode) ranks above every finite ratio, matching the
// gradient of the log objective as the value vanishes.
std::vector<int> direction_from_ratios(const std::vector<int>& a_prime, const ItemSet& g_prime,
                                       const std::vector<std::vector<double>>& omega,
                                       const std::vector<double>& value_at) {
  std::vector<int> choice(static_cast<std::size_t>(g_prime.ground()), -1);
  g_prime.for_each([&](int j) {
    double best_ratio = 0;
    int best_k = -1;
    for (std::size_t k = 0; k < a_prime.size(); ++k) {
      const double w = omega[k][static_cast<std::size_t>(j)];
      if (w <= 0) continue;
      const double ratio =
          value_at[k] > 0 ? w / value_at[k] : std::numeric_limits<double>::infinity();
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_k = static_cast<int>(k);
      }
    }
    choice[static_cast<std::size_t>(j)] = best_k;
  });
  return choice;
}

}  // namespace

std::vector<int> greedy_direction(const std::vector<int>& a_prime, const ItemSet& g_prime,
                                  const std::vector<std::vector<double>>& omega,
                                  const std::vector<double>& value_at) {
  for (double v : value_at) {
    if (!(v > 0)) throw InvariantError("greedy direction needs positive value estimates");
  }
  return direction_from_ratios(a_prime, g_prime, omega, value_at);
}

FractionalAllocation continuous_greedy_pass(const Instance& instance,
                                            const std::vector<int>& a_prime,
                                            const ItemSet& g_prime,
                                            const FractionalAllocation& y_start,
                                            const GreedyConfig& config, RngKey key,
                                            GreedyTrace* trace) {
  FractionalAllocation y = y_start;
  for (double& v : y.data) v *= 0.5;

  const std::vector<double> floors = value_floors(instance, a_prime, g_prime);
  const int steps = config.steps();
  std::vector<std::vector<double>> omega(a_prime.size());
  std::vector<double> value_at(a_prime.size(), 0.0);
  std::vector<int> step_dir;
  if (trace) {
    trace->directions.emplace_back();
    if (config.estimator == EstimatorMode::exact_when_possible) trace->step_avg_log.emplace_back();
  }

  for (int s = 0; s < steps; ++s) {
    bool all_exact = true;
    for (std::size_t k = 0; k < a_prime.size(); ++k) {
      const int i = a_prime[k];
      const auto& oracle = instance.oracles[static_cast<std::size_t>(i)];
      const auto row = y.row(i);
      const bool exact = config.estimator == EstimatorMode::exact_when_possible &&
                         multilinear::exact_available(oracle, row);
      if (exact) {
        value_at[k] = multilinear::eval_exact_raw(oracle, row);
        omega[k] = multilinear::partials_exact_raw(oracle, row);
      } else {
        all_exact = false;
        const auto batch = multilinear::sample_value_and_partials(
            oracle, row, config.samples_per_estimate,
            key.child("step").child(static_cast<std::uint64_t>(s)).child(static_cast<std::uint64_t>(i)));
        value_at[k] = batch.value.mean;
        omega[k] = batch.partials;
        // The floor only guards sampled estimates; an exact zero is a true
        // value (a pass started from the zero vector), not a collapse.
        if (value_at[k] < floors[k]) {
          throw InvariantError("estimator collapse: agent value fell below its floor");
        }
      }
    }
    if (trace && !trace->step_avg_log.empty() && all_exact) {
      bool positive = true;
      double obj = 0;
      for (std::size_t k = 0; k < a_prime.size(); ++k) {
        positive = positive && value_at[k] > 0;
        if (positive) obj += std::log(value_at[k]);
      }
      if (positive) trace->step_avg_log.back().push_back(obj / static_cast<double>(instance.n));
    }

    step_dir = direction_from_ratios(a_prime, g_prime, omega, value_at);
    g_prime.for_each([&](int j) {
      const int k = step_dir[static_cast<std::size_t>(j)];
      if (k >= 0) {
        double& cell = y.at(a_prime[static_cast<std::size_t>(k)], j);
        cell = std::min(1.0, cell + config.delta);
      }
    });
    if (trace) trace->directions.back().push_back(step_dir);
  }
  y.validate();
  return y;
}

GreedyResult iterated_continuous_greedy(const Instance& instance, const std::vector<int>& a_prime,
                                        const ItemSet& g_prime, const GreedyConfig& config_in,
                                        RngKey key) {
  instance.validate();
  GreedyResult result;
  result.y = FractionalAllocation(instance.n, instance.m);
  if (a_prime.empty()) return result;
  const GreedyConfig config = config_in.resolved(instance.n, instance.m);
  for (int i : a_prime) {
    if (!(instance.oracles[static_cast<std::size_t>(i)].raw_value(g_prime) > 0)) {
      throw InvalidInput("active agent has zero value for the item pool");
    }
  }

  const double shift = scale_shift(instance, a_prime);
  for (int i : a_prime) {
    g_prime.for_each([&](int j) { result.y.at(i, j) = 1.0 / instance.n; });
  }

  ObjectiveEstimate prev =
      estimate_objective(instance, a_prime, result.y, config, key.child("obj").child(0));
  result.trace.avg_log_per_iteration.push_back(prev.raw_avg_log + shift);

  for (int r = 1;; ++r) {
    if (r > config.max_iterations) {
      throw IterationLimitError("continuous greedy exceeded max iterations", result.trace);
    }
    FractionalAllocation y_next =
        continuous_greedy_pass(instance, a_prime, g_prime, result.y, config,
                               key.child("pass").child(static_cast<std::uint64_t>(r)), &result.trace);
    // Both sides of the stopping rule use the same estimator mode; in
    // sampled mode the previous solution is re-estimated with fresh streams
    // and the gain is discounted by 3 combined standard errors.
    ObjectiveEstimate next = estimate_objective(instance, a_prime, y_next, config,
                                                key.child("obj").child(2ull * static_cast<std::uint64_t>(r)));
    ObjectiveEstimate prev_again =
        (prev.sampled || next.sampled)
            ? estimate_objective(instance, a_prime, result.y, config,
                                 key.child("obj").child(2ull * static_cast<std::uint64_t>(r) + 1))
            : prev;
    double gain = next.raw_avg_log - prev_again.raw_avg_log;
    if (next.sampled || prev_again.sampled) {
      gain -= 3.0 * std::sqrt(next.log_std_error * next.log_std_error +
                              prev_again.log_std_error * prev_again.log_std_error);
    }

    result.y = std::move(y_next);
    result.trace.iterations = r;
    result.trace.avg_log_per_iteration.push_back(next.raw_avg_log + shift);
    prev = next;
    if (gain < config.gain_threshold) break;
  }
  return result;
}

}  // namespace nsw
