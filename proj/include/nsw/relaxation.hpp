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

// Iterated continuous greedy over the fractional-assignment polytope on the
// unmatched items: repeatedly halve the solution, follow the per-item
// gradient-ratio direction for t in [1/2, 1], and stop once a pass no longer
// gains 1/8 per agent in log value.

#ifndef NSW_RELAXATION_HPP
#define NSW_RELAXATION_HPP

#include <cmath>
#include <vector>

#include "nsw/multilinear.hpp"
#include "nsw/rng.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

enum class EstimatorMode {
  exact_when_possible,  // exact evaluation whenever the oracle admits it
  always_sample,
};

struct GreedyConfig {
  double delta = 0;              // step size; 0 means the default 1/(4m)
  long samples_per_estimate = 0; // 0 means ceil(50 (m+n) ln(mn+1))
  double gain_threshold = 0.125; // natural-log gain per agent required to iterate
  int max_iterations = 64;
  EstimatorMode estimator = EstimatorMode::exact_when_possible;

  /// Fills defaults for an n-agent, m-item problem and validates that delta
  /// splits [1/2, 1] into whole steps.
  GreedyConfig resolved(int n, int m) const;
  int steps() const { return static_cast<int>(std::lround(0.5 / delta)); }
};

struct GreedyTrace {
  int iterations = 0;
  // (1/n) sum over active agents of log V_i(y^(r)), including iteration 0.
  std::vector<double> avg_log_per_iteration;
  // Chosen direction per pass and step: item -> agent index (-1 idle).
  std::vector<std::vector<std::vector<int>>> directions;
  // Exact mode only: per-pass per-step objective, for monotonicity checks.
  std::vector<std::vector<double>> step_avg_log;
};

class IterationLimitError : public InvariantError {
 public:
  IterationLimitError(const std::string& msg, GreedyTrace trace)
      : InvariantError(msg), trace(std::move(trace)) {}
  GreedyTrace trace;
};

struct GreedyResult {
  FractionalAllocation y;
  GreedyTrace trace;
};

/// Agents with positive value for the item pool G' = complement of H.
std::vector<int> active_agents(const Instance& instance, const ItemSet& h);

/// Separable LP step: each item goes entirely to the active agent maximizing
/// omega_kj / value_at[k] (ties to the lowest agent index); items whose best
/// ratio is 0 stay idle. Throws InvariantError if some value_at[k] <= 0.
std::vector<int> greedy_direction(const std::vector<int>& a_prime, const ItemSet& g_prime,
                                  const std::vector<std::vector<double>>& omega,
                                  const std::vector<double>& value_at);

/// One continuous-greedy pass: y(1/2) = y_start / 2, then steps of size
/// delta up to t = 1. Column sums never exceed 1.
FractionalAllocation continuous_greedy_pass(const Instance& instance,
                                            const std::vector<int>& a_prime,
                                            const ItemSet& g_prime,
                                            const FractionalAllocation& y_start,
                                            const GreedyConfig& config, RngKey key,
                                            GreedyTrace* trace = nullptr);

/// The full iterated solver. Starts from y_ij = 1/n on A' x G'.
/// Preconditions: v_i(G') > 0 for every i in A'. Empty A' yields an empty
/// solution.
GreedyResult iterated_continuous_greedy(const Instance& instance, const std::vector<int>& a_prime,
                                        const ItemSet& g_prime, const GreedyConfig& config,
                                        RngKey key);

}  // namespace nsw

#endif  // NSW_RELAXATION_HPP
