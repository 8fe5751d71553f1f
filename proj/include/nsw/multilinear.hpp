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

// Multilinear extension V(y) = E[v(R)] where R includes item j independently
// with probability y_j. Exact evaluation via closed forms (additive,
// coverage, partition rank) or support enumeration, and unbiased Monte Carlo
// estimation with derived per-sample streams.

#ifndef NSW_MULTILINEAR_HPP
#define NSW_MULTILINEAR_HPP

#include <span>
#include <vector>

#include "nsw/rng.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

/// Fractional assignment matrix y in [0,1]^{agents x items} with per-item
/// column sums at most 1 (up to kFeasibilityTol).
struct FractionalAllocation {
  int agents = 0;
  int items = 0;
  std::vector<double> data;  // row-major

  FractionalAllocation() = default;
  FractionalAllocation(int n, int m)
      : agents(n), items(m), data(static_cast<std::size_t>(n) * static_cast<std::size_t>(m), 0.0) {}

  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * items + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * items + j]; }

  std::span<double> row(int i) { return {data.data() + static_cast<std::size_t>(i) * items, static_cast<std::size_t>(items)}; }
  std::span<const double> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * items, static_cast<std::size_t>(items)};
  }

  double column_sum(int j) const {
    double s = 0;
    for (int i = 0; i < agents; ++i) s += at(i, j);
    return s;
  }

  /// Throws InvariantError unless entries lie in [0,1] and column sums are
  /// at most 1 + tol.
  void validate(double tol = kFeasibilityTol) const;

  bool empty() const { return data.empty(); }
};

/// Row with all coordinates outside `keep` zeroed (the restricted vector).
std::vector<double> restrict_row(std::span<const double> row, const ItemSet& keep);

/// Row with all coordinates in `force_one` set to 1 (the set overlay).
std::vector<double> overlay_row(std::span<const double> row, const ItemSet& force_one);

struct EstimateWithError {
  double mean = 0;
  double std_error = 0;
  long samples = 0;
};

namespace multilinear {

/// Limit on the number of strictly fractional coordinates for support
/// enumeration when no closed form applies.
inline constexpr int kMaxEnumerationSupport = 25;

/// True when eval_exact can evaluate this oracle at this point.
bool exact_available(const ValuationOracle& oracle, std::span<const double> row);

/// Exact V(y). Closed forms for additive, coverage and partition rank;
/// support enumeration otherwise (throws SizeLimitError past the limit).
double eval_exact_raw(const ValuationOracle& oracle, std::span<const double> row);
double eval_exact(const ValuationOracle& oracle, std::span<const double> row);

/// Unbiased Monte Carlo estimate of V(y); deterministic given the key.
EstimateWithError eval_sample_raw(const ValuationOracle& oracle, std::span<const double> row,
                                  long samples, RngKey key);
EstimateWithError eval_sample(const ValuationOracle& oracle, std::span<const double> row,
                              long samples, RngKey key);

/// Exact partial derivative dV/dy_j = V(y with y_j=1) - V(y with y_j=0).
double partial_exact_raw(const ValuationOracle& oracle, std::span<const double> row, int j);
double partial_exact(const ValuationOracle& oracle, std::span<const double> row, int j);

/// Sampled partial derivative: mean of v(R+j) - v(R-j).
EstimateWithError partial_sampled_raw(const ValuationOracle& oracle, std::span<const double> row,
                                      int j, long samples, RngKey key);
EstimateWithError partial_sampled(const ValuationOracle& oracle, std::span<const double> row,
                                  int j, long samples, RngKey key);

/// All exact partial derivatives at once (same values as partial_exact).
std::vector<double> partials_exact_raw(const ValuationOracle& oracle, std::span<const double> row);

/// V(y with coordinates of S forced to 1), exact.
double eval_overlay_exact_raw(const ValuationOracle& oracle, std::span<const double> row,
                              const ItemSet& force_one);
double eval_overlay_exact(const ValuationOracle& oracle, std::span<const double> row,
                          const ItemSet& force_one);

/// One shared sample pass estimating the value and every partial derivative;
/// used by the relaxation solver. All quantities are raw (unscaled).
struct BatchEstimates {
  EstimateWithError value;
  std::vector<double> partials;  // mean of v(R+j) - v(R-j) per item
};
BatchEstimates sample_value_and_partials(const ValuationOracle& oracle,
                                         std::span<const double> row, long samples, RngKey key);

}  // namespace multilinear

}  // namespace nsw

#endif  // NSW_MULTILINEAR_HPP
