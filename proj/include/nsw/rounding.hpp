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

// Independent randomized rounding of the fractional solution (the
// algorithmic step) plus the large/small item split and restricted rounding
// used as runnable diagnostics.

#ifndef NSW_ROUNDING_HPP
#define NSW_ROUNDING_HPP

#include <span>
#include <vector>

#include "nsw/multilinear.hpp"
#include "nsw/rng.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

struct RoundingOutcome {
  std::vector<int> assigned_agent;  // per item: agent index, -1 unassigned
  std::vector<ItemSet> bundles;     // derived per-agent sets
};

/// Independently assigns each item j to agent i with probability y_ij (and
/// to nobody with the leftover probability). Deterministic given the key.
RoundingOutcome randomized_rounding(const FractionalAllocation& y, RngKey key);

/// Greedy max-marginal prefix of items whose fractional mass first reaches
/// c; requires sum_j y_row[j] >= c (pad with dummies first otherwise).
/// Postconditions: c <= mass(L) <= c+1, and every remaining item's marginal
/// on top of the restricted vector is at most V(y^(L)) / c.
ItemSet find_large_set(const Instance& instance, int agent, std::span<const double> y_row,
                       double c);

struct PaddedProblem {
  Instance instance;  // original items plus ceil(c) * n zero-valued dummies
  FractionalAllocation y;
  int original_items = 0;
};

/// Appends ceil(c) * n zero-valued dummy items and spreads each listed
/// agent's mass deficit uniformly over them, keeping columns feasible.
PaddedProblem pad_with_dummies(const Instance& instance, const FractionalAllocation& y,
                               const std::vector<int>& agents_to_pad, double c);

struct SparsifiedSolution {
  std::vector<ItemSet> large_sets;               // L_i (empty for idle agents)
  std::vector<ItemSet> small_sets;               // S_i = small items rounded to i
  std::vector<std::vector<double>> y_sparse;     // y_i^(L_i) + 1_{S_i}
  RoundingOutcome outcome;                       // the shared draw Z
};

/// Diagnostic sparsification: keeps large items fractional and rounds only
/// the small ones. The result need not be jointly feasible. Uses the same
/// draw as randomized_rounding(y, key), so S_i is always a subset of R_i.
SparsifiedSolution restricted_randomized_rounding(const Instance& instance,
                                                  const FractionalAllocation& y,
                                                  const std::vector<int>& a_prime, double c,
                                                  RngKey key);

}  // namespace nsw

#endif  // NSW_ROUNDING_HPP
