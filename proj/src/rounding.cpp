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

#include "nsw/rounding.hpp"

#include <algorithm>
#include <cmath>

namespace nsw {

RoundingOutcome randomized_rounding(const FractionalAllocation& y, RngKey key) {
  y.validate();
  RoundingOutcome out;
  out.assigned_agent.assign(static_cast<std::size_t>(y.items), -1);
  out.bundles.assign(static_cast<std::size_t>(y.agents), ItemSet(y.items));
  SplitMix64 rng = key.stream();
  for (int j = 0; j < y.items; ++j) {
    const double u = rng.next_unit();
    double acc = 0;
    for (int i = 0; i < y.agents; ++i) {
      acc += y.at(i, j);
      if (u < acc) {
        out.assigned_agent[static_cast<std::size_t>(j)] = i;
        out.bundles[static_cast<std::size_t>(i)].set(j);
        break;
      }
    }
  }
  return out;
}

ItemSet find_large_set(const Instance& instance, int agent, std::span<const double> y_row,
                       double c) {
  instance.validate();
  if (agent < 0 || agent >= instance.n) throw InvalidInput("agent index out of range");
  if (!(c > 0)) throw InvalidInput("large-item threshold c must be positive");
  double mass = 0;
  for (double v : y_row) mass += v;
  if (mass < c - 1e-9) {
    throw InvalidInput("row mass below c; pad the instance with dummy items first");
  }
  const auto& oracle = instance.oracles[static_cast<std::size_t>(agent)];

  ItemSet large(instance.m);
  std::vector<double> restricted(y_row.size(), 0.0);  // y^(L), grown as L grows
  double picked_mass = 0;
  int picked = 0;
  while (picked_mass < c && picked < instance.m) {
    const double base = multilinear::eval_exact_raw(oracle, restricted);
    int best = -1;
    double best_gain = -1;
    for (int j = 0; j < instance.m; ++j) {
      if (large.test(j)) continue;
      ItemSet one(instance.m);
      one.set(j);
      const double gain = multilinear::eval_overlay_exact_raw(oracle, restricted, one) - base;
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    large.set(best);
    restricted[static_cast<std::size_t>(best)] = y_row[static_cast<std::size_t>(best)];
    picked_mass += y_row[static_cast<std::size_t>(best)];
    ++picked;
  }
  return large;
}

PaddedProblem pad_with_dummies(const Instance& instance, const FractionalAllocation& y,
                               const std::vector<int>& agents_to_pad, double c) {
  instance.validate();
  if (!(c > 0)) throw InvalidInput("large-item threshold c must be positive");
  const int extra = static_cast<int>(std::ceil(c)) * instance.n;
  PaddedProblem out;
  out.original_items = instance.m;
  out.instance = instance.extended(extra);
  out.y = FractionalAllocation(instance.n, instance.m + extra);
  for (int i = 0; i < instance.n; ++i) {
    for (int j = 0; j < instance.m; ++j) out.y.at(i, j) = y.at(i, j);
  }
  for (int i : agents_to_pad) {
    double mass = 0;
    for (int j = 0; j < instance.m; ++j) mass += y.at(i, j);
    const double deficit = std::max(0.0, c - mass);
    if (deficit == 0) continue;
    // Uniform spread keeps every dummy column at most c / ceil(c) <= 1.
    for (int j = instance.m; j < instance.m + extra; ++j) {
      out.y.at(i, j) = deficit / static_cast<double>(extra);
    }
  }
  out.y.validate();
  return out;
}

SparsifiedSolution restricted_randomized_rounding(const Instance& instance,
                                                  const FractionalAllocation& y,
                                                  const std::vector<int>& a_prime, double c,
                                                  RngKey key) {
  instance.validate();
  SparsifiedSolution out;
  out.large_sets.assign(static_cast<std::size_t>(instance.n), ItemSet(instance.m));
  out.small_sets.assign(static_cast<std::size_t>(instance.n), ItemSet(instance.m));
  out.y_sparse.assign(static_cast<std::size_t>(instance.n),
                      std::vector<double>(static_cast<std::size_t>(instance.m), 0.0));
  for (int i : a_prime) {
    out.large_sets[static_cast<std::size_t>(i)] = find_large_set(instance, i, y.row(i), c);
  }
  out.outcome = randomized_rounding(y, key);
  for (int i : a_prime) {
    const ItemSet& large = out.large_sets[static_cast<std::size_t>(i)];
    ItemSet small = out.outcome.bundles[static_cast<std::size_t>(i)].minus(large);
    out.small_sets[static_cast<std::size_t>(i)] = small;
    auto& row = out.y_sparse[static_cast<std::size_t>(i)];
    large.for_each([&](int j) { row[static_cast<std::size_t>(j)] = y.at(i, j); });
    small.for_each([&](int j) { row[static_cast<std::size_t>(j)] = 1.0; });
  }
  return out;
}

}  // namespace nsw
