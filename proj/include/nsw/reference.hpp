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

// Exact brute-force solvers and the golden instance corpus. Everything here
// is ground truth for verification, never part of the solve pipeline.

#ifndef NSW_REFERENCE_HPP
#define NSW_REFERENCE_HPP

#include <string>
#include <vector>

#include "nsw/itemset.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

struct ExactResult {
  std::vector<int> assignment;       // per item: agent index
  std::vector<ItemSet> allocation;   // per agent bundle
  double log_nsw = kNegInf;          // (1/n) sum ln v_i(S_i); -inf on a zero bundle
  double nsw = 0;
  long long enumerated = 0;
};

/// (1/n) sum ln v_i(S_i). Bundles must be disjoint and, unless
/// allow_unassigned, cover every item. Returns -inf on any zero bundle.
double nsw_value(const Instance& instance, const std::vector<ItemSet>& allocation,
                 bool allow_unassigned = false);

/// Exhaustive search over all n^m assignments (limit n^m <= 10^7).
/// Deterministic tie-break: lexicographically smallest assignment vector.
ExactResult brute_force_nsw(const Instance& instance);

/// Exhaustive search restricted to allocations where H (|H| = n) is
/// distributed as a perfect matching; remaining items unrestricted.
ExactResult brute_force_nsw_matched(const Instance& instance, const ItemSet& h);

struct GoldenInstance {
  Instance instance;
  std::string notes;
};

/// Fixed verification corpus: the tightness construction, a seeded grid of
/// random instances per family (n in {2,3}, m in 3..8), and degenerate
/// cases. Exact results are computed at test time, never stored.
const std::vector<GoldenInstance>& golden_instances();

}  // namespace nsw

#endif  // NSW_REFERENCE_HPP
