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

// Maximum-product bipartite matchings in log-domain. The objective is
// lexicographic: first the number of agents matched at strictly positive
// weight, then the sum of log-weights, then the lexicographically smallest
// assignment vector (agent order, then item index; unmatched sorts last).

#ifndef NSW_MATCHING_HPP
#define NSW_MATCHING_HPP

#include <vector>

#include "nsw/itemset.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

/// Injective partial map from agents to items; -1 means unmatched.
struct Matching {
  std::vector<int> to_item;

  int matched_count() const {
    int c = 0;
    for (int j : to_item) c += (j >= 0);
    return c;
  }

  ItemSet image(int ground) const {
    ItemSet s(ground);
    for (int j : to_item) {
      if (j >= 0) s.set(j);
    }
    return s;
  }

  bool injective() const;
};

struct MaxProductResult {
  Matching matching;
  int positive_count = 0;  // agents matched at strictly positive weight
  double sum_log = 0;      // sum of log(weight) over matched agents
};

/// Zero-weight edges are excluded; agents matchable only at weight 0 stay
/// unmatched. Deterministic output (lexicographically smallest optimal
/// assignment vector).
MaxProductResult max_product_matching(const std::vector<std::vector<double>>& weights);

struct InitialMatchingResult {
  Matching tau;
  ItemSet h;      // matched items
  bool opt_zero;  // fewer than n agents matched at positive value
};

/// Matching maximizing the product of singleton values (one item per agent).
InitialMatchingResult initial_matching(const Instance& instance);

/// Matching sigma into H maximizing the product of v_i(R_i + sigma(i)).
/// Leftover H items are distributed one per remaining unmatched agent
/// (ascending indices), so |H| = n yields a perfect matching onto H.
Matching final_matching(const Instance& instance, const std::vector<ItemSet>& bundles,
                        const ItemSet& h);

}  // namespace nsw

#endif  // NSW_MATCHING_HPP
