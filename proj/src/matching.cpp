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

#include "nsw/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogTieTol = 1e-9;

// Min-cost max-cardinality bipartite matching by successive shortest
// augmenting paths (Bellman-Ford relaxation; edge cost is -log weight).
// Agents/items can be masked out; `forced` pins an agent to an item.
struct Assignment {
  int count = 0;
  double sum_log = 0;
  std::vector<int> to_item;
};

Assignment solve_assignment(const std::vector<std::vector<double>>& logw,
                            const std::vector<char>& agent_on, const std::vector<char>& item_on) {
  const int n = static_cast<int>(logw.size());
  const int k = n > 0 ? static_cast<int>(logw[0].size()) : 0;
  std::vector<int> item_of(static_cast<std::size_t>(n), -1);
  std::vector<int> agent_of(static_cast<std::size_t>(k), -1);

  while (true) {
    // Multi-source shortest paths over the residual graph.
    std::vector<double> dist_agent(static_cast<std::size_t>(n), kInf);
    std::vector<double> dist_item(static_cast<std::size_t>(k), kInf);
    std::vector<int> parent_item(static_cast<std::size_t>(k), -1);  // agent we came from
    for (int i = 0; i < n; ++i) {
      if (agent_on[static_cast<std::size_t>(i)] && item_of[static_cast<std::size_t>(i)] < 0) {
        dist_agent[static_cast<std::size_t>(i)] = 0;
      }
    }
    bool changed = true;
    for (int round = 0; round <= n + k + 1 && changed; ++round) {
      changed = false;
      for (int i = 0; i < n; ++i) {
        if (!agent_on[static_cast<std::size_t>(i)] || dist_agent[static_cast<std::size_t>(i)] == kInf) continue;
        for (int j = 0; j < k; ++j) {
          if (!item_on[static_cast<std::size_t>(j)] || logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == -kInf) continue;
          if (item_of[static_cast<std::size_t>(i)] == j) continue;
          const double nd = dist_agent[static_cast<std::size_t>(i)] - logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          if (nd < dist_item[static_cast<std::size_t>(j)] - 1e-15) {
            dist_item[static_cast<std::size_t>(j)] = nd;
            parent_item[static_cast<std::size_t>(j)] = i;
            changed = true;
          }
        }
      }
      for (int j = 0; j < k; ++j) {
        const int i = agent_of[static_cast<std::size_t>(j)];
        if (i < 0 || dist_item[static_cast<std::size_t>(j)] == kInf) continue;
        const double nd = dist_item[static_cast<std::size_t>(j)] + logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (nd < dist_agent[static_cast<std::size_t>(i)] - 1e-15) {
          dist_agent[static_cast<std::size_t>(i)] = nd;
          changed = true;
        }
      }
    }
    int best_item = -1;
    for (int j = 0; j < k; ++j) {
      if (!item_on[static_cast<std::size_t>(j)] || agent_of[static_cast<std::size_t>(j)] >= 0) continue;
      if (dist_item[static_cast<std::size_t>(j)] == kInf) continue;
      if (best_item < 0 || dist_item[static_cast<std::size_t>(j)] < dist_item[static_cast<std::size_t>(best_item)]) {
        best_item = j;
      }
    }
    if (best_item < 0) break;
    // Augment along parent pointers.
    int j = best_item;
    while (j >= 0) {
      const int i = parent_item[static_cast<std::size_t>(j)];
      const int next_j = item_of[static_cast<std::size_t>(i)];
      item_of[static_cast<std::size_t>(i)] = j;
      agent_of[static_cast<std::size_t>(j)] = i;
      j = next_j;
    }
  }

  Assignment out;
  out.to_item = item_of;
  for (int i = 0; i < n; ++i) {
    if (item_of[static_cast<std::size_t>(i)] >= 0) {
      ++out.count;
      out.sum_log += logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(item_of[static_cast<std::size_t>(i)])];
    }
  }
  return out;
}

}  // namespace

bool Matching::injective() const {
  std::vector<int> seen;
  for (int j : to_item) {
    if (j < 0) continue;
    if (std::find(seen.begin(), seen.end(), j) != seen.end()) return false;
    seen.push_back(j);
  }
  return true;
}

MaxProductResult max_product_matching(const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  const int k = n > 0 ? static_cast<int>(weights[0].size()) : 0;
  std::vector<std::vector<double>> logw(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(k), -kInf));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(weights[static_cast<std::size_t>(i)].size()) != k) {
      throw InvalidInput("weight matrix rows must have equal length");
    }
    for (int j = 0; j < k; ++j) {
      const double w = weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be finite and >= 0");
      if (w > 0.0) logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::log(w);
    }
  }

  std::vector<char> agent_on(static_cast<std::size_t>(n), 1), item_on(static_cast<std::size_t>(k), 1);
  const Assignment opt = solve_assignment(logw, agent_on, item_on);

  // Lexicographic refinement: fix each agent in turn to the smallest item
  // (unmatched last) that still permits an optimal completion.
  MaxProductResult result;
  result.matching.to_item.assign(static_cast<std::size_t>(n), -1);
  result.positive_count = opt.count;
  result.sum_log = opt.sum_log;
  int fixed_count = 0;
  double fixed_log = 0;
  for (int i = 0; i < n; ++i) {
    agent_on[static_cast<std::size_t>(i)] = 0;
    int chosen = -1;
    for (int j = 0; j < k; ++j) {
      if (!item_on[static_cast<std::size_t>(j)] || logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == -kInf) continue;
      item_on[static_cast<std::size_t>(j)] = 0;
      const Assignment sub = solve_assignment(logw, agent_on, item_on);
      item_on[static_cast<std::size_t>(j)] = 1;
      const int count = fixed_count + 1 + sub.count;
      const double total = fixed_log + logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + sub.sum_log;
      if (count == opt.count && total >= opt.sum_log - kLogTieTol) {
        chosen = j;
        break;
      }
    }
    if (chosen >= 0) {
      result.matching.to_item[static_cast<std::size_t>(i)] = chosen;
      item_on[static_cast<std::size_t>(chosen)] = 0;
      ++fixed_count;
      fixed_log += logw[static_cast<std::size_t>(i)][static_cast<std::size_t>(chosen)];
    }
    // If no item works the agent stays unmatched, which is always feasible
    // for some optimal completion when count below was achievable.
  }
  result.sum_log = fixed_log;
  result.positive_count = fixed_count;
  if (fixed_count != opt.count) {
    throw InvariantError("lexicographic refinement lost matching cardinality");
  }
  return result;
}

InitialMatchingResult initial_matching(const Instance& instance) {
  instance.validate();
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(instance.n),
                                           std::vector<double>(static_cast<std::size_t>(instance.m), 0.0));
  for (int i = 0; i < instance.n; ++i) {
    for (int j = 0; j < instance.m; ++j) {
      weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          instance.oracles[static_cast<std::size_t>(i)].raw_singleton(j);
    }
  }
  InitialMatchingResult out{.tau = Matching{}, .h = ItemSet(instance.m), .opt_zero = false};
  MaxProductResult mp = max_product_matching(weights);
  out.tau = std::move(mp.matching);
  out.h = out.tau.image(instance.m);
  out.opt_zero = mp.positive_count < instance.n;
  return out;
}

Matching final_matching(const Instance& instance, const std::vector<ItemSet>& bundles,
                        const ItemSet& h) {
  instance.validate();
  if (static_cast<int>(bundles.size()) != instance.n) {
    throw InvalidInput("one bundle per agent required");
  }
  const std::vector<int> h_items = h.indices();
  const int k = static_cast<int>(h_items.size());
  std::vector<std::vector<double>> weights(static_cast<std::size_t>(instance.n),
                                           std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int i = 0; i < instance.n; ++i) {
    for (int col = 0; col < k; ++col) {
      ItemSet with = bundles[static_cast<std::size_t>(i)];
      with.set(h_items[static_cast<std::size_t>(col)]);
      weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] =
          instance.oracles[static_cast<std::size_t>(i)].raw_value(with);
    }
  }
  MaxProductResult mp = max_product_matching(weights);
  Matching sigma;
  sigma.to_item.assign(static_cast<std::size_t>(instance.n), -1);
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < instance.n; ++i) {
    const int col = mp.matching.to_item[static_cast<std::size_t>(i)];
    if (col >= 0) {
      sigma.to_item[static_cast<std::size_t>(i)] = h_items[static_cast<std::size_t>(col)];
      used[static_cast<std::size_t>(col)] = 1;
    }
  }
  // Zero-value leftovers: one per remaining agent, lowest indices first.
  int col = 0;
  for (int i = 0; i < instance.n; ++i) {
    if (sigma.to_item[static_cast<std::size_t>(i)] >= 0) continue;
    while (col < k && used[static_cast<std::size_t>(col)]) ++col;
    if (col >= k) break;
    sigma.to_item[static_cast<std::size_t>(i)] = h_items[static_cast<std::size_t>(col)];
    used[static_cast<std::size_t>(col)] = 1;
  }
  return sigma;
}

}  // namespace nsw
