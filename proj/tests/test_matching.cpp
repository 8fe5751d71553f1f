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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsw/generator.hpp"
#include "nsw/matching.hpp"
#include "nsw/rng.hpp"

using namespace nsw;

namespace {

// Exhaustive oracle: best (count, product) over all injective assignments.
struct BestMatching {
  int count = 0;
  double product = 1;
};

void enumerate_matchings(const std::vector<std::vector<double>>& w, std::size_t agent,
                         std::vector<char>& used, int count, double product, BestMatching* best) {
  if (agent == w.size()) {
    if (count > best->count || (count == best->count && product > best->product)) {
      best->count = count;
      best->product = product;
    }
    return;
  }
  enumerate_matchings(w, agent + 1, used, count, product, best);  // leave unmatched
  for (std::size_t j = 0; j < w[agent].size(); ++j) {
    if (used[j] || w[agent][j] <= 0) continue;
    used[j] = 1;
    enumerate_matchings(w, agent + 1, used, count + 1, product * w[agent][j], best);
    used[j] = 0;
  }
}

BestMatching brute_best(const std::vector<std::vector<double>>& w) {
  BestMatching best;
  best.count = -1;
  std::vector<char> used(w.empty() ? 0 : w[0].size(), 0);
  enumerate_matchings(w, 0, used, 0, 1, &best);
  return best;
}

double matching_product(const std::vector<std::vector<double>>& w, const Matching& matching) {
  double product = 1;
  for (std::size_t i = 0; i < matching.to_item.size(); ++i) {
    const int j = matching.to_item[i];
    if (j >= 0) product *= w[i][static_cast<std::size_t>(j)];
  }
  return product;
}

}  // namespace

TEST_CASE("only positive-product matching") {
  const std::vector<std::vector<double>> w = {{2, 0}, {0, 3}};
  const auto result = max_product_matching(w);
  CHECK(result.matching.to_item == std::vector<int>{0, 1});
  CHECK(matching_product(w, result.matching) == 6);
}

TEST_CASE("symmetric ties break lexicographically") {
  const auto result = max_product_matching({{1, 1}, {1, 1}});
  CHECK(result.matching.to_item == std::vector<int>{0, 1});
}

TEST_CASE("product beats greedy row preference") {
  // 4 * 5 = 20 beats 5 * 1 = 5.
  const std::vector<std::vector<double>> w = {{5, 4}, {5, 1}};
  const auto result = max_product_matching(w);
  CHECK(result.matching.to_item == std::vector<int>{1, 0});
  CHECK(matching_product(w, result.matching) == 20);
}

TEST_CASE("matches the exhaustive oracle on random instances") {
  SplitMix64 rng = RngKey::root(7).stream();
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(4));  // up to 5 agents
    const int k = 1 + static_cast<int>(rng.next_below(6));
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (auto& row : w) {
      for (auto& x : row) {
        x = static_cast<double>(rng.next_below(6));  // zeros included
      }
    }
    const auto result = max_product_matching(w);
    const auto best = brute_best(w);
    CHECK(result.matching.injective());
    CHECK(result.positive_count == best.count);
    if (best.count > 0) {
      CHECK(matching_product(w, result.matching) ==
            doctest::Approx(best.product).epsilon(1e-9));
    }
  }
}

namespace {

// Exhaustive lexicographic oracle: enumerates every injective partial
// assignment over positive edges and keeps the (count, product,
// lex-smallest) best. Unmatched ranks after every item index.
void enumerate_lex(const std::vector<std::vector<double>>& w, std::size_t agent,
                   std::vector<char>& used, std::vector<int>& cur, int count, double product,
                   int* best_count, double* best_product, std::vector<int>* best) {
  if (agent == w.size()) {
    auto rank = [&](const std::vector<int>& v, std::size_t i) {
      return v[i] < 0 ? static_cast<int>(w[0].size()) : v[i];
    };
    bool better = false;
    if (count != *best_count) {
      better = count > *best_count;
    } else if (product != *best_product) {
      better = product > *best_product;
    } else {
      for (std::size_t i = 0; i < cur.size(); ++i) {
        if (rank(cur, i) != rank(*best, i)) {
          better = rank(cur, i) < rank(*best, i);
          break;
        }
      }
    }
    if (better) {
      *best_count = count;
      *best_product = product;
      *best = cur;
    }
    return;
  }
  cur[agent] = -1;
  enumerate_lex(w, agent + 1, used, cur, count, product, best_count, best_product, best);
  for (std::size_t j = 0; j < w[agent].size(); ++j) {
    if (used[j] || w[agent][j] <= 0) continue;
    used[j] = 1;
    cur[agent] = static_cast<int>(j);
    enumerate_lex(w, agent + 1, used, cur, count + 1, product * w[agent][j], best_count,
                  best_product, best);
    used[j] = 0;
  }
  cur[agent] = -1;
}

}  // namespace

TEST_CASE("tie-breaking matches the exhaustive lexicographic oracle") {
  // Integer weights keep the products exactly comparable.
  SplitMix64 rng = RngKey::root(23).stream();
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(3));
    const int k = 1 + static_cast<int>(rng.next_below(4));
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (auto& row : w) {
      for (auto& x : row) x = static_cast<double>(rng.next_below(4));  // many ties
    }
    std::vector<char> used(static_cast<std::size_t>(k), 0);
    std::vector<int> cur(static_cast<std::size_t>(n), -1), best;
    int best_count = -1;
    double best_product = -1;
    best.assign(static_cast<std::size_t>(n), -1);
    enumerate_lex(w, 0, used, cur, 0, 1.0, &best_count, &best_product, &best);
    const auto result = max_product_matching(w);
    CHECK(result.matching.to_item == best);
  }
}

TEST_CASE("row scaling leaves the assignment unchanged") {
  // Exactly representable scalings of integer weights preserve every ratio.
  SplitMix64 rng = RngKey::root(13).stream();
  const double lambdas[] = {0.5, 1.0, 2.0, 3.0, 1048576.0, 1e6};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(3));
    const int k = n + static_cast<int>(rng.next_below(3));
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(k), 0.0));
    for (auto& row : w) {
      for (auto& x : row) x = static_cast<double>(1 + rng.next_below(30));
    }
    const auto base = max_product_matching(w);
    auto scaled = w;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      const double lambda = lambdas[(trial + static_cast<int>(i)) % 6];
      for (auto& x : scaled[i]) x *= lambda;
    }
    const auto result = max_product_matching(scaled);
    CHECK(result.matching.to_item == base.matching.to_item);
  }
}

TEST_CASE("empty and degenerate inputs") {
  CHECK(max_product_matching({}).matching.to_item.empty());
  const auto zero = max_product_matching({{0, 0}, {0, 0}});
  CHECK(zero.matching.to_item == std::vector<int>{-1, -1});
  CHECK(zero.positive_count == 0);
  CHECK_THROWS_AS(max_product_matching({{-1.0}}), InvalidInput);
}

TEST_CASE("initial matching on a diagonal instance") {
  Instance inst;
  inst.n = 2;
  inst.m = 2;
  inst.oracles.push_back(ValuationOracle::additive({2, 0}));
  inst.oracles.push_back(ValuationOracle::additive({0, 3}));
  const auto result = initial_matching(inst);
  CHECK(result.tau.to_item == std::vector<int>{0, 1});
  CHECK(result.h == ItemSet::of(2, {0, 1}));
  CHECK_FALSE(result.opt_zero);
}

TEST_CASE("fewer items than agents forces opt_zero") {
  Instance inst;
  inst.n = 2;
  inst.m = 1;
  inst.oracles.push_back(ValuationOracle::additive({2}));
  inst.oracles.push_back(ValuationOracle::additive({3}));
  const auto result = initial_matching(inst);
  CHECK(result.opt_zero);
  CHECK(result.tau.matched_count() == 1);
}

TEST_CASE("initial matching on the tightness construction") {
  const Instance inst = tightness_instance(3);
  const auto result = initial_matching(inst);
  CHECK_FALSE(result.opt_zero);
  CHECK(result.tau.matched_count() == 3);
  for (int i = 0; i < 3; ++i) {
    const int j = result.tau.to_item[static_cast<std::size_t>(i)];
    CHECK(inst.oracles[static_cast<std::size_t>(i)].raw_singleton(j) == 1);
  }
  // The lexicographic rule matches agent i to item i.
  CHECK(result.tau.to_item == std::vector<int>{0, 1, 2});
}

TEST_CASE("final matching with empty bundles reduces to singleton weights") {
  Instance inst;
  inst.n = 2;
  inst.m = 3;
  inst.oracles.push_back(ValuationOracle::additive({2, 0, 9}));
  inst.oracles.push_back(ValuationOracle::additive({0, 3, 9}));
  std::vector<ItemSet> empty(2, ItemSet(3));
  const auto sigma = final_matching(inst, empty, ItemSet::of(3, {0, 1}));
  CHECK(sigma.to_item == std::vector<int>{0, 1});
}

TEST_CASE("final matching single agent combines with its bundle") {
  Instance inst;
  inst.n = 1;
  inst.m = 2;
  inst.oracles.push_back(ValuationOracle::additive({4, 7}));
  std::vector<ItemSet> bundles = {ItemSet::of(2, {0})};
  const auto sigma = final_matching(inst, bundles, ItemSet::of(2, {1}));
  CHECK(sigma.to_item == std::vector<int>{1});
}

TEST_CASE("final matching routes a contested item by product gain") {
  // Agent 0 already holds value 10; both want item 0 of the pool. Verified
  // against enumeration of both matchings on the 2x2 case.
  Instance inst;
  inst.n = 2;
  inst.m = 4;
  inst.oracles.push_back(ValuationOracle::additive({10, 0, 6, 1}));
  inst.oracles.push_back(ValuationOracle::additive({0, 0, 6, 1}));
  std::vector<ItemSet> bundles = {ItemSet::of(4, {0}), ItemSet(4)};
  const ItemSet h = ItemSet::of(4, {2, 3});
  // Products: sigma = {2->0, 3->1}: (10+6) * 1 = 16; swapped: 11 * 6 = 66.
  const auto sigma = final_matching(inst, bundles, h);
  CHECK(sigma.to_item == std::vector<int>{3, 2});
}

TEST_CASE("zero-value leftovers are spread one per unmatched agent") {
  Instance inst;
  inst.n = 2;
  inst.m = 2;
  inst.oracles.push_back(ValuationOracle::additive({1, 0}));
  inst.oracles.push_back(ValuationOracle::additive({1, 0}));
  std::vector<ItemSet> empty(2, ItemSet(2));
  const auto sigma = final_matching(inst, empty, ItemSet::of(2, {0, 1}));
  // Only agent 0 can be matched at positive value; item 1 still goes out.
  CHECK(sigma.to_item == std::vector<int>{0, 1});
  CHECK(sigma.matched_count() == 2);
}

TEST_CASE("final matching onto H of size n is perfect") {
  SplitMix64 rng = RngKey::root(19).stream();
  GeneratorSpec spec;
  spec.family = "additive";
  for (int trial = 0; trial < 10; ++trial) {
    spec.n = 2 + static_cast<int>(rng.next_below(2));
    spec.m = 6;
    const Instance inst = generate_instance(spec, 100 + static_cast<std::uint64_t>(trial));
    ItemSet h(6);
    for (int i = 0; i < spec.n; ++i) h.set(i);
    std::vector<ItemSet> bundles(static_cast<std::size_t>(spec.n), ItemSet(6));
    const auto sigma = final_matching(inst, bundles, h);
    CHECK(sigma.matched_count() == spec.n);
    CHECK(sigma.injective());
    CHECK(h.includes(sigma.image(6)));
  }
}
