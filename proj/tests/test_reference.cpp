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
#include "nsw/reference.hpp"

using namespace nsw;

TEST_CASE("nsw_value basics") {
  Instance inst;
  inst.n = 2;
  inst.m = 2;
  inst.oracles.push_back(ValuationOracle::additive({2, 0}));
  inst.oracles.push_back(ValuationOracle::additive({0, 3}));
  std::vector<ItemSet> alloc = {ItemSet::of(2, {0}), ItemSet::of(2, {1})};
  CHECK(nsw_value(inst, alloc) == doctest::Approx(0.5 * std::log(6.0)).epsilon(1e-12));

  // Any zero bundle collapses the geometric mean.
  std::vector<ItemSet> swapped = {ItemSet::of(2, {1}), ItemSet::of(2, {0})};
  CHECK(nsw_value(inst, swapped) == kNegInf);

  std::vector<ItemSet> overlapping = {ItemSet::of(2, {0}), ItemSet::of(2, {0, 1})};
  CHECK_THROWS_AS(nsw_value(inst, overlapping), InvalidInput);

  std::vector<ItemSet> partial = {ItemSet::of(2, {0}), ItemSet(2)};
  CHECK_THROWS_AS(nsw_value(inst, partial), InvalidInput);
  CHECK(nsw_value(inst, partial, /*allow_unassigned=*/true) == kNegInf);
}

TEST_CASE("per-agent scaling shifts log values additively") {
  Instance inst;
  inst.n = 2;
  inst.m = 2;
  inst.oracles.push_back(ValuationOracle::additive({2, 0}));
  inst.oracles.push_back(ValuationOracle::additive({0, 3}));
  std::vector<ItemSet> alloc = {ItemSet::of(2, {0}), ItemSet::of(2, {1})};
  const double base = nsw_value(inst, alloc);
  Instance scaled = inst;
  scaled.oracles[0] = scaled.oracles[0].with_scale(1e6);
  scaled.oracles[1] = scaled.oracles[1].with_scale(1e-6);
  const double shift = 0.5 * (std::log(1e6) + std::log(1e-6));
  CHECK(nsw_value(scaled, alloc) == doctest::Approx(base + shift).epsilon(1e-12));
}

TEST_CASE("brute force on identical additive agents") {
  Instance inst;
  inst.n = 2;
  inst.m = 3;
  inst.oracles.push_back(ValuationOracle::additive({1, 1, 1}));
  inst.oracles.push_back(ValuationOracle::additive({1, 1, 1}));
  const auto result = brute_force_nsw(inst);
  // Optimum is the 2-1 split: sqrt(2).
  CHECK(result.log_nsw == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
  CHECK(result.enumerated == 8);
  // Lexicographically smallest maximizer: agent 0 takes {0,1}, agent 1 {2}.
  CHECK(result.assignment == std::vector<int>{0, 0, 1});
}

TEST_CASE("single agent gets everything") {
  GeneratorSpec spec;
  spec.family = "coverage";
  spec.n = 1;
  spec.m = 5;
  const Instance inst = generate_instance(spec, 3);
  const auto result = brute_force_nsw(inst);
  CHECK(result.log_nsw ==
        doctest::Approx(std::log(inst.oracles[0].value(ItemSet::full(5)))).epsilon(1e-12));
}

TEST_CASE("stored log matches nsw_value of the stored allocation") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GeneratorSpec spec;
    spec.family = "budget_additive";
    spec.n = 3;
    spec.m = 5;
    const Instance inst = generate_instance(spec, seed);
    const auto result = brute_force_nsw(inst);
    CHECK(result.log_nsw == nsw_value(inst, result.allocation));
  }
}

namespace {

// Slow independent route: plain recursion, fresh oracle queries, no
// incremental state. Returns the best log value.
double slow_best(const Instance& inst, std::vector<ItemSet>& bundles, int item,
                 const ItemSet* h, const std::vector<int>* h_count) {
  if (item == inst.m) {
    if (h != nullptr) {
      for (int i = 0; i < inst.n; ++i) {
        if ((*h_count)[static_cast<std::size_t>(i)] != 1) return kNegInf;
      }
    }
    return nsw_value(inst, bundles);
  }
  double best = kNegInf;
  for (int i = 0; i < inst.n; ++i) {
    bundles[static_cast<std::size_t>(i)].set(item);
    std::vector<int> counts;
    if (h != nullptr && h->test(item)) {
      counts = *h_count;
      ++counts[static_cast<std::size_t>(i)];
    }
    const std::vector<int>* next_counts = (h != nullptr && h->test(item)) ? &counts : h_count;
    best = std::max(best, slow_best(inst, bundles, item + 1, h, next_counts));
    bundles[static_cast<std::size_t>(i)].reset(item);
  }
  return best;
}

}  // namespace

TEST_CASE("brute force agrees with a from-scratch recursion") {
  for (const char* family : {"additive", "coverage", "budget_additive", "partition_matroid_rank"}) {
    GeneratorSpec spec;
    spec.family = family;
    spec.n = 3;
    spec.m = 5;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Instance inst = generate_instance(spec, 700 + seed);
      std::vector<ItemSet> bundles(3, ItemSet(5));
      const double slow = slow_best(inst, bundles, 0, nullptr, nullptr);
      const auto fast = brute_force_nsw(inst);
      if (std::isinf(slow)) {
        CHECK(std::isinf(fast.log_nsw));
      } else {
        CHECK(fast.log_nsw == doctest::Approx(slow).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("matched brute force agrees with a from-scratch recursion") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GeneratorSpec spec;
    spec.family = seed % 2 == 0 ? "coverage" : "additive";
    spec.n = 2;
    spec.m = 5;
    const Instance inst = generate_instance(spec, 710 + seed);
    const auto initial = initial_matching(inst);
    if (initial.opt_zero) continue;
    std::vector<ItemSet> bundles(2, ItemSet(5));
    std::vector<int> counts(2, 0);
    const double slow = slow_best(inst, bundles, 0, &initial.h, &counts);
    const auto fast = brute_force_nsw_matched(inst, initial.h);
    if (std::isinf(slow)) {
      CHECK(std::isinf(fast.log_nsw));
    } else {
      CHECK(fast.log_nsw == doctest::Approx(slow).epsilon(1e-12));
    }
  }
}

TEST_CASE("size limit") {
  GeneratorSpec spec;
  spec.family = "additive";
  spec.n = 3;
  spec.m = 16;  // 3^16 = 43e6 > 1e7
  const Instance inst = generate_instance(spec, 1);
  CHECK_THROWS_AS(brute_force_nsw(inst), SizeLimitError);
}

TEST_CASE("tightness construction values") {
  const Instance inst = tightness_instance(3);
  const auto opt = brute_force_nsw(inst);
  CHECK(opt.log_nsw == doctest::Approx(std::log(3.0) / 3.0).epsilon(1e-12));

  const auto initial = initial_matching(inst);
  REQUIRE(initial.h.count() == 3);
  const auto matched = brute_force_nsw_matched(inst, initial.h);
  CHECK(matched.log_nsw == doctest::Approx(0.0).epsilon(1e-12));
  // The gap between the optimum and the matching-restricted optimum.
  CHECK(opt.log_nsw - matched.log_nsw ==
        doctest::Approx(std::log(3.0) / 3.0).epsilon(1e-9));
}

TEST_CASE("matched brute force is a restriction") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GeneratorSpec spec;
    spec.family = seed % 2 == 0 ? "additive" : "coverage";
    spec.n = 2;
    spec.m = 5;
    const Instance inst = generate_instance(spec, seed);
    const auto initial = initial_matching(inst);
    if (initial.opt_zero) continue;
    const auto full = brute_force_nsw(inst);
    const auto matched = brute_force_nsw_matched(inst, initial.h);
    CHECK(full.log_nsw >= matched.log_nsw - 1e-12);
  }
}

TEST_CASE("matched brute force needs |H| = n") {
  const Instance inst = tightness_instance(3);
  CHECK_THROWS_AS(brute_force_nsw_matched(inst, ItemSet::of(6, {0})), InvalidInput);
}

TEST_CASE("matched brute force with one agent equals the full search") {
  GeneratorSpec spec;
  spec.family = "additive";
  spec.n = 1;
  spec.m = 4;
  const Instance inst = generate_instance(spec, 9);
  const auto initial = initial_matching(inst);
  const auto full = brute_force_nsw(inst);
  const auto matched = brute_force_nsw_matched(inst, initial.h);
  CHECK(full.log_nsw == doctest::Approx(matched.log_nsw).epsilon(1e-12));
}

TEST_CASE("golden corpus composition and hygiene") {
  const auto& corpus = golden_instances();
  int grid = 0, degenerate = 0;
  bool has_tightness = false, has_small = false;
  for (const auto& g : corpus) {
    g.instance.validate();
    if (g.notes == "tightness") has_tightness = true;
    if (g.instance.m < g.instance.n) has_small = true;
    if (g.instance.meta.generator.rfind("degenerate", 0) == 0) ++degenerate;
    if (g.instance.n >= 2 && g.instance.n <= 3 && g.instance.m >= 3 && g.instance.m <= 8 &&
        g.notes != "tightness") {
      ++grid;
    }
  }
  CHECK(has_tightness);
  CHECK(has_small);
  CHECK(degenerate >= 3);
  CHECK(grid >= 200);
}

TEST_CASE("every golden oracle is monotone submodular") {
  for (const auto& g : golden_instances()) {
    for (const auto& oracle : g.instance.oracles) {
      const auto report = check_properties(oracle);
      CHECK(report.exhaustive);
      CHECK(report.ok());
    }
  }
}

TEST_CASE("golden corpus is reproducible") {
  const auto& corpus = golden_instances();
  GeneratorSpec spec;
  spec.family = "additive";
  spec.n = 2;
  spec.m = 3;
  // The first grid entry is additive, n=2, m=3, local seed 0.
  const auto regenerated = generate_instance(spec, corpus[1].instance.meta.seed);
  CHECK(regenerated.oracles[0].as_additive()->weights ==
        corpus[1].instance.oracles[0].as_additive()->weights);
}
