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

#include "nsw/generator.hpp"

#include <algorithm>

#include "nsw/rng.hpp"

namespace nsw {

namespace {

std::vector<double> random_weights(SplitMix64& rng, int m, int lo, int hi) {
  std::vector<double> w(static_cast<std::size_t>(m));
  for (auto& x : w) {
    x = static_cast<double>(lo + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(hi - lo + 1))));
  }
  return w;
}

ValuationOracle random_additive(SplitMix64& rng, const GeneratorSpec& spec) {
  return ValuationOracle::additive(random_weights(rng, spec.m, 0, spec.weight_max));
}

ValuationOracle random_coverage(SplitMix64& rng, const GeneratorSpec& spec) {
  const int universe = spec.m + 2;
  std::vector<double> element_weights(static_cast<std::size_t>(universe));
  for (auto& w : element_weights) {
    w = static_cast<double>(1 + static_cast<int>(rng.next_below(3)));
  }
  std::vector<std::vector<int>> incidence(static_cast<std::size_t>(spec.m));
  for (int j = 0; j < spec.m; ++j) {
    for (int e = 0; e < universe; ++e) {
      if (rng.next_unit() < spec.density) incidence[static_cast<std::size_t>(j)].push_back(e);
    }
  }
  return ValuationOracle::coverage(std::move(element_weights), std::move(incidence));
}

ValuationOracle random_budget_additive(SplitMix64& rng, const GeneratorSpec& spec) {
  std::vector<double> w = random_weights(rng, spec.m, 1, std::max(1, spec.weight_max / 2));
  double sum = 0, wmax = 0;
  for (double x : w) {
    sum += x;
    wmax = std::max(wmax, x);
  }
  const int slack = std::max(0, static_cast<int>(sum / 2.0 - wmax));
  const double cap = wmax + static_cast<double>(rng.next_below(static_cast<std::uint64_t>(slack + 1)));
  return ValuationOracle::budget_additive(std::move(w), cap);
}

ValuationOracle random_partition_rank(SplitMix64& rng, const GeneratorSpec& spec) {
  const int num_blocks = std::max(1, spec.m / 2);
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(num_blocks));
  for (int j = 0; j < spec.m; ++j) {
    blocks[rng.next_below(static_cast<std::uint64_t>(num_blocks))].push_back(j);
  }
  std::vector<int> caps(static_cast<std::size_t>(num_blocks));
  for (auto& c : caps) c = 1 + static_cast<int>(rng.next_below(2));
  return ValuationOracle::partition_rank(spec.m, std::move(blocks), std::move(caps));
}

}  // namespace

Instance tightness_instance(int n) {
  if (n < 3 || n % 3 != 0) throw InvalidInput("tightness instance needs n divisible by 3");
  Instance inst;
  inst.n = n;
  inst.m = 2 * n;
  // Items 0..n-1 are the intended matched set; n..2n-1 the leftovers.
  for (int i = 0; i < n / 3; ++i) {
    std::vector<double> w(static_cast<std::size_t>(inst.m), 0.0);
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = 1.0;
    inst.oracles.push_back(ValuationOracle::additive(std::move(w)));
  }
  for (int i = n / 3; i < n; ++i) {
    std::vector<double> w(static_cast<std::size_t>(inst.m), 1.0);
    inst.oracles.push_back(ValuationOracle::budget_additive(std::move(w), 1.0));
  }
  inst.meta = {"tightness", 0};
  inst.validate();
  return inst;
}

Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.family == "tightness") {
    Instance inst = tightness_instance(spec.n);
    inst.meta.seed = seed;
    return inst;
  }
  if (spec.n < 1 || spec.m < 0) throw InvalidInput("generator needs n >= 1 and m >= 0");
  if (spec.density < 0.0 || spec.density > 1.0) throw InvalidInput("density must lie in [0,1]");
  if (spec.weight_max < 0) throw InvalidInput("weight_max must be nonnegative");
  Instance inst;
  inst.n = spec.n;
  inst.m = spec.m;
  RngKey key = RngKey::root(seed).child(spec.family);
  for (int i = 0; i < spec.n; ++i) {
    SplitMix64 rng = key.child(static_cast<std::uint64_t>(i)).stream();
    if (spec.family == "additive") {
      inst.oracles.push_back(random_additive(rng, spec));
    } else if (spec.family == "coverage") {
      inst.oracles.push_back(random_coverage(rng, spec));
    } else if (spec.family == "budget_additive") {
      inst.oracles.push_back(random_budget_additive(rng, spec));
    } else if (spec.family == "partition_matroid_rank") {
      inst.oracles.push_back(random_partition_rank(rng, spec));
    } else {
      throw InvalidInput("unknown generator family: " + spec.family);
    }
  }
  inst.meta = {spec.family, seed};
  inst.validate();
  return inst;
}

}  // namespace nsw
