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

#include "nsw/reference.hpp"

#include <algorithm>
#include <cmath>

#include "nsw/generator.hpp"

namespace nsw {

namespace {

constexpr double kMaxEnumerations = 1e7;

// Mixed-radix reflected Gray enumeration over assignment vectors: exactly
// one item changes agent per step, so bundle values update incrementally.
// Calls visit(digits, changed_item, old_agent, new_agent); changed_item is
// -1 on the first visit.
template <class Visit>
void gray_enumerate(int radix, const std::vector<int>& positions, std::vector<int>& digits,
                    Visit visit) {
  const int width = static_cast<int>(positions.size());
  visit(-1, 0, 0);
  if (radix < 2 || width == 0) return;
  std::vector<int> focus(static_cast<std::size_t>(width) + 1);
  for (int t = 0; t <= width; ++t) focus[static_cast<std::size_t>(t)] = t;
  std::vector<int> dir(static_cast<std::size_t>(width), 1);
  while (true) {
    const int t = focus[0];
    focus[0] = 0;
    if (t == width) break;
    const int item = positions[static_cast<std::size_t>(t)];
    const int old_agent = digits[static_cast<std::size_t>(item)];
    const int new_agent = old_agent + dir[static_cast<std::size_t>(t)];
    digits[static_cast<std::size_t>(item)] = new_agent;
    if (new_agent == 0 || new_agent == radix - 1) {
      dir[static_cast<std::size_t>(t)] = -dir[static_cast<std::size_t>(t)];
      focus[static_cast<std::size_t>(t)] = focus[static_cast<std::size_t>(t) + 1];
      focus[static_cast<std::size_t>(t) + 1] = t + 1;
    }
    visit(item, old_agent, new_agent);
  }
}

struct BestTracker {
  double product = -1;
  std::vector<int> assignment;

  // Strictly larger product wins; equal products fall back to the
  // lexicographically smallest assignment vector.
  void offer(double product_candidate, const std::vector<int>& digits) {
    if (product_candidate > product) {
      product = product_candidate;
      assignment = digits;
    } else if (product_candidate == product &&
               std::lexicographical_compare(digits.begin(), digits.end(), assignment.begin(),
                                            assignment.end())) {
      assignment = digits;
    }
  }
};

ExactResult finish(const Instance& instance, const BestTracker& best, long long enumerated) {
  ExactResult out;
  out.assignment = best.assignment;
  out.allocation.assign(static_cast<std::size_t>(instance.n), ItemSet(instance.m));
  for (int j = 0; j < instance.m; ++j) {
    out.allocation[static_cast<std::size_t>(best.assignment[static_cast<std::size_t>(j)])].set(j);
  }
  out.log_nsw = nsw_value(instance, out.allocation);
  out.nsw = std::isinf(out.log_nsw) ? 0.0 : std::exp(out.log_nsw);
  out.enumerated = enumerated;
  return out;
}

}  // namespace

double nsw_value(const Instance& instance, const std::vector<ItemSet>& allocation,
                 bool allow_unassigned) {
  instance.validate();
  if (static_cast<int>(allocation.size()) != instance.n) {
    throw InvalidInput("allocation needs one bundle per agent");
  }
  std::vector<int> owners(static_cast<std::size_t>(instance.m), 0);
  for (const auto& bundle : allocation) {
    if (bundle.ground() != instance.m) throw InvalidInput("bundle ground size mismatch");
    bundle.for_each([&](int j) { ++owners[static_cast<std::size_t>(j)]; });
  }
  for (int j = 0; j < instance.m; ++j) {
    const int c = owners[static_cast<std::size_t>(j)];
    if (c > 1) throw InvalidInput("overlapping bundles");
    if (c == 0 && !allow_unassigned) throw InvalidInput("allocation leaves an item unassigned");
  }
  double sum = 0;
  for (int i = 0; i < instance.n; ++i) {
    const double v = instance.oracles[static_cast<std::size_t>(i)].value(allocation[static_cast<std::size_t>(i)]);
    if (v <= 0.0) return kNegInf;
    sum += std::log(v);
  }
  return sum / static_cast<double>(instance.n);
}

ExactResult brute_force_nsw(const Instance& instance) {
  instance.validate();
  const double total = std::pow(static_cast<double>(instance.n), static_cast<double>(instance.m));
  if (total > kMaxEnumerations) throw SizeLimitError("instance too large for brute force");

  std::vector<ValuationOracle::BundleEval> evals;
  evals.reserve(static_cast<std::size_t>(instance.n));
  for (const auto& o : instance.oracles) evals.emplace_back(o);
  std::vector<double> values(static_cast<std::size_t>(instance.n), 0.0);
  // Start at the all-zero assignment vector: everything to agent 0.
  std::vector<int> digits(static_cast<std::size_t>(instance.m), 0);
  for (int j = 0; j < instance.m; ++j) evals[0].add(j);
  values[0] = evals[0].raw_value();

  std::vector<int> positions(static_cast<std::size_t>(instance.m));
  for (int j = 0; j < instance.m; ++j) positions[static_cast<std::size_t>(j)] = j;

  BestTracker best;
  long long enumerated = 0;
  gray_enumerate(instance.n, positions, digits, [&](int item, int from, int to) {
    if (item >= 0) {
      evals[static_cast<std::size_t>(from)].remove(item);
      evals[static_cast<std::size_t>(to)].add(item);
      values[static_cast<std::size_t>(from)] = evals[static_cast<std::size_t>(from)].raw_value();
      values[static_cast<std::size_t>(to)] = evals[static_cast<std::size_t>(to)].raw_value();
    }
    double product = 1;
    for (double v : values) product *= v;
    best.offer(product, digits);
    ++enumerated;
  });
  return finish(instance, best, enumerated);
}

ExactResult brute_force_nsw_matched(const Instance& instance, const ItemSet& h) {
  instance.validate();
  if (h.count() != instance.n) throw InvalidInput("matched brute force needs |H| = n");
  const double total = std::pow(static_cast<double>(instance.n), static_cast<double>(instance.m));
  if (total > kMaxEnumerations) throw SizeLimitError("instance too large for brute force");

  const std::vector<int> h_items = h.indices();
  std::vector<int> free_items;
  for (int j = 0; j < instance.m; ++j) {
    if (!h.test(j)) free_items.push_back(j);
  }

  BestTracker best;
  long long enumerated = 0;
  std::vector<int> perm(static_cast<std::size_t>(instance.n));
  for (int i = 0; i < instance.n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::vector<ValuationOracle::BundleEval> evals;
  for (const auto& o : instance.oracles) evals.emplace_back(o);
  std::vector<double> values(static_cast<std::size_t>(instance.n), 0.0);
  std::vector<int> digits(static_cast<std::size_t>(instance.m), 0);

  do {
    for (auto& e : evals) e.reset();
    // H items by the current matching, free items all to agent 0.
    for (std::size_t c = 0; c < h_items.size(); ++c) {
      digits[static_cast<std::size_t>(h_items[c])] = perm[c];
      evals[static_cast<std::size_t>(perm[c])].add(h_items[c]);
    }
    for (int j : free_items) {
      digits[static_cast<std::size_t>(j)] = 0;
      evals[0].add(j);
    }
    for (int i = 0; i < instance.n; ++i) values[static_cast<std::size_t>(i)] = evals[static_cast<std::size_t>(i)].raw_value();

    gray_enumerate(instance.n, free_items, digits, [&](int item, int from, int to) {
      if (item >= 0) {
        evals[static_cast<std::size_t>(from)].remove(item);
        evals[static_cast<std::size_t>(to)].add(item);
        values[static_cast<std::size_t>(from)] = evals[static_cast<std::size_t>(from)].raw_value();
        values[static_cast<std::size_t>(to)] = evals[static_cast<std::size_t>(to)].raw_value();
      }
      double product = 1;
      for (double v : values) product *= v;
      best.offer(product, digits);
      ++enumerated;
    });
  } while (std::next_permutation(perm.begin(), perm.end()));

  return finish(instance, best, enumerated);
}

const std::vector<GoldenInstance>& golden_instances() {
  static const std::vector<GoldenInstance> corpus = [] {
    std::vector<GoldenInstance> out;
    out.push_back({tightness_instance(3), "tightness"});

    const std::string families[] = {"additive", "coverage", "budget_additive",
                                    "partition_matroid_rank"};
    int family_index = 0;
    for (const auto& family : families) {
      for (int n : {2, 3}) {
        for (int m = 3; m <= 8; ++m) {
          for (int s = 0; s < 5; ++s) {
            GeneratorSpec spec;
            spec.family = family;
            spec.n = n;
            spec.m = m;
            const std::uint64_t seed =
                static_cast<std::uint64_t>(100000 * family_index + 1000 * n + 10 * m + s);
            out.push_back({generate_instance(spec, seed),
                           family + "/n=" + std::to_string(n) + "/m=" + std::to_string(m) +
                               "/s=" + std::to_string(s)});
          }
        }
      }
      ++family_index;
    }

    // Degenerate cases.
    {
      Instance inst;
      inst.n = 2;
      inst.m = 3;
      inst.oracles.push_back(ValuationOracle::additive({3, 1, 2}));
      inst.oracles.push_back(ValuationOracle::additive({0, 0, 0}));
      inst.meta = {"degenerate_zero_agent", 0};
      out.push_back({std::move(inst), "zero-value agent"});
    }
    {
      Instance inst;
      inst.n = 3;
      inst.m = 2;
      inst.oracles.push_back(ValuationOracle::additive({2, 1}));
      inst.oracles.push_back(ValuationOracle::additive({1, 3}));
      inst.oracles.push_back(ValuationOracle::additive({1, 1}));
      inst.meta = {"degenerate_m_lt_n", 0};
      out.push_back({std::move(inst), "fewer items than agents"});
    }
    {
      GeneratorSpec spec;
      spec.family = "coverage";
      spec.n = 1;
      spec.m = 4;
      out.push_back({generate_instance(spec, 7), "single agent"});
    }
    {
      Instance inst;
      inst.n = 2;
      inst.m = 3;
      std::vector<std::vector<int>> empty_incidence(3);
      inst.oracles.push_back(ValuationOracle::coverage({1, 1}, empty_incidence));
      inst.oracles.push_back(ValuationOracle::coverage({1, 1}, empty_incidence));
      inst.meta = {"degenerate_all_zero", 0};
      out.push_back({std::move(inst), "all-zero valuations"});
    }
    return out;
  }();
  return corpus;
}

}  // namespace nsw
