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

#include "nsw/valuations.hpp"

#include <algorithm>
#include <cmath>

namespace nsw {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

void check_nonnegative(const std::vector<double>& xs, const std::string& what) {
  for (double x : xs) {
    require(std::isfinite(x) && x >= 0.0, what + " must be finite and nonnegative");
  }
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::additive: return "additive";
    case Family::coverage: return "coverage";
    case Family::budget_additive: return "budget_additive";
    case Family::partition_matroid_rank: return "partition_matroid_rank";
    case Family::explicit_table: return "explicit_table";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "additive") return Family::additive;
  if (name == "coverage") return Family::coverage;
  if (name == "budget_additive") return Family::budget_additive;
  if (name == "partition_matroid_rank") return Family::partition_matroid_rank;
  if (name == "explicit_table") return Family::explicit_table;
  throw InvalidInput("unknown valuation family: " + name);
}

ValuationOracle ValuationOracle::additive(std::vector<double> weights) {
  check_nonnegative(weights, "additive weights");
  ValuationOracle o;
  o.family_ = Family::additive;
  o.m_ = o.base_m_ = static_cast<int>(weights.size());
  o.params_ = AdditiveParams{std::move(weights)};
  o.finalize();
  return o;
}

ValuationOracle ValuationOracle::coverage(std::vector<double> element_weights,
                                          std::vector<std::vector<int>> incidence) {
  check_nonnegative(element_weights, "coverage element weights");
  const int universe = static_cast<int>(element_weights.size());
  for (const auto& elems : incidence) {
    for (int e : elems) {
      require(e >= 0 && e < universe, "coverage incidence references unknown element");
    }
  }
  ValuationOracle o;
  o.family_ = Family::coverage;
  o.m_ = o.base_m_ = static_cast<int>(incidence.size());
  o.params_ = CoverageParams{std::move(element_weights), std::move(incidence)};
  o.finalize();
  return o;
}

ValuationOracle ValuationOracle::budget_additive(std::vector<double> weights, double cap) {
  check_nonnegative(weights, "budget-additive weights");
  require(std::isfinite(cap) && cap >= 0.0, "budget cap must be finite and nonnegative");
  ValuationOracle o;
  o.family_ = Family::budget_additive;
  o.m_ = o.base_m_ = static_cast<int>(weights.size());
  o.params_ = BudgetAdditiveParams{std::move(weights), cap};
  o.finalize();
  return o;
}

ValuationOracle ValuationOracle::partition_rank(int ground_size,
                                                std::vector<std::vector<int>> blocks,
                                                std::vector<int> capacities) {
  require(ground_size >= 0, "ground size must be nonnegative");
  require(blocks.size() == capacities.size(), "one capacity per block required");
  std::vector<int> seen(static_cast<std::size_t>(ground_size), 0);
  for (const auto& block : blocks) {
    for (int j : block) {
      require(j >= 0 && j < ground_size, "block references unknown item");
      require(seen[static_cast<std::size_t>(j)]++ == 0, "blocks must be disjoint");
    }
  }
  for (int s : seen) require(s == 1, "blocks must cover every item");
  for (int cap : capacities) require(cap >= 0, "block capacities must be nonnegative");
  ValuationOracle o;
  o.family_ = Family::partition_matroid_rank;
  o.m_ = o.base_m_ = ground_size;
  o.params_ = PartitionRankParams{std::move(blocks), std::move(capacities)};
  o.finalize();
  return o;
}

ValuationOracle ValuationOracle::explicit_table_unchecked(std::vector<double> table) {
  require(!table.empty(), "explicit table must be nonempty");
  const std::size_t size = table.size();
  require((size & (size - 1)) == 0, "explicit table length must be a power of two");
  int m = 0;
  while ((1ull << m) < size) ++m;
  require(m <= 25, "explicit table ground set too large");
  require(table[0] == 0.0, "explicit table must have v(empty) = 0");
  check_nonnegative(table, "explicit table values");
  ValuationOracle o;
  o.family_ = Family::explicit_table;
  o.m_ = o.base_m_ = m;
  o.properties_checked_ = false;
  o.params_ = ExplicitTableParams{std::move(table)};
  o.finalize();
  return o;
}

ValuationOracle ValuationOracle::explicit_table(std::vector<double> table) {
  ValuationOracle o = explicit_table_unchecked(std::move(table));
  if (o.m_ <= 12) {
    PropertyReport report = check_properties(o);
    if (!report.monotone) throw InvalidInput("explicit table is not monotone");
    if (!report.submodular) throw InvalidInput("explicit table is not submodular");
    o.properties_checked_ = true;
  }
  return o;
}

ValuationOracle ValuationOracle::with_scale(double lambda) const {
  require(std::isfinite(lambda) && lambda > 0.0, "scale must be finite and positive");
  ValuationOracle o = *this;
  o.scale_ *= lambda;
  o.log_scale_ = std::log(o.scale_);
  return o;
}

ValuationOracle ValuationOracle::extended(int extra) const {
  require(extra >= 0, "extension size must be nonnegative");
  ValuationOracle o = *this;
  o.m_ += extra;
  // Families other than explicit tables absorb the new items into their
  // parameters so the oracle stays serializable; tables keep base_m_ and
  // ignore high bits instead.
  switch (family_) {
    case Family::additive: {
      auto& p = std::get<AdditiveParams>(o.params_);
      p.weights.resize(static_cast<std::size_t>(o.m_), 0.0);
      o.base_m_ = o.m_;
      break;
    }
    case Family::coverage: {
      auto& p = std::get<CoverageParams>(o.params_);
      p.incidence.resize(static_cast<std::size_t>(o.m_));
      o.base_m_ = o.m_;
      break;
    }
    case Family::budget_additive: {
      auto& p = std::get<BudgetAdditiveParams>(o.params_);
      p.weights.resize(static_cast<std::size_t>(o.m_), 0.0);
      o.base_m_ = o.m_;
      break;
    }
    case Family::partition_matroid_rank: {
      auto& p = std::get<PartitionRankParams>(o.params_);
      if (extra > 0) {
        std::vector<int> block;
        for (int j = base_m_; j < o.m_; ++j) block.push_back(j);
        p.blocks.push_back(std::move(block));
        p.capacities.push_back(0);
      }
      o.base_m_ = o.m_;
      break;
    }
    case Family::explicit_table:
      break;  // masks are truncated to base_m_ bits in raw_value
  }
  o.finalize();
  return o;
}

void ValuationOracle::finalize() {
  element_items_.clear();
  block_of_.clear();
  if (const auto* p = as_coverage()) {
    element_items_.resize(p->element_weights.size());
    for (std::size_t j = 0; j < p->incidence.size(); ++j) {
      for (int e : p->incidence[j]) {
        element_items_[static_cast<std::size_t>(e)].push_back(static_cast<int>(j));
      }
    }
  } else if (const auto* p = as_partition_rank()) {
    block_of_.assign(static_cast<std::size_t>(m_), -1);
    for (std::size_t b = 0; b < p->blocks.size(); ++b) {
      for (int j : p->blocks[b]) block_of_[static_cast<std::size_t>(j)] = static_cast<int>(b);
    }
  }
  singletons_.assign(static_cast<std::size_t>(m_), 0.0);
  for (int j = 0; j < m_; ++j) {
    ItemSet s(m_);
    s.set(j);
    singletons_[static_cast<std::size_t>(j)] = raw_value(s);
  }
}

double ValuationOracle::raw_value(const ItemSet& s) const {
  if (s.ground() != m_) throw InvalidInput("item set ground size mismatch");
  switch (family_) {
    case Family::additive: {
      const auto& p = std::get<AdditiveParams>(params_);
      double sum = 0;
      s.for_each([&](int j) { sum += p.weights[static_cast<std::size_t>(j)]; });
      return sum;
    }
    case Family::coverage: {
      const auto& p = std::get<CoverageParams>(params_);
      std::vector<char> covered(p.element_weights.size(), 0);
      s.for_each([&](int j) {
        for (int e : p.incidence[static_cast<std::size_t>(j)]) {
          covered[static_cast<std::size_t>(e)] = 1;
        }
      });
      double sum = 0;
      for (std::size_t e = 0; e < covered.size(); ++e) {
        if (covered[e]) sum += p.element_weights[e];
      }
      return sum;
    }
    case Family::budget_additive: {
      const auto& p = std::get<BudgetAdditiveParams>(params_);
      double sum = 0;
      s.for_each([&](int j) { sum += p.weights[static_cast<std::size_t>(j)]; });
      return std::min(sum, p.cap);
    }
    case Family::partition_matroid_rank: {
      const auto& p = std::get<PartitionRankParams>(params_);
      std::vector<int> counts(p.blocks.size(), 0);
      s.for_each([&](int j) {
        int b = block_of_[static_cast<std::size_t>(j)];
        if (b >= 0) ++counts[static_cast<std::size_t>(b)];
      });
      int rank = 0;
      for (std::size_t b = 0; b < counts.size(); ++b) {
        rank += std::min(counts[b], p.capacities[b]);
      }
      return static_cast<double>(rank);
    }
    case Family::explicit_table: {
      const auto& p = std::get<ExplicitTableParams>(params_);
      std::uint64_t mask = s.low_mask();
      if (base_m_ < 64) mask &= (1ull << base_m_) - 1;
      return p.table[mask];
    }
  }
  return 0;
}

double ValuationOracle::raw_marginal(const ItemSet& s, int j) const {
  if (j < 0 || j >= m_) throw InvalidInput("item index out of range");
  ItemSet with = s;
  with.set(j);
  ItemSet without = s;
  without.reset(j);
  return raw_value(with) - raw_value(without);
}

void ValuationOracle::raw_marginals_all(const ItemSet& s, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(m_)) {
    throw InvalidInput("marginal output span size mismatch");
  }
  switch (family_) {
    case Family::additive: {
      const auto& p = std::get<AdditiveParams>(params_);
      for (int j = 0; j < m_; ++j) out[static_cast<std::size_t>(j)] = p.weights[static_cast<std::size_t>(j)];
      return;
    }
    case Family::coverage: {
      const auto& p = std::get<CoverageParams>(params_);
      std::vector<int> cover_count(p.element_weights.size(), 0);
      s.for_each([&](int j) {
        for (int e : p.incidence[static_cast<std::size_t>(j)]) {
          ++cover_count[static_cast<std::size_t>(e)];
        }
      });
      for (int j = 0; j < m_; ++j) {
        const bool in_s = s.test(j);
        double gain = 0;
        for (int e : p.incidence[static_cast<std::size_t>(j)]) {
          const int others = cover_count[static_cast<std::size_t>(e)] - (in_s ? 1 : 0);
          if (others == 0) gain += p.element_weights[static_cast<std::size_t>(e)];
        }
        out[static_cast<std::size_t>(j)] = gain;
      }
      return;
    }
    case Family::budget_additive: {
      const auto& p = std::get<BudgetAdditiveParams>(params_);
      double sum = 0;
      s.for_each([&](int j) { sum += p.weights[static_cast<std::size_t>(j)]; });
      for (int j = 0; j < m_; ++j) {
        const double w = p.weights[static_cast<std::size_t>(j)];
        const double base = s.test(j) ? sum - w : sum;
        out[static_cast<std::size_t>(j)] = std::min(base + w, p.cap) - std::min(base, p.cap);
      }
      return;
    }
    case Family::partition_matroid_rank: {
      const auto& p = std::get<PartitionRankParams>(params_);
      std::vector<int> counts(p.blocks.size(), 0);
      s.for_each([&](int j) {
        int b = block_of_[static_cast<std::size_t>(j)];
        if (b >= 0) ++counts[static_cast<std::size_t>(b)];
      });
      for (int j = 0; j < m_; ++j) {
        const int b = block_of_[static_cast<std::size_t>(j)];
        if (b < 0) {
          out[static_cast<std::size_t>(j)] = 0;
          continue;
        }
        const int without = counts[static_cast<std::size_t>(b)] - (s.test(j) ? 1 : 0);
        out[static_cast<std::size_t>(j)] =
            (without < p.capacities[static_cast<std::size_t>(b)]) ? 1.0 : 0.0;
      }
      return;
    }
    case Family::explicit_table: {
      const auto& p = std::get<ExplicitTableParams>(params_);
      std::uint64_t mask = s.low_mask();
      if (base_m_ < 64) mask &= (1ull << base_m_) - 1;
      for (int j = 0; j < m_; ++j) {
        if (j >= base_m_) {
          out[static_cast<std::size_t>(j)] = 0;
          continue;
        }
        const std::uint64_t bit = 1ull << j;
        out[static_cast<std::size_t>(j)] = p.table[mask | bit] - p.table[mask & ~bit];
      }
      return;
    }
  }
}

ValuationOracle::BundleEval::BundleEval(const ValuationOracle& oracle) : oracle_(&oracle) {
  reset();
}

void ValuationOracle::BundleEval::reset() {
  sum_ = 0;
  covered_ = 0;
  mask_ = 0;
  rank_ = 0;
  switch (oracle_->family_) {
    case Family::coverage:
      counts_.assign(oracle_->as_coverage()->element_weights.size(), 0);
      break;
    case Family::partition_matroid_rank:
      counts_.assign(oracle_->as_partition_rank()->blocks.size(), 0);
      break;
    default:
      counts_.clear();
  }
}

void ValuationOracle::BundleEval::add(int j) {
  switch (oracle_->family_) {
    case Family::additive:
      sum_ += oracle_->as_additive()->weights[static_cast<std::size_t>(j)];
      break;
    case Family::budget_additive:
      sum_ += oracle_->as_budget_additive()->weights[static_cast<std::size_t>(j)];
      break;
    case Family::coverage: {
      const auto& p = *oracle_->as_coverage();
      for (int e : p.incidence[static_cast<std::size_t>(j)]) {
        if (counts_[static_cast<std::size_t>(e)]++ == 0) {
          covered_ += p.element_weights[static_cast<std::size_t>(e)];
        }
      }
      break;
    }
    case Family::partition_matroid_rank: {
      const auto& p = *oracle_->as_partition_rank();
      const int b = oracle_->block_of_[static_cast<std::size_t>(j)];
      if (b >= 0 && counts_[static_cast<std::size_t>(b)]++ < p.capacities[static_cast<std::size_t>(b)]) {
        ++rank_;
      }
      break;
    }
    case Family::explicit_table:
      if (j < oracle_->base_m_) mask_ |= (1ull << j);
      break;
  }
}

void ValuationOracle::BundleEval::remove(int j) {
  switch (oracle_->family_) {
    case Family::additive:
      sum_ -= oracle_->as_additive()->weights[static_cast<std::size_t>(j)];
      break;
    case Family::budget_additive:
      sum_ -= oracle_->as_budget_additive()->weights[static_cast<std::size_t>(j)];
      break;
    case Family::coverage: {
      const auto& p = *oracle_->as_coverage();
      for (int e : p.incidence[static_cast<std::size_t>(j)]) {
        if (--counts_[static_cast<std::size_t>(e)] == 0) {
          covered_ -= p.element_weights[static_cast<std::size_t>(e)];
        }
      }
      break;
    }
    case Family::partition_matroid_rank: {
      const auto& p = *oracle_->as_partition_rank();
      const int b = oracle_->block_of_[static_cast<std::size_t>(j)];
      if (b >= 0 && --counts_[static_cast<std::size_t>(b)] < p.capacities[static_cast<std::size_t>(b)]) {
        --rank_;
      }
      break;
    }
    case Family::explicit_table:
      if (j < oracle_->base_m_) mask_ &= ~(1ull << j);
      break;
  }
}

double ValuationOracle::BundleEval::raw_value() const {
  switch (oracle_->family_) {
    case Family::additive:
      return sum_;
    case Family::budget_additive:
      return std::min(sum_, oracle_->as_budget_additive()->cap);
    case Family::coverage:
      return covered_;
    case Family::partition_matroid_rank:
      return static_cast<double>(rank_);
    case Family::explicit_table:
      return oracle_->as_explicit_table()->table[mask_];
  }
  return 0;
}

namespace {

ItemSet mask_to_set(int m, std::uint64_t mask) {
  ItemSet s(m);
  for (int j = 0; j < m; ++j) {
    if ((mask >> j) & 1ull) s.set(j);
  }
  return s;
}

}  // namespace

PropertyReport check_properties(const ValuationOracle& oracle, RngKey sample_key) {
  PropertyReport report;
  const int m = oracle.ground_size();
  if (m <= 12) {
    const std::uint64_t full = 1ull << m;
    std::vector<double> v(full);
    for (std::uint64_t mask = 0; mask < full; ++mask) {
      v[mask] = oracle.raw_value(mask_to_set(m, mask));
    }
    for (std::uint64_t mask = 0; mask < full && report.monotone; ++mask) {
      for (int j = 0; j < m; ++j) {
        if ((mask >> j) & 1ull) continue;
        if (v[mask | (1ull << j)] < v[mask]) {
          report.monotone = false;
          report.monotone_witness = {mask_to_set(m, mask), mask_to_set(m, mask | (1ull << j))};
          break;
        }
      }
    }
    // Pairwise-marginal form: v(S+j) + v(S+k) >= v(S+j+k) + v(S).
    for (std::uint64_t mask = 0; mask < full && report.submodular; ++mask) {
      for (int j = 0; j < m && report.submodular; ++j) {
        if ((mask >> j) & 1ull) continue;
        for (int k = j + 1; k < m; ++k) {
          if ((mask >> k) & 1ull) continue;
          const std::uint64_t bj = 1ull << j, bk = 1ull << k;
          if (v[mask | bj] + v[mask | bk] < v[mask | bj | bk] + v[mask]) {
            report.submodular = false;
            report.submodular_witness = {mask_to_set(m, mask | bj), mask_to_set(m, mask | bk)};
            break;
          }
        }
      }
    }
    return report;
  }

  report.exhaustive = false;
  SplitMix64 rng = sample_key.stream();
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    ItemSet s(m);
    for (int j = 0; j < m; ++j) {
      if (rng.next_unit() < 0.5) s.set(j);
    }
    int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    s.reset(j);
    s.reset(k);
    ItemSet sj = s, sk = s, sjk = s;
    sj.set(j);
    sk.set(k);
    sjk.set(j);
    sjk.set(k);
    if (report.monotone && oracle.raw_value(sj) < oracle.raw_value(s)) {
      report.monotone = false;
      report.monotone_witness = {s, sj};
    }
    if (j != k && report.submodular &&
        oracle.raw_value(sj) + oracle.raw_value(sk) <
            oracle.raw_value(sjk) + oracle.raw_value(s)) {
      report.submodular = false;
      report.submodular_witness = {sj, sk};
    }
    if (!report.monotone && !report.submodular) break;
  }
  return report;
}

void Instance::validate() const {
  if (n < 1) throw InvalidInput("instance needs at least one agent");
  if (m < 0) throw InvalidInput("item count must be nonnegative");
  if (static_cast<int>(oracles.size()) != n) {
    throw InvalidInput("instance needs exactly one oracle per agent");
  }
  for (const auto& o : oracles) {
    if (o.ground_size() != m) throw InvalidInput("oracle ground size differs from item count");
  }
}

Instance Instance::extended(int extra) const {
  Instance out = *this;
  out.m += extra;
  for (auto& o : out.oracles) o = o.extended(extra);
  out.item_labels.clear();
  return out;
}

}  // namespace nsw
