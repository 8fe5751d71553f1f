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

// Monotone submodular value oracles: a library of concrete families plus an
// explicit-table fallback, all queryable by value queries on item sets.

#ifndef NSW_VALUATIONS_HPP
#define NSW_VALUATIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nsw/itemset.hpp"
#include "nsw/rng.hpp"

namespace nsw {

enum class Family {
  additive,
  coverage,
  budget_additive,
  partition_matroid_rank,
  explicit_table,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct AdditiveParams {
  std::vector<double> weights;  // per item, >= 0
};

struct CoverageParams {
  std::vector<double> element_weights;         // universe element weights, >= 0
  std::vector<std::vector<int>> incidence;     // item -> covered elements
};

struct BudgetAdditiveParams {
  std::vector<double> weights;  // per item, >= 0
  double cap = 0;               // >= 0
};

struct PartitionRankParams {
  std::vector<std::vector<int>> blocks;  // partition of the ground set
  std::vector<int> capacities;           // per block, >= 0
};

struct ExplicitTableParams {
  std::vector<double> table;  // 2^base_m entries indexed by subset bitmask
};

/// Immutable value oracle for one agent. Supports value queries, marginals,
/// ground-set extension by zero-valued items, and a multiplicative scale
/// wrapper. Family parameters always describe the *unscaled* function; the
/// scale enters only through value()/marginal().
class ValuationOracle {
 public:
  /// Builds an oracle; validates parameters, and for explicit tables with
  /// m <= 12 also checks monotonicity and submodularity exhaustively.
  static ValuationOracle additive(std::vector<double> weights);
  static ValuationOracle coverage(std::vector<double> element_weights,
                                  std::vector<std::vector<int>> incidence);
  static ValuationOracle budget_additive(std::vector<double> weights, double cap);
  static ValuationOracle partition_rank(int ground_size,
                                        std::vector<std::vector<int>> blocks,
                                        std::vector<int> capacities);
  static ValuationOracle explicit_table(std::vector<double> table);
  /// Escape hatch for adversarial tests: accepts the table without the
  /// build-time property check (the "unchecked" flag is recorded).
  static ValuationOracle explicit_table_unchecked(std::vector<double> table);

  int ground_size() const { return m_; }
  Family family() const { return family_; }

  /// True unless this is an explicit table too large to check at build time
  /// (or built through the unchecked factory).
  bool properties_checked() const { return properties_checked_; }

  double scale() const { return scale_; }
  double log_scale() const { return log_scale_; }
  /// Wrapper oracle computing lambda * v. Decision procedures use raw
  /// queries, so wrapping never perturbs tie-breaking.
  ValuationOracle with_scale(double lambda) const;

  /// Same function extended by `extra` trailing items of marginal value 0.
  ValuationOracle extended(int extra) const;

  double value(const ItemSet& s) const { return scale_ * raw_value(s); }
  double raw_value(const ItemSet& s) const;

  /// v(S+j) - v(S-j); nonnegative for monotone functions.
  double marginal(const ItemSet& s, int j) const { return scale_ * raw_marginal(s, j); }
  double raw_marginal(const ItemSet& s, int j) const;

  /// All singleton marginals at once: out[j] = v(S+j) - v(S-j).
  void raw_marginals_all(const ItemSet& s, std::span<double> out) const;

  double raw_singleton(int j) const { return singletons_[static_cast<std::size_t>(j)]; }
  double singleton(int j) const { return scale_ * raw_singleton(j); }

  const AdditiveParams* as_additive() const { return std::get_if<AdditiveParams>(&params_); }
  const CoverageParams* as_coverage() const { return std::get_if<CoverageParams>(&params_); }
  const BudgetAdditiveParams* as_budget_additive() const {
    return std::get_if<BudgetAdditiveParams>(&params_);
  }
  const PartitionRankParams* as_partition_rank() const {
    return std::get_if<PartitionRankParams>(&params_);
  }
  const ExplicitTableParams* as_explicit_table() const {
    return std::get_if<ExplicitTableParams>(&params_);
  }

  /// Ground size before any zero extension (table masks use this).
  int base_ground() const { return base_m_; }

  // Derived structures used by evaluators.
  const std::vector<std::vector<int>>& element_items() const { return element_items_; }
  const std::vector<int>& block_of() const { return block_of_; }

  /// Incremental bundle value, for enumeration loops that add/remove one
  /// item at a time. Values are raw (unscaled).
  class BundleEval {
   public:
    explicit BundleEval(const ValuationOracle& oracle);
    void add(int j);
    void remove(int j);
    double raw_value() const;
    void reset();

   private:
    const ValuationOracle* oracle_;
    double sum_ = 0;                  // additive / budget-additive
    std::vector<int> counts_;         // coverage: per element; rank: per block
    double covered_ = 0;              // coverage: weight of covered elements
    std::uint64_t mask_ = 0;          // explicit table
    int rank_ = 0;                    // partition rank value
  };

 private:
  ValuationOracle() = default;
  void finalize();  // caches singletons and derived structures

  Family family_ = Family::additive;
  int m_ = 0;       // logical ground size (after extension)
  int base_m_ = 0;  // ground size described by params_
  double scale_ = 1.0;
  double log_scale_ = 0.0;
  bool properties_checked_ = true;
  std::variant<AdditiveParams, CoverageParams, BudgetAdditiveParams, PartitionRankParams,
               ExplicitTableParams>
      params_;
  std::vector<double> singletons_;
  std::vector<std::vector<int>> element_items_;  // coverage: element -> items
  std::vector<int> block_of_;                    // rank: item -> block (-1 for none)
};

/// Result of a monotonicity/submodularity check. Witnesses are in the
/// classic (S, T) form: monotone fails with S subset of T and v(S) > v(T);
/// submodular fails with v(S) + v(T) < v(S cap T) + v(S cup T).
struct PropertyReport {
  bool monotone = true;
  bool submodular = true;
  bool exhaustive = true;  // false means sampled (m > 12)
  std::optional<std::pair<ItemSet, ItemSet>> monotone_witness;
  std::optional<std::pair<ItemSet, ItemSet>> submodular_witness;

  bool ok() const { return monotone && submodular; }
};

/// Exhaustive for m <= 12 (via the pairwise-marginal condition), sampled
/// otherwise. Report-only; never throws.
PropertyReport check_properties(const ValuationOracle& oracle,
                                RngKey sample_key = RngKey::root(0));

struct InstanceMetadata {
  std::string generator;
  std::uint64_t seed = 0;
};

/// Agents, items, one oracle per agent.
struct Instance {
  int n = 0;
  int m = 0;
  std::vector<ValuationOracle> oracles;
  std::vector<std::string> agent_labels;  // optional
  std::vector<std::string> item_labels;   // optional
  InstanceMetadata meta;

  void validate() const;

  /// Instance with `extra` zero-valued items appended to every oracle.
  Instance extended(int extra) const;
};

}  // namespace nsw

#endif  // NSW_VALUATIONS_HPP
