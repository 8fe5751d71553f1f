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

#include "nsw/multilinear.hpp"

#include <algorithm>
#include <cmath>

namespace nsw {

void FractionalAllocation::validate(double tol) const {
  for (double v : data) {
    if (!(v >= 0.0 && v <= 1.0 + 1e-15)) {
      throw InvariantError("fractional allocation entry outside [0,1]");
    }
  }
  for (int j = 0; j < items; ++j) {
    if (column_sum(j) > 1.0 + tol) {
      throw InvariantError("fractional allocation column sum exceeds 1");
    }
  }
}

std::vector<double> restrict_row(std::span<const double> row, const ItemSet& keep) {
  std::vector<double> out(row.size(), 0.0);
  keep.for_each([&](int j) { out[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)]; });
  return out;
}

std::vector<double> overlay_row(std::span<const double> row, const ItemSet& force_one) {
  std::vector<double> out(row.begin(), row.end());
  force_one.for_each([&](int j) { out[static_cast<std::size_t>(j)] = 1.0; });
  return out;
}

namespace multilinear {

namespace {

void check_row(const ValuationOracle& oracle, std::span<const double> row) {
  if (row.size() != static_cast<std::size_t>(oracle.ground_size())) {
    throw InvalidInput("row length differs from oracle ground size");
  }
  for (double y : row) {
    if (!(y >= 0.0 && y <= 1.0)) throw InvalidInput("fractional coordinate outside [0,1]");
  }
}

int fractional_support(std::span<const double> row, std::vector<int>* out) {
  int count = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0.0 && row[j] < 1.0) {
      ++count;
      if (out) out->push_back(static_cast<int>(j));
    }
  }
  return count;
}

// Product of (1 - y_j); switches to log-space when a factor is tiny.
double product_one_minus(const std::vector<double>& factors) {
  double min_factor = 1.0;
  for (double f : factors) min_factor = std::min(min_factor, f);
  if (min_factor == 0.0) return 0.0;
  if (min_factor < 1e-12) {
    double logsum = 0;
    for (double f : factors) logsum += std::log(f);
    return std::exp(logsum);
  }
  double prod = 1.0;
  for (double f : factors) prod *= f;
  return prod;
}

double eval_additive(const AdditiveParams& p, std::span<const double> row) {
  double sum = 0;
  for (std::size_t j = 0; j < row.size(); ++j) sum += p.weights[j] * row[j];
  return sum;
}

double eval_coverage(const CoverageParams& p, const std::vector<std::vector<int>>& element_items,
                     std::span<const double> row) {
  double total = 0;
  std::vector<double> factors;
  for (std::size_t e = 0; e < p.element_weights.size(); ++e) {
    if (p.element_weights[e] == 0.0) continue;
    factors.clear();
    for (int j : element_items[e]) factors.push_back(1.0 - row[static_cast<std::size_t>(j)]);
    total += p.element_weights[e] * (1.0 - product_one_minus(factors));
  }
  return total;
}

// Blocks are independent, so E[rank] = sum over blocks of E[min(X_b, cap_b)]
// with X_b the Poisson-binomial count of included block items.
double eval_partition_rank(const PartitionRankParams& p, std::span<const double> row) {
  double total = 0;
  std::vector<double> dp;
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    const auto& block = p.blocks[b];
    dp.assign(block.size() + 1, 0.0);
    dp[0] = 1.0;
    std::size_t upto = 0;
    for (int j : block) {
      const double y = row[static_cast<std::size_t>(j)];
      ++upto;
      for (std::size_t c = upto; c-- > 0;) {
        dp[c + 1] += dp[c] * y;
        dp[c] *= (1.0 - y);
      }
    }
    double expectation = 0;
    for (std::size_t c = 1; c < dp.size(); ++c) {
      expectation += dp[c] * std::min<int>(static_cast<int>(c), p.capacities[b]);
    }
    total += expectation;
  }
  return total;
}

// Enumeration over the strictly fractional coordinates; items at 1 are
// folded into the base bundle and items at 0 never appear.
double eval_enumerate(const ValuationOracle& oracle, std::span<const double> row) {
  std::vector<int> frac;
  const int f = fractional_support(row, &frac);
  if (f > kMaxEnumerationSupport) {
    throw SizeLimitError("support too large for enumeration and no closed form");
  }
  ValuationOracle::BundleEval bundle(oracle);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == 1.0) bundle.add(static_cast<int>(j));
  }
  double total = 0;
  const std::uint64_t limit = 1ull << f;
  for (std::uint64_t g = 0; g < limit; ++g) {
    const std::uint64_t gray = g ^ (g >> 1);
    if (g > 0) {
      const int t = std::countr_zero(g);
      const int j = frac[static_cast<std::size_t>(t)];
      if (gray & (1ull << t)) {
        bundle.add(j);
      } else {
        bundle.remove(j);
      }
    }
    double prob = 1.0;
    for (int t = 0; t < f; ++t) {
      const double y = row[static_cast<std::size_t>(frac[static_cast<std::size_t>(t)])];
      prob *= (gray & (1ull << t)) ? y : (1.0 - y);
    }
    if (prob != 0.0) total += prob * bundle.raw_value();
  }
  return total;
}

EstimateWithError finish_estimate(double sum, double sum_sq, long n, double lo, double hi) {
  EstimateWithError est;
  est.samples = n;
  if (lo == hi) {
    // Degenerate distribution: report the exact constant.
    est.mean = lo;
    est.std_error = 0;
    return est;
  }
  est.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var = std::max(0.0, (sum_sq - sum * est.mean) / static_cast<double>(n - 1));
    est.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

// Allocation-free sample loop: one reusable workspace per oracle, with the
// per-family value/marginal computations inlined.
class Sampler {
 public:
  explicit Sampler(const ValuationOracle& oracle)
      : oracle_(oracle), m_(oracle.ground_size()), incl_(static_cast<std::size_t>(m_), 0) {
    switch (oracle_.family()) {
      case Family::coverage:
        counts_.assign(oracle_.as_coverage()->element_weights.size(), 0);
        break;
      case Family::partition_matroid_rank:
        counts_.assign(oracle_.as_partition_rank()->blocks.size(), 0);
        break;
      default:
        break;
    }
  }

  // Draws R ~ row, returns v(R); when marg is nonempty also fills every
  // singleton marginal v(R+j) - v(R-j).
  double sample(SplitMix64& rng, std::span<const double> row, std::span<double> marg) {
    for (int j = 0; j < m_; ++j) {
      incl_[static_cast<std::size_t>(j)] = rng.next_unit() < row[static_cast<std::size_t>(j)] ? 1 : 0;
    }
    switch (oracle_.family()) {
      case Family::additive: {
        const auto& w = oracle_.as_additive()->weights;
        double sum = 0;
        for (int j = 0; j < m_; ++j) {
          if (incl_[static_cast<std::size_t>(j)]) sum += w[static_cast<std::size_t>(j)];
        }
        if (!marg.empty()) {
          for (int j = 0; j < m_; ++j) marg[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j)];
        }
        return sum;
      }
      case Family::budget_additive: {
        const auto& p = *oracle_.as_budget_additive();
        double sum = 0;
        for (int j = 0; j < m_; ++j) {
          if (incl_[static_cast<std::size_t>(j)]) sum += p.weights[static_cast<std::size_t>(j)];
        }
        if (!marg.empty()) {
          for (int j = 0; j < m_; ++j) {
            const double w = p.weights[static_cast<std::size_t>(j)];
            const double base = incl_[static_cast<std::size_t>(j)] ? sum - w : sum;
            marg[static_cast<std::size_t>(j)] = std::min(base + w, p.cap) - std::min(base, p.cap);
          }
        }
        return std::min(sum, p.cap);
      }
      case Family::coverage: {
        const auto& p = *oracle_.as_coverage();
        std::fill(counts_.begin(), counts_.end(), 0);
        for (int j = 0; j < m_; ++j) {
          if (!incl_[static_cast<std::size_t>(j)]) continue;
          for (int e : p.incidence[static_cast<std::size_t>(j)]) ++counts_[static_cast<std::size_t>(e)];
        }
        double v = 0;
        for (std::size_t e = 0; e < counts_.size(); ++e) {
          if (counts_[e] > 0) v += p.element_weights[e];
        }
        if (!marg.empty()) {
          for (int j = 0; j < m_; ++j) {
            double gain = 0;
            const int self = incl_[static_cast<std::size_t>(j)];
            for (int e : p.incidence[static_cast<std::size_t>(j)]) {
              if (counts_[static_cast<std::size_t>(e)] == self) gain += p.element_weights[static_cast<std::size_t>(e)];
            }
            marg[static_cast<std::size_t>(j)] = gain;
          }
        }
        return v;
      }
      case Family::partition_matroid_rank: {
        const auto& p = *oracle_.as_partition_rank();
        const auto& block_of = oracle_.block_of();
        std::fill(counts_.begin(), counts_.end(), 0);
        for (int j = 0; j < m_; ++j) {
          if (!incl_[static_cast<std::size_t>(j)]) continue;
          const int b = block_of[static_cast<std::size_t>(j)];
          if (b >= 0) ++counts_[static_cast<std::size_t>(b)];
        }
        int rank = 0;
        for (std::size_t b = 0; b < counts_.size(); ++b) {
          rank += std::min(counts_[b], p.capacities[b]);
        }
        if (!marg.empty()) {
          for (int j = 0; j < m_; ++j) {
            const int b = block_of[static_cast<std::size_t>(j)];
            if (b < 0) {
              marg[static_cast<std::size_t>(j)] = 0;
              continue;
            }
            const int others = counts_[static_cast<std::size_t>(b)] - incl_[static_cast<std::size_t>(j)];
            marg[static_cast<std::size_t>(j)] = others < p.capacities[static_cast<std::size_t>(b)] ? 1.0 : 0.0;
          }
        }
        return static_cast<double>(rank);
      }
      case Family::explicit_table: {
        const auto& table = oracle_.as_explicit_table()->table;
        std::uint64_t mask = 0;
        const int base_m = oracle_.base_ground();
        for (int j = 0; j < base_m; ++j) {
          if (incl_[static_cast<std::size_t>(j)]) mask |= 1ull << j;
        }
        if (!marg.empty()) {
          for (int j = 0; j < m_; ++j) {
            if (j >= base_m) {
              marg[static_cast<std::size_t>(j)] = 0;
              continue;
            }
            const std::uint64_t bit = 1ull << j;
            marg[static_cast<std::size_t>(j)] = table[mask | bit] - table[mask & ~bit];
          }
        }
        return table[mask];
      }
    }
    return 0;
  }

 private:
  const ValuationOracle& oracle_;
  int m_;
  std::vector<char> incl_;
  std::vector<int> counts_;
};

}  // namespace

bool exact_available(const ValuationOracle& oracle, std::span<const double> row) {
  switch (oracle.family()) {
    case Family::additive:
    case Family::coverage:
    case Family::partition_matroid_rank:
      return true;
    case Family::budget_additive:
    case Family::explicit_table:
      return fractional_support(row, nullptr) <= kMaxEnumerationSupport;
  }
  return false;
}

double eval_exact_raw(const ValuationOracle& oracle, std::span<const double> row) {
  check_row(oracle, row);
  switch (oracle.family()) {
    case Family::additive:
      return eval_additive(*oracle.as_additive(), row);
    case Family::coverage:
      return eval_coverage(*oracle.as_coverage(), oracle.element_items(), row);
    case Family::partition_matroid_rank:
      return eval_partition_rank(*oracle.as_partition_rank(), row);
    case Family::budget_additive:
    case Family::explicit_table:
      return eval_enumerate(oracle, row);
  }
  return 0;
}

double eval_exact(const ValuationOracle& oracle, std::span<const double> row) {
  return oracle.scale() * eval_exact_raw(oracle, row);
}

EstimateWithError eval_sample_raw(const ValuationOracle& oracle, std::span<const double> row,
                                  long samples, RngKey key) {
  check_row(oracle, row);
  if (samples < 1) throw InvalidInput("sample count must be at least 1");
  Sampler sampler(oracle);
  double sum = 0, sum_sq = 0, lo = 0, hi = 0;
  for (long s = 0; s < samples; ++s) {
    SplitMix64 rng = key.child(static_cast<std::uint64_t>(s)).stream();
    const double v = sampler.sample(rng, row, {});
    sum += v;
    sum_sq += v * v;
    if (s == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return finish_estimate(sum, sum_sq, samples, lo, hi);
}

EstimateWithError eval_sample(const ValuationOracle& oracle, std::span<const double> row,
                              long samples, RngKey key) {
  EstimateWithError est = eval_sample_raw(oracle, row, samples, key);
  est.mean *= oracle.scale();
  est.std_error *= oracle.scale();
  return est;
}

double partial_exact_raw(const ValuationOracle& oracle, std::span<const double> row, int j) {
  check_row(oracle, row);
  if (j < 0 || j >= oracle.ground_size()) throw InvalidInput("item index out of range");
  std::vector<double> with(row.begin(), row.end());
  with[static_cast<std::size_t>(j)] = 1.0;
  std::vector<double> without(row.begin(), row.end());
  without[static_cast<std::size_t>(j)] = 0.0;
  return eval_exact_raw(oracle, with) - eval_exact_raw(oracle, without);
}

double partial_exact(const ValuationOracle& oracle, std::span<const double> row, int j) {
  return oracle.scale() * partial_exact_raw(oracle, row, j);
}

EstimateWithError partial_sampled_raw(const ValuationOracle& oracle, std::span<const double> row,
                                      int j, long samples, RngKey key) {
  check_row(oracle, row);
  if (j < 0 || j >= oracle.ground_size()) throw InvalidInput("item index out of range");
  if (samples < 1) throw InvalidInput("sample count must be at least 1");
  const int m = oracle.ground_size();
  ItemSet r(m);
  double sum = 0, sum_sq = 0, lo = 0, hi = 0;
  for (long s = 0; s < samples; ++s) {
    SplitMix64 rng = key.child(static_cast<std::uint64_t>(s)).stream();
    r.clear();
    for (int jj = 0; jj < m; ++jj) {
      if (rng.next_unit() < row[static_cast<std::size_t>(jj)]) r.set(jj);
    }
    const double v = oracle.raw_marginal(r, j);
    sum += v;
    sum_sq += v * v;
    if (s == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return finish_estimate(sum, sum_sq, samples, lo, hi);
}

EstimateWithError partial_sampled(const ValuationOracle& oracle, std::span<const double> row,
                                  int j, long samples, RngKey key) {
  EstimateWithError est = partial_sampled_raw(oracle, row, j, samples, key);
  est.mean *= oracle.scale();
  est.std_error *= oracle.scale();
  return est;
}

std::vector<double> partials_exact_raw(const ValuationOracle& oracle,
                                       std::span<const double> row) {
  check_row(oracle, row);
  const int m = oracle.ground_size();
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  switch (oracle.family()) {
    case Family::additive: {
      const auto& p = *oracle.as_additive();
      for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = p.weights[static_cast<std::size_t>(j)];
      return out;
    }
    case Family::coverage: {
      // dV/dy_j = sum over elements covered by j of w_e * P(no other item
      // covers e).
      const auto& p = *oracle.as_coverage();
      const auto& element_items = oracle.element_items();
      std::vector<double> factors;
      for (std::size_t e = 0; e < p.element_weights.size(); ++e) {
        if (p.element_weights[e] == 0.0) continue;
        for (int j : element_items[e]) {
          factors.clear();
          for (int j2 : element_items[e]) {
            if (j2 != j) factors.push_back(1.0 - row[static_cast<std::size_t>(j2)]);
          }
          out[static_cast<std::size_t>(j)] += p.element_weights[e] * product_one_minus(factors);
        }
      }
      return out;
    }
    default: {
      for (int j = 0; j < m; ++j) {
        out[static_cast<std::size_t>(j)] = partial_exact_raw(oracle, row, j);
      }
      return out;
    }
  }
}

double eval_overlay_exact_raw(const ValuationOracle& oracle, std::span<const double> row,
                              const ItemSet& force_one) {
  return eval_exact_raw(oracle, overlay_row(row, force_one));
}

double eval_overlay_exact(const ValuationOracle& oracle, std::span<const double> row,
                          const ItemSet& force_one) {
  return oracle.scale() * eval_overlay_exact_raw(oracle, row, force_one);
}

namespace {

// Coverage fast path. The per-sample marginal of item j decomposes over its
// elements into [count = 0] plus [count = 1 and j is the unique coverer],
// so marginals accumulate in O(universe) per sample instead of
// O(items x degree).
BatchEstimates coverage_batch(const ValuationOracle& oracle, std::span<const double> row,
                              long samples, RngKey key) {
  const auto& p = *oracle.as_coverage();
  const int m = oracle.ground_size();
  const std::size_t universe = p.element_weights.size();
  BatchEstimates batch;
  batch.partials.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<char> incl(static_cast<std::size_t>(m), 0);
  std::vector<int> counts(universe, 0);
  std::vector<int> coverer(universe, -1);
  std::vector<double> uncovered_samples(universe, 0.0);  // # samples with count 0
  double sum = 0, sum_sq = 0, lo = 0, hi = 0;
  for (long s = 0; s < samples; ++s) {
    SplitMix64 rng = key.child(static_cast<std::uint64_t>(s)).stream();
    for (int j = 0; j < m; ++j) {
      incl[static_cast<std::size_t>(j)] = rng.next_unit() < row[static_cast<std::size_t>(j)] ? 1 : 0;
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (int j = 0; j < m; ++j) {
      if (!incl[static_cast<std::size_t>(j)]) continue;
      for (int e : p.incidence[static_cast<std::size_t>(j)]) {
        ++counts[static_cast<std::size_t>(e)];
        coverer[static_cast<std::size_t>(e)] = j;
      }
    }
    double v = 0;
    for (std::size_t e = 0; e < universe; ++e) {
      if (counts[e] == 0) {
        uncovered_samples[e] += 1.0;
      } else {
        v += p.element_weights[e];
        if (counts[e] == 1) batch.partials[static_cast<std::size_t>(coverer[e])] += p.element_weights[e];
      }
    }
    sum += v;
    sum_sq += v * v;
    if (s == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  for (int j = 0; j < m; ++j) {
    for (int e : p.incidence[static_cast<std::size_t>(j)]) {
      batch.partials[static_cast<std::size_t>(j)] +=
          p.element_weights[static_cast<std::size_t>(e)] * uncovered_samples[static_cast<std::size_t>(e)];
    }
    batch.partials[static_cast<std::size_t>(j)] /= static_cast<double>(samples);
  }
  batch.value = finish_estimate(sum, sum_sq, samples, lo, hi);
  return batch;
}

}  // namespace

BatchEstimates sample_value_and_partials(const ValuationOracle& oracle,
                                         std::span<const double> row, long samples, RngKey key) {
  check_row(oracle, row);
  if (samples < 1) throw InvalidInput("sample count must be at least 1");
  if (oracle.family() == Family::coverage) return coverage_batch(oracle, row, samples, key);
  const int m = oracle.ground_size();
  BatchEstimates batch;
  batch.partials.assign(static_cast<std::size_t>(m), 0.0);
  Sampler sampler(oracle);
  std::vector<double> marginals(static_cast<std::size_t>(m), 0.0);
  double sum = 0, sum_sq = 0, lo = 0, hi = 0;
  for (long s = 0; s < samples; ++s) {
    SplitMix64 rng = key.child(static_cast<std::uint64_t>(s)).stream();
    const double v = sampler.sample(rng, row, marginals);
    sum += v;
    sum_sq += v * v;
    if (s == 0) {
      lo = hi = v;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (int j = 0; j < m; ++j) batch.partials[static_cast<std::size_t>(j)] += marginals[static_cast<std::size_t>(j)];
  }
  batch.value = finish_estimate(sum, sum_sq, samples, lo, hi);
  for (double& p : batch.partials) p /= static_cast<double>(samples);
  return batch;
}

}  // namespace multilinear

}  // namespace nsw
