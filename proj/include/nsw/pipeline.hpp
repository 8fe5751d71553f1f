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

// End-to-end solver: initial matching, iterated continuous greedy on the
// leftovers, independent rounding trials, and a final max-product matching
// of the held-out items; plus the exact-comparison harness.

#ifndef NSW_PIPELINE_HPP
#define NSW_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "nsw/matching.hpp"
#include "nsw/multilinear.hpp"
#include "nsw/reference.hpp"
#include "nsw/relaxation.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

struct PipelineConfig {
  GreedyConfig greedy;
  double c = 1.0;        // large-item threshold (diagnostics)
  int trials = 16;       // independent rounding trials; best one is kept
  std::uint64_t seed = 0;
  double d = 0;          // recombination parameter; 0 means c + 2
  bool assign_leftovers = false;

  double resolved_d() const { return d > 0 ? d : c + 2; }
  void validate() const;
};

struct TrialRecord {
  std::vector<int> z;  // per item: assigned agent or -1
  Matching sigma;
  double log_nsw = kNegInf;  // scaled
};

struct RelaxationCertificate {
  double ratio_sum = 0;  // (1/n) sum over active agents of V(y*) / V(y)
  int iterations = 0;
  bool ratio_ok = false;
  bool iterations_ok = false;
};

struct RunReport {
  int n = 0;
  int m = 0;
  InstanceMetadata meta;
  Matching tau;
  ItemSet h;
  std::vector<int> a_prime;
  bool opt_zero = false;
  GreedyTrace greedy_trace;
  FractionalAllocation y;
  std::vector<TrialRecord> trials;
  int best_trial = -1;
  std::vector<ItemSet> best_allocation;
  double best_log_nsw = kNegInf;  // scaled
  std::vector<int> discarded_items;
  std::optional<double> opt_log_nsw;
  std::optional<double> ratio;  // exp(best_log_nsw - opt_log_nsw)
  double wall_seconds = 0;      // excluded from determinism comparisons
};

/// Invariant failures inside the pipeline carry whatever was computed
/// before the failure.
class PipelineError : public InvariantError {
 public:
  PipelineError(const std::string& msg, RunReport partial)
      : InvariantError(msg), partial(std::move(partial)) {}
  RunReport partial;
};

RunReport run_pipeline(const Instance& instance, const PipelineConfig& config);

struct CompareReport {
  RunReport run;
  std::optional<ExactResult> exact;  // absent when the instance is too large
  std::optional<RelaxationCertificate> certificate;
  bool ratio_ok = true;  // best >= OPT / 380 whenever OPT is available
};

/// Runs the pipeline and the brute-force oracle side by side.
CompareReport compare_run(const Instance& instance, const PipelineConfig& config);

/// Certificate for the relaxation guarantee, evaluated against a feasible
/// comparator: the brute-forced integral optimum restricted to G'.
RelaxationCertificate relaxation_certificate(const Instance& instance,
                                           const std::vector<int>& a_prime, const ItemSet& h,
                                           const FractionalAllocation& y, int iterations,
                                           const ExactResult& optimum);

}  // namespace nsw

#endif  // NSW_PIPELINE_HPP
