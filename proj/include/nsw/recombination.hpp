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

// Matching recombination diagnostics: combine the initial matching tau with
// an arbitrary matching pi into a matching rho that keeps most of pi's value
// while guaranteeing, per agent, either a valuable matched item or the
// absence of any high-value unmatched item. The solve pipeline never calls
// this; it exists to make the guarantee checkable.

#ifndef NSW_RECOMBINATION_HPP
#define NSW_RECOMBINATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "nsw/matching.hpp"
#include "nsw/multilinear.hpp"
#include "nsw/reference.hpp"
#include "nsw/valuations.hpp"

namespace nsw {

/// One alternating piece scored by the switch factor phi. Pieces come from
/// breaking the pi/tau symmetric difference at the dropped edges of agents
/// in B, plus singleton restorations for B-agents where pi and tau agree.
struct AlternatingPiece {
  std::vector<int> agents;  // a_1 .. a_k (a_1 in B when b_headed)
  std::vector<int> items;   // i_1 .. i_k with i_j = tau(a_j)
  double phi = 1.0;
  bool tau_favorable = true;
  bool b_headed = true;
};

struct AlternatingDecomposition {
  // Connected components of the symmetric difference; they partition the
  // agents with pi(a) != tau(a).
  std::vector<std::vector<int>> component_agents;
  std::vector<bool> component_is_cycle;
  std::vector<int> b_agents;  // agents with v(pi(a)) < V(y_a) / (d-1)
  std::vector<AlternatingPiece> pieces;
};

struct RecombineResult {
  Matching rho;
  AlternatingDecomposition decomposition;
};

/// Builds rho from tau (the product-optimal initial matching) and pi (any
/// matching into H = image(tau)). Requires d >= 2 and y zero outside the
/// active agents.
RecombineResult recombine(const Instance& instance, const Matching& tau, const Matching& pi,
                          const FractionalAllocation& y, double d);

enum class AgentCase {
  matched_item_large,  // v_a(rho(a)) >= V_a(y_a) / d
  no_large_items,      // every unmatched item j has v_a(j) < V_a(y_a) / d
  violation,
};

struct RecombinationCertificate {
  bool nsw_ratio_ok = false;   // NSW(y, rho) >= NSW(y, pi) / (d + 2)
  double log_nsw_rho = kNegInf;
  double log_nsw_pi = kNegInf;
  double log_nsw_pi_prime = kNegInf;
  double phi_product_log = 0;  // sum of ln(phi) over tau-favorable pieces
  std::vector<AgentCase> per_agent;
  std::optional<int> violating_agent;

  bool all_ok() const { return nsw_ratio_ok && !violating_agent.has_value(); }
};

/// Re-derives every guarantee of recombine by direct oracle queries.
RecombinationCertificate verify_recombination(const Instance& instance, const Matching& tau,
                                              const Matching& pi, const RecombineResult& rec,
                                              const FractionalAllocation& y, double d);

struct ExtensionBoundReport {
  double beta = 0;          // (1/n) sum over active agents of V(y*) / V(y')
  Matching pi;              // most-valuable-item matching from the optimum
  double log_nsw_pi = kNegInf;
  double opt_log_nsw = kNegInf;
  bool bound_ok = false;    // NSW(y', pi) * (beta + 1) >= OPT
};

/// Checks the matching-extension bound against a brute-forced integral
/// optimum: splitting the optimum into its H-part and its restriction to
/// G', some matching pi recovers OPT / (beta + 1) on top of y'.
ExtensionBoundReport matching_extension_bound(const Instance& instance,
                                              const FractionalAllocation& y_prime,
                                              const ItemSet& h,
                                              const ExactResult& integral_optimum,
                                              const std::vector<int>& a_prime);

}  // namespace nsw

#endif  // NSW_RECOMBINATION_HPP
