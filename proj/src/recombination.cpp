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

#include "nsw/recombination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nsw {

namespace {

constexpr double kTol = 1e-9;

double value_with_item(const Instance& instance, const FractionalAllocation& y, int agent,
                       int item) {
  const auto& oracle = instance.oracles[static_cast<std::size_t>(agent)];
  if (item < 0) return multilinear::eval_exact_raw(oracle, y.row(agent));
  ItemSet one(instance.m);
  one.set(item);
  return multilinear::eval_overlay_exact_raw(oracle, y.row(agent), one);
}

// ln of the product NSW over a matching on top of y (scaled values).
double log_nsw_with_matching(const Instance& instance, const FractionalAllocation& y,
                             const std::vector<int>& to_item) {
  double sum = 0;
  for (int i = 0; i < instance.n; ++i) {
    const double raw = value_with_item(instance, y, i, to_item[static_cast<std::size_t>(i)]);
    const double v = instance.oracles[static_cast<std::size_t>(i)].scale() * raw;
    if (v <= 0) return kNegInf;
    sum += std::log(v);
  }
  return sum / static_cast<double>(instance.n);
}

double piece_phi(const Instance& instance, const FractionalAllocation& y,
                 const AlternatingPiece& piece) {
  const int a1 = piece.agents.front();
  double numer = value_with_item(instance, y, a1, -1);
  double denom = value_with_item(instance, y, a1, piece.items.front());
  double phi = denom > 0 ? numer / denom : std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < piece.agents.size(); ++j) {
    const int a = piece.agents[j];
    const double up = value_with_item(instance, y, a, piece.items[j - 1]);
    const double down = value_with_item(instance, y, a, piece.items[j]);
    phi *= down > 0 ? up / down : std::numeric_limits<double>::infinity();
  }
  return phi;
}

}  // namespace

RecombineResult recombine(const Instance& instance, const Matching& tau, const Matching& pi,
                          const FractionalAllocation& y, double d) {
  instance.validate();
  if (d < 2) throw InvalidInput("recombination needs d >= 2");
  if (static_cast<int>(tau.to_item.size()) != instance.n ||
      static_cast<int>(pi.to_item.size()) != instance.n) {
    throw InvalidInput("matchings must cover every agent");
  }
  if (!pi.injective() || !tau.injective()) throw InvalidInput("matchings must be injective");
  const ItemSet h = tau.image(instance.m);
  for (int j : pi.to_item) {
    if (j >= 0 && !h.test(j)) throw InvalidInput("pi must map into the matched item set");
  }

  const int n = instance.n;
  std::vector<double> base_value(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) base_value[static_cast<std::size_t>(i)] = value_with_item(instance, y, i, -1);

  RecombineResult out;
  auto& dec = out.decomposition;
  std::vector<char> is_b(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a) {
    const int pa = pi.to_item[static_cast<std::size_t>(a)];
    const double v_pi = pa >= 0 ? instance.oracles[static_cast<std::size_t>(a)].raw_singleton(pa) : 0.0;
    if (v_pi < base_value[static_cast<std::size_t>(a)] / (d - 1)) {
      is_b[static_cast<std::size_t>(a)] = 1;
      dec.b_agents.push_back(a);
    }
  }

  out.rho.to_item.assign(static_cast<std::size_t>(n), -1);

  // Inverse maps over items.
  std::vector<int> tau_inv(static_cast<std::size_t>(instance.m), -1);
  std::vector<int> pi_inv(static_cast<std::size_t>(instance.m), -1);
  for (int a = 0; a < n; ++a) {
    if (tau.to_item[static_cast<std::size_t>(a)] >= 0) tau_inv[static_cast<std::size_t>(tau.to_item[static_cast<std::size_t>(a)])] = a;
    if (pi.to_item[static_cast<std::size_t>(a)] >= 0) pi_inv[static_cast<std::size_t>(pi.to_item[static_cast<std::size_t>(a)])] = a;
  }

  // Agents where the matchings agree keep their item. If such an agent is
  // in B its pi-edge was still dropped, so the restoration is a k=1 piece
  // for the phi accounting (phi <= 1 keeps it tau-favorable).
  std::vector<char> in_diff(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a) {
    if (tau.to_item[static_cast<std::size_t>(a)] == pi.to_item[static_cast<std::size_t>(a)]) {
      out.rho.to_item[static_cast<std::size_t>(a)] = tau.to_item[static_cast<std::size_t>(a)];
      if (is_b[static_cast<std::size_t>(a)] && tau.to_item[static_cast<std::size_t>(a)] >= 0) {
        AlternatingPiece piece;
        piece.agents = {a};
        piece.items = {tau.to_item[static_cast<std::size_t>(a)]};
        piece.phi = piece_phi(instance, y, piece);
        piece.tau_favorable = piece.phi <= d;
        dec.pieces.push_back(std::move(piece));
      }
    } else {
      in_diff[static_cast<std::size_t>(a)] = 1;
    }
  }

  // Connected components of the symmetric difference, discovered in
  // ascending agent order.
  std::vector<int> comp_of(static_cast<std::size_t>(n), -1);
  for (int a0 = 0; a0 < n; ++a0) {
    if (!in_diff[static_cast<std::size_t>(a0)] || comp_of[static_cast<std::size_t>(a0)] >= 0) continue;
    const int comp = static_cast<int>(dec.component_agents.size());
    std::vector<int> stack = {a0};
    std::vector<int> members;
    comp_of[static_cast<std::size_t>(a0)] = comp;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      members.push_back(a);
      for (int item : {tau.to_item[static_cast<std::size_t>(a)], pi.to_item[static_cast<std::size_t>(a)]}) {
        if (item < 0) continue;
        for (int b : {tau_inv[static_cast<std::size_t>(item)], pi_inv[static_cast<std::size_t>(item)]}) {
          if (b >= 0 && in_diff[static_cast<std::size_t>(b)] && comp_of[static_cast<std::size_t>(b)] < 0) {
            comp_of[static_cast<std::size_t>(b)] = comp;
            stack.push_back(b);
          }
        }
      }
    }
    std::sort(members.begin(), members.end());
    // A component is a cycle iff every member has both edges and every
    // touched item has both inverse edges inside the component.
    bool cycle = true;
    for (int a : members) {
      if (tau.to_item[static_cast<std::size_t>(a)] < 0 || pi.to_item[static_cast<std::size_t>(a)] < 0) cycle = false;
      const int ti = tau.to_item[static_cast<std::size_t>(a)];
      if (ti >= 0 && (pi_inv[static_cast<std::size_t>(ti)] < 0 || !in_diff[static_cast<std::size_t>(pi_inv[static_cast<std::size_t>(ti)])])) {
        cycle = false;
      }
    }
    dec.component_agents.push_back(members);
    dec.component_is_cycle.push_back(cycle);
  }

  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  for (std::size_t ci = 0; ci < dec.component_agents.size(); ++ci) {
    const auto& members = dec.component_agents[ci];
    const bool has_b = std::any_of(members.begin(), members.end(),
                                   [&](int a) { return is_b[static_cast<std::size_t>(a)] != 0; });
    if (!has_b) {
      for (int a : members) {
        out.rho.to_item[static_cast<std::size_t>(a)] = pi.to_item[static_cast<std::size_t>(a)];
        placed[static_cast<std::size_t>(a)] = 1;
      }
      continue;
    }
    // Drop the pi-edges of B agents and walk each resulting piece from its
    // B head along tau/pi edges.
    for (int head : members) {
      if (!is_b[static_cast<std::size_t>(head)] || placed[static_cast<std::size_t>(head)]) continue;
      if (tau.to_item[static_cast<std::size_t>(head)] < 0) {
        // No tau edge to walk; the head simply loses its pi item.
        out.rho.to_item[static_cast<std::size_t>(head)] = -1;
        placed[static_cast<std::size_t>(head)] = 1;
        continue;
      }
      AlternatingPiece piece;
      piece.agents.push_back(head);
      piece.items.push_back(tau.to_item[static_cast<std::size_t>(head)]);
      placed[static_cast<std::size_t>(head)] = 1;
      int cur_item = piece.items.back();
      while (true) {
        const int next = pi_inv[static_cast<std::size_t>(cur_item)];
        if (next < 0 || is_b[static_cast<std::size_t>(next)] || placed[static_cast<std::size_t>(next)] ||
            !in_diff[static_cast<std::size_t>(next)] || tau.to_item[static_cast<std::size_t>(next)] < 0) {
          break;
        }
        piece.agents.push_back(next);
        piece.items.push_back(tau.to_item[static_cast<std::size_t>(next)]);
        placed[static_cast<std::size_t>(next)] = 1;
        cur_item = piece.items.back();
      }
      piece.phi = piece_phi(instance, y, piece);
      piece.tau_favorable =
          piece.phi <= std::pow(d, static_cast<double>(piece.agents.size()));
      if (piece.tau_favorable) {
        for (std::size_t j = 0; j < piece.agents.size(); ++j) {
          out.rho.to_item[static_cast<std::size_t>(piece.agents[j])] = piece.items[j];
        }
      } else {
        out.rho.to_item[static_cast<std::size_t>(piece.agents.front())] = -1;
        for (std::size_t j = 1; j < piece.agents.size(); ++j) {
          out.rho.to_item[static_cast<std::size_t>(piece.agents[j])] =
              pi.to_item[static_cast<std::size_t>(piece.agents[j])];
        }
      }
      dec.pieces.push_back(std::move(piece));
    }
    // Remnant agents (open-path prefixes with no B head) keep pi.
    for (int a : members) {
      if (!placed[static_cast<std::size_t>(a)]) {
        out.rho.to_item[static_cast<std::size_t>(a)] = pi.to_item[static_cast<std::size_t>(a)];
        placed[static_cast<std::size_t>(a)] = 1;
      }
    }
  }

  if (!out.rho.injective()) throw InvariantError("recombined matching is not injective");
  return out;
}

RecombinationCertificate verify_recombination(const Instance& instance, const Matching& tau,
                                              const Matching& pi, const RecombineResult& rec,
                                              const FractionalAllocation& y, double d) {
  instance.validate();
  RecombinationCertificate cert;
  const int n = instance.n;
  const ItemSet h = tau.image(instance.m);
  const ItemSet g_prime = h.complement();

  cert.log_nsw_pi = log_nsw_with_matching(instance, y, pi.to_item);
  cert.log_nsw_rho = log_nsw_with_matching(instance, y, rec.rho.to_item);

  // Re-derive B and pi-prime by direct queries.
  std::vector<int> pi_prime(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    const int pa = pi.to_item[static_cast<std::size_t>(a)];
    const double v_pi = pa >= 0 ? instance.oracles[static_cast<std::size_t>(a)].raw_singleton(pa) : 0.0;
    const double base = value_with_item(instance, y, a, -1);
    pi_prime[static_cast<std::size_t>(a)] = (v_pi < base / (d - 1)) ? -1 : pa;
  }
  cert.log_nsw_pi_prime = log_nsw_with_matching(instance, y, pi_prime);

  for (const auto& piece : rec.decomposition.pieces) {
    if (piece.tau_favorable) cert.phi_product_log += std::log(piece_phi(instance, y, piece));
  }

  if (std::isinf(cert.log_nsw_pi) && cert.log_nsw_pi < 0) {
    cert.nsw_ratio_ok = true;  // nothing to preserve
  } else {
    cert.nsw_ratio_ok = cert.log_nsw_rho >= cert.log_nsw_pi - std::log(d + 2) - kTol;
  }

  cert.per_agent.assign(static_cast<std::size_t>(n), AgentCase::violation);
  for (int a = 0; a < n; ++a) {
    const auto& oracle = instance.oracles[static_cast<std::size_t>(a)];
    const double base = value_with_item(instance, y, a, -1);
    const double threshold = base / d;
    const int ra = rec.rho.to_item[static_cast<std::size_t>(a)];
    const double v_rho = ra >= 0 ? oracle.raw_singleton(ra) : 0.0;
    if (v_rho >= threshold - kTol * std::max(1.0, base)) {
      cert.per_agent[static_cast<std::size_t>(a)] = AgentCase::matched_item_large;
      continue;
    }
    bool all_small = true;
    g_prime.for_each([&](int j) {
      if (oracle.raw_singleton(j) >= threshold + kTol * std::max(1.0, base)) all_small = false;
    });
    if (all_small) {
      cert.per_agent[static_cast<std::size_t>(a)] = AgentCase::no_large_items;
    } else if (!cert.violating_agent) {
      cert.violating_agent = a;
    }
  }
  return cert;
}

ExtensionBoundReport matching_extension_bound(const Instance& instance,
                                              const FractionalAllocation& y_prime,
                                              const ItemSet& h,
                                              const ExactResult& integral_optimum,
                                              const std::vector<int>& a_prime) {
  instance.validate();
  const ItemSet g_prime = h.complement();
  ExtensionBoundReport report;
  report.opt_log_nsw = integral_optimum.log_nsw;

  // beta = (1/n) sum over active agents of V(y*_i) / V(y'_i), with y* the
  // optimum restricted to the unmatched items.
  double beta = 0;
  for (int i : a_prime) {
    const auto& oracle = instance.oracles[static_cast<std::size_t>(i)];
    const ItemSet star = integral_optimum.allocation[static_cast<std::size_t>(i)].intersect_with(g_prime);
    const double numer = oracle.raw_value(star);
    if (numer == 0) continue;
    const double denom = multilinear::eval_exact_raw(oracle, y_prime.row(i));
    beta += denom > 0 ? numer / denom : std::numeric_limits<double>::infinity();
  }
  beta /= static_cast<double>(instance.n);
  report.beta = beta;

  // pi: the most valuable matched-set item per agent from the optimum,
  // leftovers in ascending order to agents that got none.
  report.pi.to_item.assign(static_cast<std::size_t>(instance.n), -1);
  std::vector<char> used(static_cast<std::size_t>(instance.m), 0);
  for (int i = 0; i < instance.n; ++i) {
    const ItemSet own = integral_optimum.allocation[static_cast<std::size_t>(i)].intersect_with(h);
    int best = -1;
    double best_v = -1;
    own.for_each([&](int j) {
      const double v = instance.oracles[static_cast<std::size_t>(i)].raw_singleton(j);
      if (v > best_v) {
        best_v = v;
        best = j;
      }
    });
    if (best >= 0) {
      report.pi.to_item[static_cast<std::size_t>(i)] = best;
      used[static_cast<std::size_t>(best)] = 1;
    }
  }
  std::vector<int> leftovers;
  h.for_each([&](int j) {
    if (!used[static_cast<std::size_t>(j)]) leftovers.push_back(j);
  });
  std::size_t next = 0;
  for (int i = 0; i < instance.n && next < leftovers.size(); ++i) {
    if (report.pi.to_item[static_cast<std::size_t>(i)] < 0) {
      report.pi.to_item[static_cast<std::size_t>(i)] = leftovers[next++];
    }
  }

  report.log_nsw_pi = log_nsw_with_matching(instance, y_prime, report.pi.to_item);
  const double lhs = report.log_nsw_pi + std::log1p(beta);
  report.bound_ok = std::isinf(report.opt_log_nsw) && report.opt_log_nsw < 0
                        ? true
                        : lhs >= report.opt_log_nsw - kTol;
  return report;
}

}  // namespace nsw
