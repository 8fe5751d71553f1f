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
#include "nsw/pipeline.hpp"
#include "nsw/recombination.hpp"

using namespace nsw;

namespace {

Instance two_additive(std::vector<double> w0, std::vector<double> w1) {
  Instance inst;
  inst.n = 2;
  inst.m = static_cast<int>(w0.size());
  inst.oracles.push_back(ValuationOracle::additive(std::move(w0)));
  inst.oracles.push_back(ValuationOracle::additive(std::move(w1)));
  return inst;
}

FractionalAllocation row_indicator(int n, int m, int agent, std::initializer_list<int> items) {
  FractionalAllocation y(n, m);
  for (int j : items) y.at(agent, j) = 1.0;
  return y;
}

}  // namespace

TEST_CASE("identical matchings recombine to themselves") {
  Instance inst = two_additive({4, 0, 1}, {0, 3, 0});
  const auto initial = initial_matching(inst);
  const FractionalAllocation y = row_indicator(2, 3, 0, {2});
  const auto rec = recombine(inst, initial.tau, initial.tau, y, 3.0);
  CHECK(rec.rho.to_item == initial.tau.to_item);
  CHECK(rec.decomposition.component_agents.empty());
  const auto cert = verify_recombination(inst, initial.tau, initial.tau, rec, y, 3.0);
  CHECK(cert.all_ok());
  CHECK(cert.log_nsw_rho == doctest::Approx(cert.log_nsw_pi).epsilon(1e-12));
}

TEST_CASE("two-cycle with one starved agent swaps back to tau") {
  // Items: 0 and 1 are matched, item 2 is the pool.
  Instance inst = two_additive({10, 0.1, 6}, {5, 4, 0});
  const auto initial = initial_matching(inst);
  REQUIRE(initial.tau.to_item == std::vector<int>{0, 1});
  const FractionalAllocation y = row_indicator(2, 3, 0, {2});  // V_0 = 6

  Matching pi;
  pi.to_item = {1, 0};  // the reversed matching
  const double d = 3;
  const auto rec = recombine(inst, initial.tau, pi, y, d);
  // Agent 0 is starved by pi: v_0({1}) = 0.1 < 6 / (d-1) = 3.
  CHECK(rec.decomposition.b_agents == std::vector<int>{0});
  REQUIRE(rec.decomposition.pieces.size() == 1);
  const auto& piece = rec.decomposition.pieces[0];
  CHECK(piece.agents == std::vector<int>{0, 1});
  CHECK(piece.items == std::vector<int>{0, 1});
  // phi = (6/16) * (5/4), derived by direct evaluation of the switch factor.
  CHECK(piece.phi == doctest::Approx(0.46875).epsilon(1e-12));
  CHECK(piece.tau_favorable);
  CHECK(rec.rho.to_item == std::vector<int>{0, 1});

  const auto cert = verify_recombination(inst, initial.tau, pi, rec, y, d);
  CHECK(cert.all_ok());
  // Accounting identity: NSW(y,rho)/NSW(y,pi') = (prod phi)^(-1/n).
  CHECK(cert.log_nsw_rho - cert.log_nsw_pi_prime ==
        doctest::Approx(-cert.phi_product_log / 2).epsilon(1e-9));
  // The intermediate matching loses at most a (d-1)/d factor.
  CHECK(cert.log_nsw_pi_prime >= cert.log_nsw_pi + std::log((d - 1) / d) - 1e-9);
}

TEST_CASE("cycle with no starved agent keeps pi") {
  Instance inst = two_additive({2, 1, 0}, {1, 2, 0});
  const auto initial = initial_matching(inst);
  REQUIRE(initial.tau.to_item == std::vector<int>{0, 1});
  FractionalAllocation y(2, 3);  // all zero: nobody is starved
  Matching pi;
  pi.to_item = {1, 0};
  const auto rec = recombine(inst, initial.tau, pi, y, 2.0);
  CHECK(rec.decomposition.b_agents.empty());
  CHECK(rec.rho.to_item == pi.to_item);
  const auto cert = verify_recombination(inst, initial.tau, pi, rec, y, 2.0);
  CHECK(cert.all_ok());
}

TEST_CASE("unfavorable switch leaves the head unmatched and case ii holds") {
  // Head agent 0 carries fractional value 6 over six pool items; follower 1
  // prefers pi's item by a factor 25. phi = (6/36) * 25 = 25/6 > d^2 = 4.
  Instance inst = two_additive({30, 0, 1, 1, 1, 1, 1, 1}, {25, 1, 0, 0, 0, 0, 0, 0});
  const auto initial = initial_matching(inst);
  REQUIRE(initial.tau.to_item == std::vector<int>{0, 1});
  const FractionalAllocation y = row_indicator(2, 8, 0, {2, 3, 4, 5, 6, 7});
  Matching pi;
  pi.to_item = {1, 0};
  const double d = 2;
  const auto rec = recombine(inst, initial.tau, pi, y, d);
  REQUIRE(rec.decomposition.pieces.size() == 1);
  const auto& piece = rec.decomposition.pieces[0];
  CHECK(piece.phi == doctest::Approx(25.0 / 6.0).epsilon(1e-12));
  CHECK_FALSE(piece.tau_favorable);
  CHECK(rec.rho.to_item == std::vector<int>{-1, 0});

  const auto cert = verify_recombination(inst, initial.tau, pi, rec, y, d);
  CHECK(cert.all_ok());
  // The unmatched head must see no large pool item.
  CHECK(cert.per_agent[0] == AgentCase::no_large_items);
  for (int j = 2; j < 8; ++j) {
    CHECK(inst.oracles[0].raw_singleton(j) < 6.0 / d);
  }
}

TEST_CASE("starved agent on an agreeing edge is restored with its factor") {
  Instance inst = two_additive({1, 0, 1, 1, 1, 1}, {0, 7, 0, 0, 0, 0});
  const auto initial = initial_matching(inst);
  REQUIRE(initial.tau.to_item == std::vector<int>{0, 1});
  const FractionalAllocation y = row_indicator(2, 6, 0, {2, 3, 4, 5});  // V_0 = 4
  const double d = 3;
  const auto rec = recombine(inst, initial.tau, initial.tau, y, d);
  CHECK(rec.rho.to_item == initial.tau.to_item);
  CHECK(rec.decomposition.b_agents == std::vector<int>{0});
  REQUIRE(rec.decomposition.pieces.size() == 1);
  CHECK(rec.decomposition.pieces[0].agents == std::vector<int>{0});
  CHECK(rec.decomposition.pieces[0].phi == doctest::Approx(4.0 / 5.0).epsilon(1e-12));

  const auto cert = verify_recombination(inst, initial.tau, initial.tau, rec, y, d);
  CHECK(cert.all_ok());
  CHECK(cert.log_nsw_rho - cert.log_nsw_pi_prime ==
        doctest::Approx(-std::log(4.0 / 5.0) / 2).epsilon(1e-9));
}

TEST_CASE("recombination preconditions") {
  Instance inst = two_additive({2, 1}, {1, 2});
  const auto initial = initial_matching(inst);
  const FractionalAllocation y(2, 2);
  CHECK_THROWS_AS(recombine(inst, initial.tau, initial.tau, y, 1.5), InvalidInput);
  Matching outside;
  outside.to_item = {0, 1};
  Instance wide = two_additive({2, 1, 5}, {1, 2, 0});
  const auto wide_initial = initial_matching(wide);  // H = {2, 1}
  Matching bad;
  bad.to_item = {0, 1};  // item 0 is not in H
  CHECK_THROWS_AS(recombine(wide, wide_initial.tau, bad, FractionalAllocation(2, 3), 3.0),
                  InvalidInput);
}

TEST_CASE("recombination on solved instances end to end") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GeneratorSpec spec;
    spec.family = seed % 2 == 0 ? "coverage" : "additive";
    spec.n = 3;
    spec.m = 6;
    const Instance inst = generate_instance(spec, 500 + seed);
    PipelineConfig config;
    config.seed = seed;
    const RunReport report = run_pipeline(inst, config);
    if (report.opt_zero) continue;
    const auto& pi = report.trials[static_cast<std::size_t>(report.best_trial)].sigma;
    const double d = 3;
    const auto rec = recombine(inst, report.tau, pi, report.y, d);
    const auto cert = verify_recombination(inst, report.tau, pi, rec, report.y, d);
    CHECK(cert.all_ok());
    CHECK(cert.log_nsw_rho - cert.log_nsw_pi_prime ==
          doctest::Approx(-cert.phi_product_log / inst.n).epsilon(1e-9));
    // Unmatched agents are exactly starved heads of unfavorable pieces.
    for (int a = 0; a < inst.n; ++a) {
      if (rec.rho.to_item[static_cast<std::size_t>(a)] >= 0) continue;
      bool found = false;
      for (const auto& piece : rec.decomposition.pieces) {
        if (!piece.tau_favorable && piece.agents.front() == a) found = true;
      }
      CHECK(found);
    }
    ++checked;
  }
  CHECK(checked >= 3);
}

TEST_CASE("extension bound with singleton optimum bundles") {
  Instance inst = two_additive({2, 0}, {0, 3});
  const auto initial = initial_matching(inst);
  const auto opt = brute_force_nsw(inst);
  const FractionalAllocation y(2, 2);
  const auto report = matching_extension_bound(inst, y, initial.h, opt, {});
  CHECK(report.beta == 0);
  CHECK(report.pi.to_item == initial.tau.to_item);
  CHECK(report.bound_ok);
  CHECK(report.log_nsw_pi == doctest::Approx(opt.log_nsw).epsilon(1e-12));
}

TEST_CASE("extension bound with the optimum itself as the fractional part") {
  GeneratorSpec spec;
  spec.family = "coverage";
  spec.n = 2;
  spec.m = 6;
  const Instance inst = generate_instance(spec, 3);
  const auto initial = initial_matching(inst);
  REQUIRE_FALSE(initial.opt_zero);
  const auto a_prime = active_agents(inst, initial.h);
  const auto opt = brute_force_nsw(inst);
  const ItemSet g_prime = initial.h.complement();
  FractionalAllocation y_star(inst.n, inst.m);
  for (int i : a_prime) {
    opt.allocation[static_cast<std::size_t>(i)].intersect_with(g_prime).for_each(
        [&](int j) { y_star.at(i, j) = 1.0; });
  }
  const auto report = matching_extension_bound(inst, y_star, initial.h, opt, a_prime);
  CHECK(report.beta <= 1.0 + 1e-12);
  CHECK(report.bound_ok);
}

TEST_CASE("extension bound on the tightness construction") {
  const Instance inst = tightness_instance(3);
  const auto initial = initial_matching(inst);
  const auto opt = brute_force_nsw(inst);
  CHECK(opt.log_nsw == doctest::Approx(std::log(3.0) / 3).epsilon(1e-12));
  const auto a_prime = active_agents(inst, initial.h);
  const ItemSet g_prime = initial.h.complement();
  FractionalAllocation y_star(inst.n, inst.m);
  for (int i : a_prime) {
    opt.allocation[static_cast<std::size_t>(i)].intersect_with(g_prime).for_each(
        [&](int j) { y_star.at(i, j) = 1.0; });
  }
  const auto report = matching_extension_bound(inst, y_star, initial.h, opt, a_prime);
  CHECK(report.bound_ok);
}
