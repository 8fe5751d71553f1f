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
#include "nsw/multilinear.hpp"

using namespace nsw;
namespace ml = nsw::multilinear;

namespace {

// Independent oracle: full 2^m enumeration, no support tricks.
double enumerate_extension(const ValuationOracle& o, const std::vector<double>& y) {
  const int m = o.ground_size();
  double total = 0;
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    double prob = 1;
    ItemSet s(m);
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1ull) {
        prob *= y[static_cast<std::size_t>(j)];
        s.set(j);
      } else {
        prob *= 1.0 - y[static_cast<std::size_t>(j)];
      }
    }
    total += prob * o.raw_value(s);
  }
  return total;
}

ValuationOracle coverage_example() { return ValuationOracle::coverage({1, 1}, {{0}, {0, 1}}); }

std::vector<ValuationOracle> sample_oracles(int m) {
  GeneratorSpec spec;
  spec.n = 1;
  spec.m = m;
  std::vector<ValuationOracle> out;
  int seed = 40;
  for (const char* family : {"additive", "coverage", "budget_additive", "partition_matroid_rank"}) {
    spec.family = family;
    out.push_back(generate_instance(spec, static_cast<std::uint64_t>(seed++)).oracles[0]);
  }
  // Tabulated copy of the coverage oracle, to run every check through the
  // explicit-table path as well.
  std::vector<double> table(1ull << m);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    ItemSet s(m);
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1ull) s.set(j);
    }
    table[mask] = out[1].raw_value(s);
  }
  out.push_back(ValuationOracle::explicit_table(std::move(table)));
  return out;
}

std::vector<double> random_point(int m, SplitMix64& rng) {
  std::vector<double> y(static_cast<std::size_t>(m));
  for (auto& v : y) v = rng.next_unit();
  return y;
}

}  // namespace

TEST_CASE("exact evaluation, frozen examples") {
  const auto add = ValuationOracle::additive({2, 0});
  CHECK(ml::eval_exact(add, std::vector<double>{0.5, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));

  // 2^2 enumeration: 0.25 * (0 + 1 + 2 + 2) = 1.25.
  const auto cov = coverage_example();
  const std::vector<double> y = {0.5, 0.5};
  CHECK(ml::eval_exact(cov, y) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(ml::eval_exact(cov, y) == doctest::Approx(enumerate_extension(cov, y)).epsilon(1e-12));
}

TEST_CASE("vertex agreement on every subset") {
  for (const auto& o : sample_oracles(8)) {
    const int m = o.ground_size();
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
      std::vector<double> y(static_cast<std::size_t>(m), 0.0);
      ItemSet s(m);
      for (int j = 0; j < m; ++j) {
        if ((mask >> j) & 1ull) {
          y[static_cast<std::size_t>(j)] = 1.0;
          s.set(j);
        }
      }
      CHECK(ml::eval_exact_raw(o, y) == o.raw_value(s));
    }
  }
}

TEST_CASE("exact evaluation matches the independent enumerator") {
  SplitMix64 rng = RngKey::root(17).stream();
  for (const auto& o : sample_oracles(7)) {
    for (int trial = 0; trial < 8; ++trial) {
      const auto y = random_point(7, rng);
      CHECK(ml::eval_exact_raw(o, y) ==
            doctest::Approx(enumerate_extension(o, y)).epsilon(1e-10));
    }
  }
}

TEST_CASE("sampling at a vertex is exact with zero error") {
  const auto cov = coverage_example();
  const std::vector<double> y = {1.0, 0.0};
  const auto est = ml::eval_sample(cov, y, 50, RngKey::root(3));
  CHECK(est.mean == cov.value(ItemSet::of(2, {0})));
  CHECK(est.std_error == 0);
  CHECK(est.samples == 50);
}

TEST_CASE("sampling concentrates near the exact value") {
  const auto cov = coverage_example();
  const std::vector<double> y = {0.5, 0.5};
  const auto est = ml::eval_sample(cov, y, 100000, RngKey::root(11));
  CHECK(std::abs(est.mean - 1.25) <= 3 * est.std_error);

  const auto add = ValuationOracle::additive({2, 0});
  const std::vector<double> y2 = {0.5, 1.0};
  const auto est2 = ml::eval_sample(add, y2, 10000, RngKey::root(12));
  CHECK(std::abs(est2.mean - 1.0) <= 3 * est2.std_error);
}

TEST_CASE("sampling calibration over seeded trials") {
  // The exact value should land inside +-3 standard errors almost always.
  const auto cov = coverage_example();
  const std::vector<double> y = {0.35, 0.65};
  const double exact = ml::eval_exact(cov, y);
  int hits = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const auto est = ml::eval_sample(cov, y, 4000, RngKey::root(1000 + static_cast<std::uint64_t>(t)));
    if (std::abs(est.mean - exact) <= 3 * est.std_error) ++hits;
  }
  CHECK(hits >= 198);  // >= 99%
}

TEST_CASE("partial derivatives, frozen examples") {
  const auto add = ValuationOracle::additive({2, 0});
  CHECK(ml::partial_exact(add, std::vector<double>{0.3, 0.9}, 0) == doctest::Approx(2.0));

  // 1 - (chance the element is already covered by item 1) = 0.5.
  const auto cov = coverage_example();
  CHECK(ml::partial_exact(cov, std::vector<double>{0.0, 0.5}, 0) == doctest::Approx(0.5));

  // Zero singleton value forces a zero derivative everywhere.
  const auto zero = ValuationOracle::additive({0, 1});
  CHECK(ml::partial_exact(zero, std::vector<double>{0.4, 0.4}, 0) == 0);
}

TEST_CASE("derivative identity") {
  SplitMix64 rng = RngKey::root(23).stream();
  for (const auto& o : sample_oracles(6)) {
    const auto y = random_point(6, rng);
    for (int j = 0; j < 6; ++j) {
      auto hi = y, lo = y;
      hi[static_cast<std::size_t>(j)] = 1.0;
      lo[static_cast<std::size_t>(j)] = 0.0;
      const double diff = ml::eval_exact_raw(o, hi) - ml::eval_exact_raw(o, lo);
      // The operation is that difference by definition.
      CHECK(ml::partial_exact_raw(o, y, j) == diff);
      // Centered finite difference: the extension is linear per coordinate.
      auto up = y, down = y;
      const double h = 0.125;
      up[static_cast<std::size_t>(j)] = std::min(1.0, y[static_cast<std::size_t>(j)] + h);
      down[static_cast<std::size_t>(j)] = std::max(0.0, y[static_cast<std::size_t>(j)] - h);
      const double fd = (ml::eval_exact_raw(o, up) - ml::eval_exact_raw(o, down)) /
                        (up[static_cast<std::size_t>(j)] - down[static_cast<std::size_t>(j)]);
      CHECK(fd == doctest::Approx(diff).epsilon(1e-9));
      // Range: [0, v({j})].
      const double d = ml::partial_exact_raw(o, y, j);
      CHECK(d >= -1e-12);
      CHECK(d <= o.raw_singleton(j) + 1e-12);
    }
  }
}

TEST_CASE("batched exact partials match singles") {
  SplitMix64 rng = RngKey::root(29).stream();
  for (const auto& o : sample_oracles(6)) {
    const auto y = random_point(6, rng);
    const auto batch = ml::partials_exact_raw(o, y);
    for (int j = 0; j < 6; ++j) {
      CHECK(batch[static_cast<std::size_t>(j)] ==
            doctest::Approx(ml::partial_exact_raw(o, y, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampled partials are close to exact") {
  const auto cov = coverage_example();
  const std::vector<double> y = {0.0, 0.5};
  const auto est = ml::partial_sampled(cov, y, 0, 20000, RngKey::root(31));
  CHECK(std::abs(est.mean - 0.5) <= 4 * est.std_error + 1e-9);
}

TEST_CASE("batched sampling agrees with separate estimates") {
  for (const auto& o : sample_oracles(6)) {
    SplitMix64 rng = RngKey::root(37).stream();
    const auto y = random_point(6, rng);
    const auto batch = ml::sample_value_and_partials(o, y, 20000, RngKey::root(41));
    const double exact_v = ml::eval_exact_raw(o, y);
    CHECK(std::abs(batch.value.mean - exact_v) <= 4 * batch.value.std_error + 1e-9);
    const auto exact_p = ml::partials_exact_raw(o, y);
    for (int j = 0; j < 6; ++j) {
      CHECK(batch.partials[static_cast<std::size_t>(j)] ==
            doctest::Approx(exact_p[static_cast<std::size_t>(j)]).epsilon(0.15).scale(1.0));
    }
  }
}

TEST_CASE("directional monotonicity and concavity") {
  SplitMix64 rng = RngKey::root(43).stream();
  for (const auto& o : sample_oracles(6)) {
    for (int trial = 0; trial < 6; ++trial) {
      auto y = random_point(6, rng);
      for (auto& v : y) v *= 0.5;
      std::vector<double> dir(6);
      for (auto& v : dir) v = rng.next_unit() * 0.5;
      auto at = [&](double t) {
        std::vector<double> p(6);
        for (int j = 0; j < 6; ++j) {
          p[static_cast<std::size_t>(j)] =
              y[static_cast<std::size_t>(j)] + t * dir[static_cast<std::size_t>(j)];
        }
        return ml::eval_exact_raw(o, p);
      };
      double prev = at(0.0);
      for (int g = 1; g <= 8; ++g) {
        const double cur = at(g / 8.0);
        CHECK(cur >= prev - 1e-9);
        prev = cur;
      }
      // Midpoint concavity along the nonnegative direction.
      for (int g = 0; g + 2 <= 8; g += 2) {
        const double t1 = g / 8.0, t2 = (g + 2) / 8.0;
        CHECK(at(t1) + at(t2) <= 2 * at((t1 + t2) / 2) + 1e-9);
      }
    }
  }
}

TEST_CASE("overlay evaluation") {
  const auto cov = coverage_example();
  // From zero, overlaying a singleton gives its value.
  CHECK(ml::eval_overlay_exact(cov, std::vector<double>{0, 0}, ItemSet::of(2, {1})) == 2);
  // Item 1 covers everything regardless of the rest.
  CHECK(ml::eval_overlay_exact(cov, std::vector<double>{0.5, 0}, ItemSet::of(2, {1})) == 2);
  // Empty overlay is the identity.
  const std::vector<double> y = {0.3, 0.7};
  CHECK(ml::eval_overlay_exact(cov, y, ItemSet(2)) == ml::eval_exact(cov, y));
}

TEST_CASE("support limit for enumeration") {
  // 26 strictly fractional coordinates on a family with no closed form.
  std::vector<double> w(30, 1.0);
  const auto o = ValuationOracle::budget_additive(w, 7);
  std::vector<double> y(30, 0.5);
  CHECK_FALSE(ml::exact_available(o, y));
  CHECK_THROWS_AS(ml::eval_exact_raw(o, y), SizeLimitError);
  // The same point is fine for closed-form families.
  const auto add = ValuationOracle::additive(w);
  CHECK(ml::exact_available(add, y));
  CHECK(ml::eval_exact_raw(add, y) == doctest::Approx(15.0));
}

TEST_CASE("fractional allocation feasibility checks") {
  FractionalAllocation y(2, 2);
  y.at(0, 0) = 0.6;
  y.at(1, 0) = 0.6;  // column sum 1.2
  CHECK_THROWS_AS(y.validate(), InvariantError);
  y.at(1, 0) = 0.4;
  CHECK_NOTHROW(y.validate());
  y.at(0, 1) = 1.5;
  CHECK_THROWS_AS(y.validate(), InvariantError);
}

TEST_CASE("restrict and overlay row helpers") {
  const std::vector<double> row = {0.2, 0.4, 0.8};
  const auto restricted = restrict_row(row, ItemSet::of(3, {1}));
  CHECK(restricted == std::vector<double>{0.0, 0.4, 0.0});
  const auto overlaid = overlay_row(row, ItemSet::of(3, {0, 2}));
  CHECK(overlaid == std::vector<double>{1.0, 0.4, 1.0});
}
