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

// Seeded instance generators. All families produce integer-valued functions
// so enumeration-based golden tests stay bit-stable.

#ifndef NSW_GENERATOR_HPP
#define NSW_GENERATOR_HPP

#include <cstdint>
#include <string>

#include "nsw/valuations.hpp"

namespace nsw {

struct GeneratorSpec {
  std::string family;   // additive | coverage | budget_additive |
                        // partition_matroid_rank | tightness
  int n = 0;
  int m = 0;
  double density = 0.4;  // coverage: item-element edge probability
  int weight_max = 20;   // additive / budget_additive weight range
};

/// Deterministic: identical (spec, seed) yields an identical instance.
Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed);

/// The n-agent worst case for matching-restricted relaxations (n divisible
/// by 3): items 0..n-1 are the intended matched set, n/3 agents count those
/// items additively, the rest value any single item at 1.
Instance tightness_instance(int n);

}  // namespace nsw

#endif  // NSW_GENERATOR_HPP
