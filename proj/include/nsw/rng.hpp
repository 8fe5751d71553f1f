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

// Deterministic, hierarchically splittable randomness. Every stochastic
// procedure takes an RngKey; substreams are derived from (key, salt) so the
// same master seed reproduces identical results under any execution order.

#ifndef NSW_RNG_HPP
#define NSW_RNG_HPP

#include <cstdint>
#include <string_view>

namespace nsw {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Multiply-shift; bias is ~2^-64.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Key into a tree of independent random streams.
struct RngKey {
  std::uint64_t v = 0;

  static RngKey root(std::uint64_t seed) { return RngKey{mix64(seed + 0x6a09e667f3bcc909ull)}; }

  RngKey child(std::uint64_t salt) const {
    return RngKey{mix64(v + 0x9e3779b97f4a7c15ull * (salt + 0x243f6a8885a308d3ull))};
  }

  RngKey child(std::string_view tag) const {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return child(h);
  }

  SplitMix64 stream() const { return SplitMix64(v); }
};

}  // namespace nsw

#endif  // NSW_RNG_HPP
