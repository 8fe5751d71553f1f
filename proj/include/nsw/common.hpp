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

#ifndef NSW_COMMON_HPP
#define NSW_COMMON_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nsw {

// Column sums of a fractional allocation may exceed 1 by at most this much.
inline constexpr double kFeasibilityTol = 1e-9;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Malformed user input (bad instance files, bad parameters). CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact procedure was asked to run beyond its size limits. CLI exit code 3.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant failed (estimator collapse, infeasible state).
/// CLI exit code 4.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Natural log extended with log(0) = -inf; callers treat -inf as "value 0".
inline double log_or_neg_inf(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

}  // namespace nsw

#endif  // NSW_COMMON_HPP
