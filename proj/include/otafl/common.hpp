//
// Copyright 2026 The OTAFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef OTAFL_COMMON_HPP_
#define OTAFL_COMMON_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace otafl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Relative slack for feasibility checks. Every physical quantity handled by
// this library is O(1)-O(1e2), so a fixed relative tolerance is adequate.
inline constexpr double kFeasibilityTolerance = 1e-12;

// Raised when a caller violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a requested alignment coefficient would force some scheduled
// device above its power budget (power scaling factor > 1).
class AlignmentTooLarge : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace internal {

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace internal
}  // namespace otafl

#endif  // OTAFL_COMMON_HPP_
