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

// Per-round Gaussian differential-privacy accounting for aligned analog
// aggregation, where receiver noise is the only privacy mechanism.
//
// The received signal is y = nu * sum_k g_k + r with r ~ N(0, sigma^2 I).
// Swapping one sample on device k changes y by nu * (g_k - g_k'), so with
// every gradient surely clipped to norm <= grad_bound the L2 sensitivity is
// 2 * grad_bound * nu, and the Gaussian mechanism yields
//
//   epsilon = (2 * grad_bound * nu / sigma) * sqrt(2 ln(1.25 / delta)).
//
// The guarantee covers a single transmission. Nothing here composes across
// rounds; callers that need a T-round budget must compose themselves.

#ifndef OTAFL_DPCORE_HPP_
#define OTAFL_DPCORE_HPP_

#include <cmath>
#include <string>

#include "otafl/common.hpp"

namespace otafl {

// sqrt(2 ln(1.25 / delta)), defined for delta in (0, 1).
inline double PrivacyMultiplier(double delta) {
  internal::Require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  return std::sqrt(2.0 * std::log(1.25 / delta));
}

// (epsilon, delta) target plus its cached multiplier.
struct PrivacySpec {
  double epsilon = 0.0;
  double delta = 0.0;
  double multiplier = 0.0;

  static PrivacySpec Create(double epsilon, double delta) {
    internal::Require(std::isfinite(epsilon) && epsilon > 0.0,
                      "epsilon must be positive");
    return PrivacySpec{epsilon, delta, PrivacyMultiplier(delta)};
  }
};

// L2 sensitivity of the received signal to a single-sample swap.
inline double Sensitivity(double grad_bound, double alignment) {
  internal::Require(grad_bound >= 0.0 && alignment >= 0.0,
                    "sensitivity inputs must be nonnegative");
  return 2.0 * grad_bound * alignment;
}

inline double EpsilonPerRound(double grad_bound, double alignment,
                              double noise_std, double delta) {
  internal::Require(noise_std > 0.0,
                    "noise_std must be positive: zero noise gives no privacy");
  return Sensitivity(grad_bound, alignment) * PrivacyMultiplier(delta) /
         noise_std;
}

// Largest theta = grad_bound * nu for which the per-round epsilon stays within
// the budget: epsilon * sigma / (2 * multiplier).
inline double MaxThetaForPrivacy(const PrivacySpec& spec, double noise_std) {
  internal::Require(noise_std > 0.0, "noise_std must be positive");
  return spec.epsilon * noise_std / (2.0 * spec.multiplier);
}

// Any alignment at or below the privacy ceiling meets the budget; a smaller
// epsilon is a strictly stronger guarantee.
inline bool IsBudgetCompliant(const PrivacySpec& spec, double grad_bound,
                              double alignment, double noise_std) {
  const double nu_max = MaxThetaForPrivacy(spec, noise_std) / grad_bound;
  return alignment <= nu_max * (1.0 + kFeasibilityTolerance);
}

}  // namespace otafl

#endif  // OTAFL_DPCORE_HPP_
