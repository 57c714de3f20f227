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

// Optimality-gap bound for gradient descent with a noisy, possibly partial
// gradient estimate on a zeta-smooth loss satisfying the PL inequality with
// constant rho, using step size 1/zeta:
//
//   E[L(m^T) - L*] <= eta^{T-1} G0 + Phi / (2 zeta) * (1 - eta^{T-1}) / (1 - eta)
//
// with eta = 1 - rho/zeta and the scheduling/noise penalty
//
//   Phi(K, nu) = 4 grad_bound^2 (1 - |K|/N)^2 + d sigma^2 / (|K|^2 nu^2).
//
// Unrolling the one-step recursion gives the same expression with exponent t
// in place of T-1; RecursionBound() evaluates that reading.

#ifndef OTAFL_CONVERGENCE_HPP_
#define OTAFL_CONVERGENCE_HPP_

#include <cmath>
#include <vector>

#include "otafl/common.hpp"

namespace otafl {

struct LearningConstants {
  double smoothness = 1.0;   // zeta
  double pl_constant = 1.0;  // rho, 0 < rho <= zeta
  double grad_bound = 1.0;
  double initial_gap = 0.0;  // E[L(m^0) - L*]

  void Validate() const {
    internal::Require(smoothness > 0.0, "smoothness must be positive");
    internal::Require(pl_constant > 0.0, "PL constant must be positive");
    internal::Require(pl_constant <= smoothness,
                      "PL constant cannot exceed smoothness");
    internal::Require(grad_bound > 0.0, "grad_bound must be positive");
    internal::Require(initial_gap >= 0.0, "initial gap must be nonnegative");
  }
};

inline double ContractionEta(const LearningConstants& constants) {
  constants.Validate();
  return 1.0 - constants.pl_constant / constants.smoothness;
}

inline double PhiPenalty(int k_size, int n_total, double alignment,
                         const LearningConstants& constants, int dimension,
                         double noise_std) {
  internal::Require(n_total >= 1 && k_size >= 1 && k_size <= n_total,
                    "k_size must lie in [1, N]");
  internal::Require(alignment > 0.0, "alignment must be positive");
  internal::Require(dimension >= 1 && noise_std >= 0.0,
                    "dimension and noise_std must be valid");
  const double deficit = 1.0 - static_cast<double>(k_size) / n_total;
  const double k = static_cast<double>(k_size);
  const double b = constants.grad_bound;
  return 4.0 * b * b * deficit * deficit +
         dimension * noise_std * noise_std / (k * k * alignment * alignment);
}

namespace internal {

// (1 - eta^n) / (1 - eta) for eta in [0, 1).
inline double GeometricSum(double eta, int n) {
  return (1.0 - std::pow(eta, n)) / (1.0 - eta);
}

inline double GapBoundWithExponent(int exponent,
                                   const LearningConstants& constants,
                                   double phi) {
  Require(phi >= 0.0, "phi must be nonnegative");
  const double eta = ContractionEta(constants);
  return std::pow(eta, exponent) * constants.initial_gap +
         phi / (2.0 * constants.smoothness) * GeometricSum(eta, exponent);
}

}  // namespace internal

// Bound after `rounds` rounds, exponent rounds - 1. rounds = 1 returns G0.
inline double OptimalityGapBound(int rounds, const LearningConstants& constants,
                                 double phi) {
  internal::Require(rounds >= 1, "rounds must be at least 1");
  return internal::GapBoundWithExponent(rounds - 1, constants, phi);
}

// The unrolled-recursion reading: exponent t for the model after t updates.
inline double RecursionBound(int updates, const LearningConstants& constants,
                             double phi) {
  internal::Require(updates >= 0, "updates must be nonnegative");
  return internal::GapBoundWithExponent(updates, constants, phi);
}

// Limit of both readings as the round count grows: Phi / (2 rho).
inline double BoundFloor(const LearningConstants& constants, double phi) {
  const double eta = ContractionEta(constants);
  return phi / (2.0 * constants.smoothness * (1.0 - eta));
}

// OptimalityGapBound for t = 1..rounds.
inline std::vector<double> BoundTrajectory(int rounds,
                                           const LearningConstants& constants,
                                           double phi) {
  internal::Require(rounds >= 1, "rounds must be at least 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rounds));
  for (int t = 1; t <= rounds; ++t) {
    out.push_back(OptimalityGapBound(t, constants, phi));
  }
  return out;
}

}  // namespace otafl

#endif  // OTAFL_CONVERGENCE_HPP_
