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

// Aligned over-the-air aggregation.
//
// Scheduled device k pre-rotates its clipped gradient by e^{-j psi_k} and
// scales it so that |h_k| sqrt(phi_k P_k) / grad_bound equals a common
// alignment coefficient nu. The base station then receives
//
//   y = nu * sum_{k in K} g_k + r,   r ~ N(0, sigma^2 I_d)
//
// and forms the unbiased estimate y / (|K| nu). After phase correction the
// channel is exactly real, so the aggregation path works in real arithmetic
// and complex baseband is only used by TransmitSignal.

#ifndef OTAFL_AIRCOMP_HPP_
#define OTAFL_AIRCOMP_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "otafl/common.hpp"
#include "otafl/fleet.hpp"

namespace otafl {

using ComplexVector = Eigen::VectorXcd;
using GradientMap = std::map<int, Vector>;

// Receiver-noise source keyed by (seed, round). Each round gets its own
// engine, so the noise at round t does not depend on how many draws earlier
// rounds consumed or on which devices were scheduled.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::mt19937_64 EngineForRound(std::uint64_t round) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                      static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(round),
                      static_cast<std::uint32_t>(round >> 32), 0x4e6f6973u};
    return std::mt19937_64(seq);
  }

  // r ~ N(0, noise_std^2 I_dimension) for the given round.
  Vector Draw(std::uint64_t round, int dimension, double noise_std) const {
    Vector r = Vector::Zero(dimension);
    if (noise_std == 0.0) return r;
    std::mt19937_64 engine = EngineForRound(round);
    std::normal_distribution<double> normal(0.0, noise_std);
    for (int i = 0; i < dimension; ++i) r[i] = normal(engine);
    return r;
  }

 private:
  std::uint64_t seed_;
};

struct AggregationSpec {
  double alignment = 0.0;   // nu
  double noise_std = 0.0;   // sigma
  int dimension = 0;        // d
  std::vector<int> scheduled;

  void Validate() const {
    internal::Require(alignment > 0.0 && std::isfinite(alignment),
                      "alignment must be positive");
    internal::Require(noise_std >= 0.0 && std::isfinite(noise_std),
                      "noise_std must be nonnegative");
    internal::Require(dimension >= 1, "dimension must be at least 1");
    internal::Require(!scheduled.empty(), "scheduled set must be non-empty");
    std::set<int> unique(scheduled.begin(), scheduled.end());
    internal::Require(unique.size() == scheduled.size(),
                      "scheduled set contains duplicate ids");
  }
};

// Per-device power scaling factors phi_k, keyed by device id.
struct PowerScaling {
  std::map<int, double> factors;

  double at(int id) const {
    auto it = factors.find(id);
    internal::Require(it != factors.end(),
                      "no power scaling for device " + std::to_string(id));
    return it->second;
  }
};

// phi_k = nu^2 grad_bound^2 / c_k^2. Throws AlignmentTooLarge when some
// scheduled device would need phi_k > 1.
inline PowerScaling ComputePowerScaling(const Fleet& fleet,
                                        const AggregationSpec& spec,
                                        double grad_bound) {
  spec.Validate();
  internal::Require(grad_bound > 0.0, "grad_bound must be positive");
  PowerScaling out;
  for (int id : spec.scheduled) {
    const DeviceProfile& device = fleet.Find(id);
    const double c = device.Coefficient();
    const double phi = (spec.alignment * grad_bound) *
                       (spec.alignment * grad_bound) / (c * c);
    if (phi > 1.0 + kFeasibilityTolerance) {
      throw AlignmentTooLarge("device " + std::to_string(id) +
                              " needs power scaling " + std::to_string(phi) +
                              " > 1; alignment exceeds min c / grad_bound");
    }
    out.factors.emplace(id, phi);
  }
  return out;
}

// x_k = e^{-j psi_k} sqrt(phi_k P_k) / grad_bound * g_k.
inline ComplexVector TransmitSignal(const Vector& gradient,
                                    const DeviceProfile& device,
                                    double scaling, double grad_bound) {
  internal::Require(grad_bound > 0.0, "grad_bound must be positive");
  internal::Require(scaling >= 0.0 && scaling <= 1.0 + kFeasibilityTolerance,
                    "power scaling must lie in [0, 1]");
  internal::Require(
      gradient.norm() <= grad_bound * (1.0 + kFeasibilityTolerance),
      "gradient norm exceeds grad_bound; clip before transmitting");
  const double amplitude = std::sqrt(scaling * device.max_power) / grad_bound;
  const std::complex<double> rotation = std::polar(amplitude, -device.phase);
  return gradient.cast<std::complex<double>>() * rotation;
}

// h_k * x_k: what device k contributes at the receiver before noise.
inline ComplexVector ApplyChannel(const ComplexVector& signal,
                                  const DeviceProfile& device) {
  return signal * std::polar(device.channel_gain, device.phase);
}

namespace internal {

inline void CheckGradientsMatchSchedule(const GradientMap& gradients,
                                        const AggregationSpec& spec) {
  spec.Validate();
  Require(gradients.size() == spec.scheduled.size(),
          "gradients must be supplied exactly for the scheduled set");
  for (int id : spec.scheduled) {
    auto it = gradients.find(id);
    Require(it != gradients.end(),
            "missing gradient for scheduled device " + std::to_string(id));
    Require(it->second.size() == spec.dimension,
            "gradient dimension mismatch for device " + std::to_string(id));
  }
}

}  // namespace internal

// Real-equivalent received signal y = nu * sum g_k + noise.
inline Vector Superpose(const GradientMap& gradients,
                        const AggregationSpec& spec, const Vector& noise) {
  internal::CheckGradientsMatchSchedule(gradients, spec);
  internal::Require(noise.size() == spec.dimension, "noise dimension mismatch");
  Vector y = Vector::Zero(spec.dimension);
  for (const auto& [id, g] : gradients) y += g;
  return spec.alignment * y + noise;
}

// Post-processing at the base station: y / (|K| nu).
inline Vector EstimateFromReceived(const Vector& received,
                                   const AggregationSpec& spec) {
  return received /
         (static_cast<double>(spec.scheduled.size()) * spec.alignment);
}

// g~ = mean_{k in K} g_k + r / (|K| nu). Evaluated in this split form so
// that sigma = 0 yields the exact arithmetic mean.
inline Vector AggregateAndEstimate(const GradientMap& gradients,
                                   const AggregationSpec& spec,
                                   const NoiseStream& noise,
                                   std::uint64_t round) {
  internal::CheckGradientsMatchSchedule(gradients, spec);
  const double k = static_cast<double>(spec.scheduled.size());
  Vector sum = Vector::Zero(spec.dimension);
  for (const auto& [id, g] : gradients) sum += g;
  Vector estimate = sum / k;
  if (spec.noise_std > 0.0) {
    estimate += noise.Draw(round, spec.dimension, spec.noise_std) /
                (k * spec.alignment);
  }
  return estimate;
}

// ||e||^2 with e = estimate - grad L(m), the full-population gradient.
inline double RealizedError(const Vector& estimate,
                            const Vector& full_gradient) {
  internal::Require(estimate.size() == full_gradient.size(),
                    "dimension mismatch");
  return (estimate - full_gradient).squaredNorm();
}

}  // namespace otafl

#endif  // OTAFL_AIRCOMP_HPP_
