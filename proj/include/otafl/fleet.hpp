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

// Device population and wireless parameters.
//
// Each device k has a time-invariant complex channel h_k = |h_k| e^{j psi_k}
// and a transmit power budget P_k. The effective coefficient
// c_k = |h_k| sqrt(P_k) is the only quantity the scheduler looks at.

#ifndef OTAFL_FLEET_HPP_
#define OTAFL_FLEET_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "otafl/common.hpp"

namespace otafl {

struct DeviceProfile {
  int id = 0;
  double channel_gain = 0.0;  // |h_k|
  double phase = 0.0;         // psi_k in [0, 2pi)
  double max_power = 0.0;     // P_k, watts

  double Coefficient() const { return channel_gain * std::sqrt(max_power); }
};

// Ascending effective coefficients with the owning device ids attached.
struct EffectiveCoefficients {
  std::vector<double> values;
  std::vector<int> ids;
};

// Immutable device population. Construction validates every device and
// precomputes the ascending-c order (ties broken by ascending id).
class Fleet {
 public:
  explicit Fleet(std::vector<DeviceProfile> devices)
      : devices_(std::move(devices)) {
    internal::Require(!devices_.empty(), "fleet must contain at least one device");
    std::set<int> seen;
    for (const DeviceProfile& d : devices_) {
      internal::Require(std::isfinite(d.channel_gain) && d.channel_gain > 0.0,
                        "device " + std::to_string(d.id) +
                            ": channel gain must be positive");
      internal::Require(std::isfinite(d.max_power) && d.max_power > 0.0,
                        "device " + std::to_string(d.id) +
                            ": max power must be positive");
      internal::Require(std::isfinite(d.phase) && d.phase >= 0.0 &&
                            d.phase < 2.0 * std::numbers::pi,
                        "device " + std::to_string(d.id) +
                            ": phase must lie in [0, 2pi)");
      internal::Require(seen.insert(d.id).second,
                        "duplicate device id " + std::to_string(d.id));
    }
    sorted_order_.resize(devices_.size());
    std::iota(sorted_order_.begin(), sorted_order_.end(), std::size_t{0});
    std::sort(sorted_order_.begin(), sorted_order_.end(),
              [this](std::size_t a, std::size_t b) {
                const double ca = devices_[a].Coefficient();
                const double cb = devices_[b].Coefficient();
                if (ca != cb) return ca < cb;
                return devices_[a].id < devices_[b].id;
              });
  }

  std::size_t size() const { return devices_.size(); }
  const std::vector<DeviceProfile>& devices() const { return devices_; }

  // Positions into devices(), ordered by ascending coefficient.
  const std::vector<std::size_t>& sorted_order() const { return sorted_order_; }

  const DeviceProfile& Find(int id) const {
    for (const DeviceProfile& d : devices_) {
      if (d.id == id) return d;
    }
    throw InvalidArgument("unknown device id " + std::to_string(id));
  }

  bool Contains(int id) const {
    return std::any_of(devices_.begin(), devices_.end(),
                       [id](const DeviceProfile& d) { return d.id == id; });
  }

  // Device ids in ascending order.
  std::vector<int> Ids() const {
    std::vector<int> ids;
    ids.reserve(devices_.size());
    for (const DeviceProfile& d : devices_) ids.push_back(d.id);
    std::sort(ids.begin(), ids.end());
    return ids;
  }

 private:
  std::vector<DeviceProfile> devices_;
  std::vector<std::size_t> sorted_order_;
};

inline EffectiveCoefficients ComputeEffectiveCoefficients(const Fleet& fleet) {
  EffectiveCoefficients out;
  out.values.reserve(fleet.size());
  out.ids.reserve(fleet.size());
  for (std::size_t pos : fleet.sorted_order()) {
    const DeviceProfile& d = fleet.devices()[pos];
    out.values.push_back(d.Coefficient());
    out.ids.push_back(d.id);
  }
  return out;
}

// Amplitude of a circularly-symmetric complex Gaussian with per-component
// standard deviation `scale`.
struct RayleighGain {
  double scale = 1.0;
};

// Every device gets exactly `value` (before the min_gain floor).
struct PointMassGain {
  double value = 1.0;
};

using GainDistribution = std::variant<RayleighGain, PointMassGain>;

// Samples n devices with ids 1..n and equal power budgets. Gains below
// min_gain are clamped up to it. Pure function of its arguments.
inline Fleet SampleFleet(int n, double power, double min_gain,
                         std::uint64_t seed,
                         GainDistribution gains = RayleighGain{}) {
  internal::Require(n >= 1, "fleet size must be at least 1");
  internal::Require(std::isfinite(power) && power > 0.0,
                    "power must be positive");
  internal::Require(std::isfinite(min_gain) && min_gain > 0.0,
                    "min_gain must be positive");

  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), 0x466c6565u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform_phase(0.0,
                                                       2.0 * std::numbers::pi);

  std::vector<DeviceProfile> devices;
  devices.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    DeviceProfile d;
    d.id = k + 1;
    d.max_power = power;
    std::visit(
        [&](const auto& dist) {
          using T = std::decay_t<decltype(dist)>;
          if constexpr (std::is_same_v<T, RayleighGain>) {
            const double re = dist.scale * normal(rng);
            const double im = dist.scale * normal(rng);
            d.channel_gain = std::hypot(re, im);
            double psi = std::atan2(im, re);
            if (psi < 0.0) psi += 2.0 * std::numbers::pi;
            if (psi >= 2.0 * std::numbers::pi) psi = 0.0;
            d.phase = psi;
          } else {
            d.channel_gain = dist.value;
            d.phase = uniform_phase(rng);
          }
        },
        gains);
    d.channel_gain = std::max(d.channel_gain, min_gain);
    devices.push_back(d);
  }
  return Fleet(std::move(devices));
}

// Returns a copy of `fleet` where the `count` lowest-id devices have their
// gain pinned to `gain`. Used to plant deep-faded devices in experiments.
inline Fleet WithDeepFadedDevices(const Fleet& fleet, int count, double gain) {
  internal::Require(count >= 0 && static_cast<std::size_t>(count) <= fleet.size(),
                    "deep-faded device count out of range");
  internal::Require(gain > 0.0, "deep-fade gain must be positive");
  std::vector<DeviceProfile> devices = fleet.devices();
  std::sort(devices.begin(), devices.end(),
            [](const DeviceProfile& a, const DeviceProfile& b) {
              return a.id < b.id;
            });
  for (int k = 0; k < count; ++k) devices[static_cast<std::size_t>(k)].channel_gain = gain;
  return Fleet(std::move(devices));
}

}  // namespace otafl

#endif  // OTAFL_FLEET_HPP_
