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

// Synthetic distributed least-squares task with exactly known constants.
//
// Device k holds D samples (u, v) and the per-sample loss is
// l(m; u, v) = 0.5 (u^T m - v)^2, so every L_k and the global average L are
// quadratics. Features are whitened so that the average Hessian H has a
// prescribed spectrum linearly spaced in [1, condition_number]; the
// smoothness and PL constants are then lambda_max(H) and lambda_min(H), and
// the optimum is m* = H^{-1} b.

#ifndef OTAFL_TASK_HPP_
#define OTAFL_TASK_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "otafl/common.hpp"

namespace otafl {

struct Sample {
  Vector features;  // u
  double label = 0.0;  // v
};

struct QuadraticTaskOptions {
  int samples_per_device = 20;
  // Std of the per-device shift of the regression target; controls how far
  // the device optima spread around m*.
  double heterogeneity = 0.1;
  double label_noise = 0.1;
  // Std of each coordinate of the shared regression target.
  double target_scale = 1.0;
};

class QuadraticTask {
 public:
  static QuadraticTask Make(int n_devices, int dimension,
                            double condition_number, std::uint64_t seed,
                            const QuadraticTaskOptions& options = {}) {
    internal::Require(n_devices >= 1, "task needs at least one device");
    internal::Require(dimension >= 1, "dimension must be at least 1");
    internal::Require(condition_number >= 1.0, "condition number must be >= 1");
    internal::Require(dimension > 1 || condition_number == 1.0,
                      "a one-dimensional task has condition number 1");
    internal::Require(options.samples_per_device >= 1,
                      "samples_per_device must be at least 1");
    internal::Require(n_devices * options.samples_per_device >= dimension,
                      "need at least `dimension` samples in total");
    internal::Require(options.heterogeneity >= 0.0 && options.label_noise >= 0.0 &&
                          options.target_scale >= 0.0,
                      "task noise scales must be nonnegative");

    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32), 0x5461736bu};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto gaussian_vector = [&](int n) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = normal(rng);
      return v;
    };

    const int d = dimension;
    Vector spectrum(d);
    for (int i = 0; i < d; ++i) {
      spectrum[i] = d == 1 ? 1.0
                           : 1.0 + (condition_number - 1.0) * i / (d - 1);
    }
    Matrix gaussian(d, d);
    for (int j = 0; j < d; ++j) gaussian.col(j) = gaussian_vector(d);
    const Matrix rotation = Eigen::HouseholderQR<Matrix>(gaussian).householderQ();
    const Matrix target_sqrt =
        rotation * spectrum.cwiseSqrt().asDiagonal() * rotation.transpose();

    const int per_device = options.samples_per_device;
    const int total = n_devices * per_device;
    Matrix raw(d, total);
    for (int s = 0; s < total; ++s) raw.col(s) = gaussian_vector(d);
    const Matrix second_moment = raw * raw.transpose() / total;
    Eigen::SelfAdjointEigenSolver<Matrix> moment_eig(second_moment);
    internal::Require(moment_eig.eigenvalues().minCoeff() > 1e-8,
                      "raw features are rank deficient; add samples");
    const Matrix whiten = target_sqrt * moment_eig.operatorInverseSqrt();
    const Matrix features = whiten * raw;

    const Vector target = options.target_scale * gaussian_vector(d);
    QuadraticTask task;
    task.dimension_ = d;
    task.devices_.resize(static_cast<std::size_t>(n_devices));
    for (int k = 0; k < n_devices; ++k) {
      const Vector local_target = target + options.heterogeneity * gaussian_vector(d);
      std::vector<Sample>& data = task.devices_[static_cast<std::size_t>(k)].data;
      data.reserve(static_cast<std::size_t>(per_device));
      for (int s = 0; s < per_device; ++s) {
        Sample sample;
        sample.features = features.col(k * per_device + s);
        sample.label = sample.features.dot(local_target) +
                       options.label_noise * normal(rng);
        data.push_back(std::move(sample));
      }
    }
    task.Finalize();
    return task;
  }

  int num_devices() const { return static_cast<int>(devices_.size()); }
  int dimension() const { return dimension_; }
  double smoothness() const { return smoothness_; }
  double pl_constant() const { return pl_constant_; }
  const Vector& optimum() const { return optimum_; }
  double optimal_loss() const { return optimal_loss_; }
  const Matrix& hessian() const { return hessian_; }
  Vector initial_model() const { return Vector::Zero(dimension_); }

  std::span<const Sample> device_data(int k) const {
    return devices_.at(static_cast<std::size_t>(k)).data;
  }

  double DeviceLoss(int k, const Vector& m) const {
    const Device& dev = devices_.at(static_cast<std::size_t>(k));
    return 0.5 * m.dot(dev.hessian * m) - dev.linear.dot(m) + dev.constant;
  }

  Vector LocalGradient(int k, const Vector& m) const {
    const Device& dev = devices_.at(static_cast<std::size_t>(k));
    return dev.hessian * m - dev.linear;
  }

  double Loss(const Vector& m) const {
    return 0.5 * m.dot(hessian_ * m) - linear_.dot(m) + constant_;
  }

  Vector Gradient(const Vector& m) const { return hessian_ * m - linear_; }

  // L(m) - L(m*), evaluated as 0.5 (m - m*)^T H (m - m*) to avoid
  // cancellation near the optimum.
  double Gap(const Vector& m) const {
    const Vector delta = m - optimum_;
    return 0.5 * delta.dot(hessian_ * delta);
  }

  // Minimizer of L_k. Requires the device Hessian to be nonsingular.
  Vector DeviceOptimum(int k) const {
    const Device& dev = devices_.at(static_cast<std::size_t>(k));
    Eigen::LDLT<Matrix> ldlt(dev.hessian);
    internal::Require(ldlt.info() == Eigen::Success && ldlt.isPositive(),
                      "device Hessian is singular");
    return ldlt.solve(dev.linear);
  }

  // Per-sample evaluations straight from the data; independent of the cached
  // moments used by the methods above.
  static double DatasetLoss(std::span<const Sample> data, const Vector& m) {
    double total = 0.0;
    for (const Sample& s : data) {
      const double r = s.features.dot(m) - s.label;
      total += 0.5 * r * r;
    }
    return total / static_cast<double>(data.size());
  }

  static Vector DatasetGradient(std::span<const Sample> data, const Vector& m) {
    Vector g = Vector::Zero(m.size());
    for (const Sample& s : data) {
      g += (s.features.dot(m) - s.label) * s.features;
    }
    return g / static_cast<double>(data.size());
  }

 private:
  struct Device {
    std::vector<Sample> data;
    Matrix hessian;
    Vector linear;
    double constant = 0.0;
  };

  QuadraticTask() = default;

  void Finalize() {
    const int d = dimension_;
    hessian_ = Matrix::Zero(d, d);
    linear_ = Vector::Zero(d);
    constant_ = 0.0;
    for (Device& dev : devices_) {
      const double count = static_cast<double>(dev.data.size());
      dev.hessian = Matrix::Zero(d, d);
      dev.linear = Vector::Zero(d);
      dev.constant = 0.0;
      for (const Sample& s : dev.data) {
        dev.hessian.selfadjointView<Eigen::Lower>().rankUpdate(s.features);
        dev.linear += s.label * s.features;
        dev.constant += 0.5 * s.label * s.label;
      }
      dev.hessian = dev.hessian.selfadjointView<Eigen::Lower>();
      dev.hessian /= count;
      dev.linear /= count;
      dev.constant /= count;
      hessian_ += dev.hessian;
      linear_ += dev.linear;
      constant_ += dev.constant;
    }
    const double n = static_cast<double>(devices_.size());
    hessian_ /= n;
    linear_ /= n;
    constant_ /= n;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(hessian_, Eigen::EigenvaluesOnly);
    pl_constant_ = eig.eigenvalues().minCoeff();
    smoothness_ = eig.eigenvalues().maxCoeff();
    internal::Require(pl_constant_ > 0.0, "average Hessian is singular");
    optimum_ = hessian_.ldlt().solve(linear_);
    optimal_loss_ = constant_ - 0.5 * linear_.dot(optimum_);
  }

  int dimension_ = 0;
  std::vector<Device> devices_;
  Matrix hessian_;
  Vector linear_;
  double constant_ = 0.0;
  double smoothness_ = 0.0;
  double pl_constant_ = 0.0;
  Vector optimum_;
  double optimal_loss_ = 0.0;
};

}  // namespace otafl

#endif  // OTAFL_TASK_HPP_
