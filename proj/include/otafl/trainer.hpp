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

// End-to-end training loop: broadcast, local full-batch gradient, clip,
// aligned over-the-air aggregation, global update.

#ifndef OTAFL_TRAINER_HPP_
#define OTAFL_TRAINER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otafl/aircomp.hpp"
#include "otafl/common.hpp"
#include "otafl/convergence.hpp"
#include "otafl/dpcore.hpp"
#include "otafl/fleet.hpp"
#include "otafl/scheduler.hpp"
#include "otafl/task.hpp"

namespace otafl {

enum class Mode { kScheduled, kFullParticipation, kNoiseFree };

inline std::string_view ToString(Mode mode) {
  switch (mode) {
    case Mode::kScheduled:
      return "scheduled";
    case Mode::kFullParticipation:
      return "full_participation";
    case Mode::kNoiseFree:
      return "noise_free";
  }
  return "unknown";
}

inline Mode ParseMode(std::string_view name) {
  if (name == "scheduled") return Mode::kScheduled;
  if (name == "full_participation") return Mode::kFullParticipation;
  if (name == "noise_free") return Mode::kNoiseFree;
  throw InvalidArgument("unknown mode '" + std::string(name) + "'");
}

struct TrainingConfig {
  int rounds = 1;
  std::optional<double> step_size;   // default 1/zeta
  std::optional<double> grad_bound;  // default: calibrated on m^0
  double noise_std = 1.0;
  PrivacySpec privacy;
  Mode mode = Mode::kScheduled;
  std::uint64_t seed = 0;
  // Forces nu instead of taking it from the scheduler; must satisfy both the
  // power and privacy constraints.
  std::optional<double> alignment_override;
};

struct RoundRecord {
  int round = 0;
  double loss = 0.0;
  double gap = 0.0;
  double bound = 0.0;  // NaN when the step size is not 1/zeta
  int k_size = 0;
  double theta = 0.0;
  double epsilon_round = 0.0;  // +inf when there is no channel noise
  double error_sq = 0.0;       // ||g~ - grad L(m)||^2 of this round's update
  double grad_sq = 0.0;        // ||grad L(m)||^2 at the model this round updated
  int clipped = 0;             // scheduled gradients that hit the clip
};

// Everything fixed before round 1.
struct TrainingPlan {
  Mode mode = Mode::kScheduled;
  std::vector<int> scheduled;
  double theta = 0.0;
  double alignment = 0.0;
  double grad_bound = 0.0;
  double step_size = 0.0;
  double noise_std = 0.0;
  double theta_cap = 0.0;
  double epsilon_round = 0.0;
  double phi = 0.0;
  bool bound_enabled = true;
  LearningConstants constants;
  std::optional<SchedulingDecision> decision;
};

struct TrainingResult {
  TrainingPlan plan;
  std::vector<RoundRecord> records;
};

// g * min(1, grad_bound / ||g||).
inline Vector Clip(const Vector& gradient, double grad_bound) {
  internal::Require(grad_bound > 0.0, "grad_bound must be positive");
  const double norm = gradient.norm();
  if (norm <= grad_bound) return gradient;
  return gradient * (grad_bound / norm);
}

// 1.1 times the largest local gradient norm at the initial model.
inline double CalibrateGradBound(const QuadraticTask& task,
                                 double margin = 1.1) {
  const Vector m0 = task.initial_model();
  double largest = 0.0;
  for (int k = 0; k < task.num_devices(); ++k) {
    largest = std::max(largest, task.LocalGradient(k, m0).norm());
  }
  internal::Require(largest > 0.0, "all initial gradients vanish");
  return margin * largest;
}

namespace internal {

// Task device index for each fleet id: the rank of the id among all ids.
inline int TaskIndexFor(const Fleet& fleet, int id) {
  const std::vector<int> ids = fleet.Ids();
  return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id) -
                          ids.begin());
}

}  // namespace internal

// Resolves scheduling, alignment and accounting for a run. Throws
// InvalidArgument when the configuration breaks the power or privacy
// constraint.
inline TrainingPlan PlanTraining(const QuadraticTask& task, const Fleet& fleet,
                                 const TrainingConfig& config) {
  internal::Require(config.rounds >= 1, "rounds must be at least 1");
  internal::Require(static_cast<int>(fleet.size()) == task.num_devices(),
                    "fleet size must match the task's device count");
  internal::Require(!config.step_size || *config.step_size > 0.0,
                    "step_size must be positive");
  internal::Require(config.privacy.epsilon > 0.0,
                    "privacy spec must be initialised");

  TrainingPlan plan;
  plan.mode = config.mode;
  plan.grad_bound = config.grad_bound ? *config.grad_bound : CalibrateGradBound(task);
  internal::Require(plan.grad_bound > 0.0, "grad_bound must be positive");
  plan.step_size = config.step_size ? *config.step_size : 1.0 / task.smoothness();
  plan.bound_enabled = !config.step_size.has_value();

  if (config.mode == Mode::kNoiseFree) {
    plan.noise_std = 0.0;
    // Privacy is void without noise; nu only scales transmissions.
    plan.theta_cap = std::numeric_limits<double>::infinity();
  } else {
    internal::Require(config.noise_std > 0.0,
                      "noise_std must be positive outside noise_free mode");
    plan.noise_std = config.noise_std;
    plan.theta_cap = MaxThetaForPrivacy(config.privacy, config.noise_std);
  }

  const double cap_for_problem =
      std::isfinite(plan.theta_cap) ? plan.theta_cap
                                    : std::numeric_limits<double>::max();
  const SchedulingProblem problem = SchedulingProblem::FromFleet(
      fleet, task.dimension(), plan.noise_std, cap_for_problem);
  SchedulingDecision decision = config.mode == Mode::kScheduled
                                    ? Solve(problem)
                                    : FullParticipation(problem);
  plan.scheduled = decision.scheduled;
  plan.decision = decision;
  plan.theta = decision.theta;

  if (config.alignment_override) {
    const double nu = *config.alignment_override;
    internal::Require(nu > 0.0, "alignment override must be positive");
    const double theta = nu * plan.grad_bound;
    double min_c = std::numeric_limits<double>::infinity();
    for (int id : plan.scheduled) min_c = std::min(min_c, fleet.Find(id).Coefficient());
    internal::Require(theta <= min_c * (1.0 + kFeasibilityTolerance),
                      "alignment override violates the power constraint "
                      "(grad_bound * nu > min scheduled c)");
    internal::Require(theta <= plan.theta_cap * (1.0 + kFeasibilityTolerance),
                      "alignment override violates the privacy budget");
    plan.theta = theta;
  }
  plan.alignment = plan.theta / plan.grad_bound;

  AggregationSpec spec{plan.alignment, plan.noise_std, task.dimension(),
                       plan.scheduled};
  ComputePowerScaling(fleet, spec, plan.grad_bound);

  plan.epsilon_round =
      plan.noise_std > 0.0
          ? EpsilonPerRound(plan.grad_bound, plan.alignment, plan.noise_std,
                            config.privacy.delta)
          : std::numeric_limits<double>::infinity();

  plan.constants.smoothness = task.smoothness();
  plan.constants.pl_constant = task.pl_constant();
  plan.constants.grad_bound = plan.grad_bound;
  plan.constants.initial_gap = task.Gap(task.initial_model());
  plan.phi = PhiPenalty(static_cast<int>(plan.scheduled.size()),
                        static_cast<int>(fleet.size()), plan.alignment,
                        plan.constants, task.dimension(), plan.noise_std);
  return plan;
}

inline TrainingResult RunTraining(const QuadraticTask& task, const Fleet& fleet,
                                  const TrainingConfig& config) {
  TrainingResult result;
  result.plan = PlanTraining(task, fleet, config);
  const TrainingPlan& plan = result.plan;

  std::vector<int> task_index;
  task_index.reserve(plan.scheduled.size());
  for (int id : plan.scheduled) task_index.push_back(internal::TaskIndexFor(fleet, id));

  const AggregationSpec spec{plan.alignment, plan.noise_std, task.dimension(),
                             plan.scheduled};
  const NoiseStream noise(config.seed);
  Vector model = task.initial_model();
  result.records.reserve(static_cast<std::size_t>(config.rounds));

  for (int t = 1; t <= config.rounds; ++t) {
    GradientMap gradients;
    int clipped = 0;
    for (std::size_t i = 0; i < plan.scheduled.size(); ++i) {
      Vector g = task.LocalGradient(task_index[i], model);
      if (g.norm() > plan.grad_bound) ++clipped;
      gradients.emplace(plan.scheduled[i], Clip(g, plan.grad_bound));
    }
    const Vector estimate =
        AggregateAndEstimate(gradients, spec, noise, static_cast<std::uint64_t>(t));

    RoundRecord rec;
    rec.round = t;
    const Vector full_gradient = task.Gradient(model);
    rec.error_sq = RealizedError(estimate, full_gradient);
    rec.grad_sq = full_gradient.squaredNorm();
    model -= plan.step_size * estimate;
    rec.loss = task.Loss(model);
    rec.gap = task.Gap(model);
    rec.bound = plan.bound_enabled
                    ? OptimalityGapBound(t, plan.constants, plan.phi)
                    : std::numeric_limits<double>::quiet_NaN();
    rec.k_size = static_cast<int>(plan.scheduled.size());
    rec.theta = plan.theta;
    rec.epsilon_round = plan.epsilon_round;
    rec.clipped = clipped;
    result.records.push_back(rec);
  }
  return result;
}

}  // namespace otafl

#endif  // OTAFL_TRAINER_HPP_
