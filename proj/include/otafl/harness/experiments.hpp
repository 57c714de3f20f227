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

// Experiment orchestration: builds fleets and tasks from a config, runs the
// trainer over modes and seeds, and renders CSV text.

#ifndef OTAFL_HARNESS_EXPERIMENTS_HPP_
#define OTAFL_HARNESS_EXPERIMENTS_HPP_

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "otafl/dpcore.hpp"
#include "otafl/fleet.hpp"
#include "otafl/fleet_io.hpp"
#include "otafl/harness/config.hpp"
#include "otafl/harness/format.hpp"
#include "otafl/scheduler.hpp"
#include "otafl/task.hpp"
#include "otafl/trainer.hpp"

namespace otafl::harness {

inline constexpr char kMetricsHeader[] =
    "experiment,mode,seed,round,loss,gap,bound,k_size,theta,epsilon_round";
inline constexpr char kSummaryHeader[] =
    "parameter,value,mode,k_size,theta,mean_final_gap,stderr_final_gap,"
    "decisions_coincide,lemma2_regime";

inline Fleet BuildFleet(const FleetSource& source) {
  if (source.file) return ReadFleetFile(*source.file);
  const Fleet fleet = SampleFleet(source.n_devices, source.power_w, source.min_gain,
                                  source.seed);
  return WithDeepFadedDevices(fleet, source.deep_faded_devices, source.min_gain);
}

inline QuadraticTask BuildTask(const ExperimentConfig& config, int n_devices) {
  if (!config.has_task()) {
    throw ConfigError("'condition_number' and 'task_seed' are required here");
  }
  return QuadraticTask::Make(n_devices, config.dimension, *config.condition_number,
                             *config.task_seed, config.task_options);
}

inline PrivacySpec PrivacyOf(const ExperimentConfig& config) {
  return PrivacySpec::Create(config.epsilon, config.delta);
}

inline TrainingConfig TrainingConfigFor(const ExperimentConfig& config, Mode mode,
                                        std::uint64_t seed) {
  TrainingConfig t;
  t.rounds = config.rounds;
  t.step_size = config.step_size;
  t.grad_bound = config.grad_bound;
  t.noise_std = config.noise_std;
  t.privacy = PrivacyOf(config);
  t.mode = mode;
  t.seed = seed;
  return t;
}

inline void RequireRunnable(const ExperimentConfig& config) {
  if (config.rounds < 1) throw ConfigError("missing required key 'rounds'");
  if (config.seeds.empty()) throw ConfigError("missing required key 'seeds'");
  if (config.modes.empty()) throw ConfigError("missing required key 'modes'");
  if (!config.has_task()) {
    throw ConfigError("'condition_number' and 'task_seed' are required for training");
  }
}

inline void AppendMetricsRows(std::string& out, const std::string& experiment, Mode mode,
                              std::uint64_t seed, const std::vector<RoundRecord>& records) {
  for (const RoundRecord& r : records) {
    out += experiment;
    out += ',';
    out += ToString(mode);
    out += ',' + std::to_string(seed);
    out += ',' + std::to_string(r.round);
    out += ',' + FormatDouble(r.loss);
    out += ',' + FormatDouble(r.gap);
    out += ',' + FormatDouble(r.bound);
    out += ',' + std::to_string(r.k_size);
    out += ',' + FormatDouble(r.theta);
    out += ',' + FormatDouble(r.epsilon_round);
    out += '\n';
  }
}

// Output of one mode over all seeds.
struct ModeRun {
  Mode mode = Mode::kScheduled;
  TrainingPlan plan;
  std::vector<double> final_gaps;  // one per seed, in seed order
  std::string csv;                 // header plus rows
};

inline ModeRun RunMode(const QuadraticTask& task, const Fleet& fleet,
                       const ExperimentConfig& config, Mode mode,
                       const std::string& experiment_label) {
  ModeRun run;
  run.mode = mode;
  run.csv = std::string(kMetricsHeader) + "\n";
  for (std::uint64_t seed : config.seeds) {
    TrainingResult result = RunTraining(task, fleet, TrainingConfigFor(config, mode, seed));
    run.final_gaps.push_back(result.records.back().gap);
    AppendMetricsRows(run.csv, experiment_label, mode, seed, result.records);
    run.plan = std::move(result.plan);
  }
  return run;
}

inline std::vector<ModeRun> RunExperiment(const ExperimentConfig& config,
                                          const std::string& experiment_label) {
  RequireRunnable(config);
  const Fleet fleet = BuildFleet(config.fleet);
  const QuadraticTask task = BuildTask(config, static_cast<int>(fleet.size()));
  std::vector<ModeRun> runs;
  for (Mode mode : config.modes) {
    runs.push_back(RunMode(task, fleet, config, mode, experiment_label));
  }
  return runs;
}

// Sample mean and standard error (n - 1 denominator; NaN for one sample).
inline std::pair<double, double> MeanAndStderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  if (xs.size() < 2) return {mean, std::nan("")};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

struct SweepPoint {
  double value = 0.0;
  bool decisions_coincide = false;  // scheduled and full decisions are identical
  bool lemma2_regime = false;       // c_1 >= theta_max
  std::vector<ModeRun> runs;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::kPower;
  std::vector<SweepPoint> points;
};

inline ExperimentConfig ConfigAtSweepValue(const ExperimentConfig& base, double value) {
  ExperimentConfig c = base;
  if (base.fleet.file) throw ConfigError("sweeps need a generated fleet, not 'fleet_file'");
  if (*base.sweep_parameter == SweepParameter::kPower) {
    c.fleet.power_w = value;
  } else {
    c.fleet.n_devices = static_cast<int>(value);
    if (c.fleet.deep_faded_devices > c.fleet.n_devices) {
      throw ConfigError("'deep_faded_devices' exceeds a fleet_size sweep value");
    }
  }
  return c;
}

inline std::string SweepLabel(const ExperimentConfig& config, double value) {
  return config.experiment + "/" + std::string(ToString(*config.sweep_parameter)) + "=" +
         FormatDouble(value);
}

inline SweepResult RunSweep(const ExperimentConfig& base) {
  if (!base.sweep_parameter) throw ConfigError("missing required key 'sweep_parameter'");
  RequireRunnable(base);
  SweepResult result;
  result.parameter = *base.sweep_parameter;
  for (double value : base.sweep_values) {
    const ExperimentConfig config = ConfigAtSweepValue(base, value);
    const Fleet fleet = BuildFleet(config.fleet);
    const QuadraticTask task = BuildTask(config, static_cast<int>(fleet.size()));

    SweepPoint point;
    point.value = value;
    const TrainingPlan scheduled =
        PlanTraining(task, fleet, TrainingConfigFor(config, Mode::kScheduled, 0));
    const TrainingPlan full =
        PlanTraining(task, fleet, TrainingConfigFor(config, Mode::kFullParticipation, 0));
    point.decisions_coincide =
        scheduled.scheduled == full.scheduled && scheduled.theta == full.theta;
    point.lemma2_regime =
        ComputeEffectiveCoefficients(fleet).values.front() >= scheduled.theta_cap;

    const std::string label = SweepLabel(config, value);
    for (Mode mode : config.modes) {
      point.runs.push_back(RunMode(task, fleet, config, mode, label));
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

inline std::string SummaryCsv(const SweepResult& sweep) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const SweepPoint& p : sweep.points) {
    for (const ModeRun& run : p.runs) {
      const auto [mean, se] = MeanAndStderr(run.final_gaps);
      out += std::string(ToString(sweep.parameter));
      out += ',' + FormatDouble(p.value);
      out += ',' + std::string(ToString(run.mode));
      out += ',' + std::to_string(run.plan.scheduled.size());
      out += ',' + FormatDouble(run.plan.theta);
      out += ',' + FormatDouble(mean);
      out += ',' + FormatDouble(se);
      out += p.decisions_coincide ? ",1" : ",0";
      out += p.lemma2_regime ? ",1" : ",0";
      out += '\n';
    }
  }
  return out;
}

// Decision for the `schedule` command. grad_bound comes from the config or,
// when absent, is calibrated on the task exactly as training would.
inline nlohmann::ordered_json ScheduleDecisionJson(const ExperimentConfig& config) {
  if (!(config.noise_std > 0.0)) throw ConfigError("'noise_std' must be positive to schedule");
  const Fleet fleet = BuildFleet(config.fleet);
  double grad_bound = 0.0;
  if (config.grad_bound) {
    grad_bound = *config.grad_bound;
  } else if (config.has_task()) {
    grad_bound = CalibrateGradBound(BuildTask(config, static_cast<int>(fleet.size())));
  } else {
    throw ConfigError("missing required key 'grad_bound'");
  }
  const double cap = MaxThetaForPrivacy(PrivacyOf(config), config.noise_std);
  const SchedulingProblem problem =
      SchedulingProblem::FromFleet(fleet, config.dimension, config.noise_std, cap);
  const SchedulingDecision decision = Solve(problem);
  const Lemma5Report report = BeatsFullParticipation(decision, problem);

  nlohmann::ordered_json out;
  out["scheduled_ids"] = decision.scheduled;
  out["theta"] = decision.theta;
  out["nu"] = AlignmentFor(decision, grad_bound);
  out["objective"] = decision.objective;
  out["candidate_index"] = decision.candidate_index;
  out["lemma5_verdict"] = std::string(ToString(report.verdict));
  return out;
}

inline std::string BoundCsv(const BoundConfig& config) {
  std::string out = "round,bound\n";
  for (int t = 1; t <= config.rounds; ++t) {
    out += std::to_string(t) + ',' +
           FormatDouble(OptimalityGapBound(t, config.constants, config.phi)) + '\n';
  }
  return out;
}

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_EXPERIMENTS_HPP_
