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

// Experiment configuration: flat JSON with explicit units.
//
// Physical parameters (power, gains, noise, privacy budget) have no
// defaults; a missing key is a configuration error. Unknown keys are also
// rejected so that typos cannot silently fall back to something else.
//
//   {
//     "experiment": "power_sweep",
//     "n_devices": 10, "power_w": 25.0, "min_gain": 0.1, "fleet_seed": 7,
//     "deep_faded_devices": 1,              // optional, default 0
//     "fleet_file": "fleet.json",           // alternative to the four above
//     "epsilon": 10.0, "delta": 0.1, "noise_std": 1.0,
//     "dimension": 20, "condition_number": 10.0, "task_seed": 3,
//     "samples_per_device": 20, "heterogeneity": 0.1,   // optional
//     "label_noise": 0.1, "target_scale": 1.0,          // optional
//     "rounds": 50, "seeds": [1, 2, 3],
//     "modes": ["scheduled", "full_participation"],
//     "grad_bound": 5.0, "step_size": 0.1,              // optional overrides
//     "sweep_parameter": "power", "sweep_values": [1, 25, 100, 1000]
//   }

#ifndef OTAFL_HARNESS_CONFIG_HPP_
#define OTAFL_HARNESS_CONFIG_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "otafl/task.hpp"
#include "otafl/trainer.hpp"

namespace otafl::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FleetSource {
  std::optional<std::string> file;
  int n_devices = 0;
  double power_w = 0.0;
  double min_gain = 0.0;
  std::uint64_t seed = 0;
  int deep_faded_devices = 0;
};

enum class SweepParameter { kPower, kFleetSize };

inline std::string_view ToString(SweepParameter p) {
  return p == SweepParameter::kPower ? "power" : "fleet_size";
}

struct ExperimentConfig {
  std::string experiment;
  FleetSource fleet;
  double epsilon = 0.0;
  double delta = 0.0;
  double noise_std = 0.0;
  int dimension = 0;

  // Task; absent for schedule-only configs.
  std::optional<double> condition_number;
  std::optional<std::uint64_t> task_seed;
  QuadraticTaskOptions task_options;

  int rounds = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<Mode> modes;
  std::optional<double> grad_bound;
  std::optional<double> step_size;

  std::optional<SweepParameter> sweep_parameter;
  std::vector<double> sweep_values;

  bool has_task() const { return condition_number.has_value() && task_seed.has_value(); }
};

namespace internal {

// Reads typed fields from a JSON object and remembers which keys were used.
class FieldReader {
 public:
  explicit FieldReader(const nlohmann::json& doc) : doc_(doc) {
    if (!doc_.is_object()) throw ConfigError("config must be a JSON object");
  }

  bool Has(const std::string& key) {
    known_.insert(key);
    return doc_.contains(key);
  }

  double Number(const std::string& key) {
    const nlohmann::json& v = Get(key);
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
  }

  double Positive(const std::string& key) {
    const double v = Number(key);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + key + "' must be positive");
    return v;
  }

  std::int64_t Integer(const std::string& key) {
    const nlohmann::json& v = Get(key);
    if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t PositiveInteger(const std::string& key) {
    const std::int64_t v = Integer(key);
    if (v < 1) throw ConfigError("'" + key + "' must be a positive integer");
    return v;
  }

  std::uint64_t Seed(const std::string& key) { return ToSeed(Get(key), key); }

  std::string String(const std::string& key) {
    const nlohmann::json& v = Get(key);
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
    return v.get<std::string>();
  }

  const nlohmann::json& Array(const std::string& key) {
    const nlohmann::json& v = Get(key);
    if (!v.is_array()) throw ConfigError("'" + key + "' must be an array");
    return v;
  }

  static std::uint64_t ToSeed(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
      throw ConfigError("'" + key + "' must be a nonnegative integer seed");
    }
    return v.get<std::uint64_t>();
  }

  void RejectUnknown() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!known_.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }
  }

 private:
  const nlohmann::json& Get(const std::string& key) {
    known_.insert(key);
    if (!doc_.contains(key)) throw ConfigError("missing required key '" + key + "'");
    return doc_.at(key);
  }

  const nlohmann::json& doc_;
  std::set<std::string> known_;
};

}  // namespace internal

// `base_dir` resolves a relative fleet_file.
inline ExperimentConfig ParseExperimentConfig(const nlohmann::json& doc,
                                              const std::filesystem::path& base_dir = {}) {
  internal::FieldReader r(doc);
  ExperimentConfig c;
  c.experiment = r.Has("experiment") ? r.String("experiment") : "experiment";
  if (c.experiment.empty() ||
      c.experiment.find_first_of("/\\,\n") != std::string::npos) {
    throw ConfigError("'experiment' must be a non-empty name without '/', ',' or newlines");
  }

  const bool generated_keys = r.Has("n_devices") || r.Has("power_w") ||
                              r.Has("min_gain") || r.Has("fleet_seed");
  if (r.Has("fleet_file")) {
    if (generated_keys) {
      throw ConfigError("give either 'fleet_file' or generated-fleet keys, not both");
    }
    std::filesystem::path path = r.String("fleet_file");
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    if (!std::filesystem::exists(path)) {
      throw ConfigError("fleet file does not exist: " + path.string());
    }
    c.fleet.file = path.string();
  } else {
    c.fleet.n_devices = static_cast<int>(r.PositiveInteger("n_devices"));
    c.fleet.power_w = r.Positive("power_w");
    c.fleet.min_gain = r.Positive("min_gain");
    c.fleet.seed = r.Seed("fleet_seed");
  }
  if (r.Has("deep_faded_devices")) {
    const std::int64_t deep = r.Integer("deep_faded_devices");
    if (deep < 0) throw ConfigError("'deep_faded_devices' must be nonnegative");
    if (c.fleet.file) throw ConfigError("'deep_faded_devices' needs a generated fleet");
    if (deep > c.fleet.n_devices) {
      throw ConfigError("'deep_faded_devices' exceeds 'n_devices'");
    }
    c.fleet.deep_faded_devices = static_cast<int>(deep);
  }

  c.epsilon = r.Positive("epsilon");
  c.delta = r.Number("delta");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("'delta' must lie in (0, 1)");
  c.noise_std = r.Number("noise_std");
  if (!(c.noise_std >= 0.0) || !std::isfinite(c.noise_std)) {
    throw ConfigError("'noise_std' must be nonnegative");
  }
  c.dimension = static_cast<int>(r.PositiveInteger("dimension"));

  if (r.Has("condition_number") || r.Has("task_seed")) {
    c.condition_number = r.Number("condition_number");
    if (!(*c.condition_number >= 1.0)) throw ConfigError("'condition_number' must be >= 1");
    c.task_seed = r.Seed("task_seed");
  }
  if (r.Has("samples_per_device")) {
    c.task_options.samples_per_device = static_cast<int>(r.PositiveInteger("samples_per_device"));
  }
  if (r.Has("heterogeneity")) c.task_options.heterogeneity = r.Number("heterogeneity");
  if (r.Has("label_noise")) c.task_options.label_noise = r.Number("label_noise");
  if (r.Has("target_scale")) c.task_options.target_scale = r.Number("target_scale");
  if (c.task_options.heterogeneity < 0.0 || c.task_options.label_noise < 0.0 ||
      c.task_options.target_scale < 0.0) {
    throw ConfigError("task noise scales must be nonnegative");
  }

  if (r.Has("rounds")) c.rounds = static_cast<int>(r.PositiveInteger("rounds"));
  if (r.Has("seeds")) {
    for (const nlohmann::json& s : r.Array("seeds")) {
      c.seeds.push_back(internal::FieldReader::ToSeed(s, "seeds"));
    }
    if (c.seeds.empty()) throw ConfigError("'seeds' must be non-empty");
  }
  if (r.Has("modes")) {
    for (const nlohmann::json& m : r.Array("modes")) {
      if (!m.is_string()) throw ConfigError("'modes' entries must be strings");
      try {
        c.modes.push_back(ParseMode(m.get<std::string>()));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
    if (c.modes.empty()) throw ConfigError("'modes' must be non-empty");
    std::set<Mode> unique(c.modes.begin(), c.modes.end());
    if (unique.size() != c.modes.size()) throw ConfigError("'modes' has duplicates");
  }
  if (r.Has("grad_bound")) c.grad_bound = r.Positive("grad_bound");
  if (r.Has("step_size")) c.step_size = r.Positive("step_size");

  if (r.Has("sweep_parameter")) {
    const std::string p = r.String("sweep_parameter");
    if (p == "power") {
      c.sweep_parameter = SweepParameter::kPower;
    } else if (p == "fleet_size") {
      c.sweep_parameter = SweepParameter::kFleetSize;
    } else {
      throw ConfigError("'sweep_parameter' must be 'power' or 'fleet_size'");
    }
    for (const nlohmann::json& v : r.Array("sweep_values")) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw ConfigError("'sweep_values' entries must be positive numbers");
      }
      if (c.sweep_parameter == SweepParameter::kFleetSize && !v.is_number_integer()) {
        throw ConfigError("fleet_size sweep values must be integers");
      }
      c.sweep_values.push_back(v.get<double>());
    }
    if (c.sweep_values.empty()) throw ConfigError("'sweep_values' must be non-empty");
  } else if (r.Has("sweep_values")) {
    throw ConfigError("'sweep_values' given without 'sweep_parameter'");
  }

  r.RejectUnknown();
  return c;
}

inline ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError("cannot open config " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return ParseExperimentConfig(doc, std::filesystem::path(path).parent_path());
}

// Inputs of the `bound` command: either "phi" directly or the pieces of the
// penalty ("grad_bound", "n_devices", "k_size", "alignment", "dimension",
// "noise_std"). grad_bound is needed in both cases.
struct BoundConfig {
  LearningConstants constants;
  int rounds = 1;
  double phi = 0.0;
};

inline BoundConfig ParseBoundConfig(const nlohmann::json& doc) {
  internal::FieldReader r(doc);
  BoundConfig c;
  c.constants.smoothness = r.Positive("smoothness");
  c.constants.pl_constant = r.Positive("pl_constant");
  c.constants.grad_bound = r.Has("grad_bound") ? r.Positive("grad_bound") : 1.0;
  c.constants.initial_gap = r.Number("initial_gap");
  c.rounds = static_cast<int>(r.PositiveInteger("rounds"));
  try {
    c.constants.Validate();
    if (r.Has("phi")) {
      for (const char* key : {"n_devices", "k_size", "alignment", "dimension", "noise_std"}) {
        if (r.Has(key)) throw ConfigError(std::string("give either 'phi' or '") + key + "'");
      }
      c.phi = r.Number("phi");
      if (!(c.phi >= 0.0)) throw ConfigError("'phi' must be nonnegative");
    } else {
      const int n = static_cast<int>(r.PositiveInteger("n_devices"));
      const int k = static_cast<int>(r.PositiveInteger("k_size"));
      const double nu = r.Positive("alignment");
      const int d = static_cast<int>(r.PositiveInteger("dimension"));
      const double sigma = r.Number("noise_std");
      c.phi = PhiPenalty(k, n, nu, c.constants, d, sigma);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  r.RejectUnknown();
  return c;
}

inline BoundConfig LoadBoundConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError("cannot open config " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return ParseBoundConfig(doc);
}

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_CONFIG_HPP_
