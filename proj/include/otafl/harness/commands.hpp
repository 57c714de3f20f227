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

// Subcommand bodies shared by the CLI and the tests.

#ifndef OTAFL_HARNESS_COMMANDS_HPP_
#define OTAFL_HARNESS_COMMANDS_HPP_

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otafl/common.hpp"
#include "otafl/harness/config.hpp"
#include "otafl/harness/experiments.hpp"
#include "otafl/harness/format.hpp"

namespace otafl::harness {

enum ExitCode { kExitOk = 0, kExitRuntimeError = 1, kExitConfigError = 2 };

struct CommandOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed_override;
};

// Files are written next to their destination under a temporary name and
// renamed only once every file of the command is complete. Anything left
// uncommitted is removed on destruction.
class StagedOutput {
 public:
  explicit StagedOutput(std::filesystem::path dir) : dir_(std::move(dir)) {}
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  ~StagedOutput() {
    std::error_code ec;
    for (const auto& [tmp, dest] : pending_) {
      if (std::filesystem::is_regular_file(tmp, ec)) std::filesystem::remove(tmp, ec);
    }
  }

  void Add(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir_);
    const std::filesystem::path dest = dir_ / name;
    std::filesystem::path tmp = dest;
    tmp += ".tmp";
    pending_.emplace_back(tmp, dest);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed to write " + tmp.string());
  }

  void Commit() {
    for (const auto& [tmp, dest] : pending_) std::filesystem::rename(tmp, dest);
    pending_.clear();
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::filesystem::path, std::filesystem::path>> pending_;
};

inline ExperimentConfig LoadWithOverrides(const CommandOptions& options) {
  if (options.config_path.empty()) throw ConfigError("--config is required");
  ExperimentConfig config = LoadExperimentConfig(options.config_path);
  if (options.seed_override) config.seeds = {*options.seed_override};
  return config;
}

inline std::filesystem::path OutDir(const CommandOptions& options) {
  return options.out_dir ? std::filesystem::path(*options.out_dir)
                         : std::filesystem::path(".");
}

inline void CmdSchedule(const CommandOptions& options, std::ostream& out) {
  const ExperimentConfig config = LoadWithOverrides(options);
  out << ScheduleDecisionJson(config).dump(2) << '\n';
}

// Returns the written file names.
inline std::vector<std::string> CmdTrain(const CommandOptions& options) {
  const ExperimentConfig config = LoadWithOverrides(options);
  const std::vector<ModeRun> runs = RunExperiment(config, config.experiment);
  StagedOutput staged(OutDir(options));
  std::vector<std::string> names;
  for (const ModeRun& run : runs) {
    names.push_back(config.experiment + "_" + std::string(ToString(run.mode)) + ".csv");
    staged.Add(names.back(), run.csv);
  }
  staged.Commit();
  return names;
}

inline std::vector<std::string> CmdSweep(const CommandOptions& options) {
  const ExperimentConfig config = LoadWithOverrides(options);
  const SweepResult sweep = RunSweep(config);
  const std::string param(ToString(sweep.parameter));
  StagedOutput staged(OutDir(options));
  std::vector<std::string> names;
  for (const SweepPoint& point : sweep.points) {
    for (const ModeRun& run : point.runs) {
      names.push_back(config.experiment + "_" + param + "=" + FormatDouble(point.value) +
                      "_" + std::string(ToString(run.mode)) + ".csv");
      staged.Add(names.back(), run.csv);
    }
  }
  names.push_back(config.experiment + "_sweep_" + param + ".csv");
  staged.Add(names.back(), SummaryCsv(sweep));
  staged.Commit();
  return names;
}

// Prints to `out` unless an output directory was given.
inline void CmdBound(const CommandOptions& options, std::ostream& out) {
  if (options.config_path.empty()) throw ConfigError("--config is required");
  const std::string csv = BoundCsv(LoadBoundConfig(options.config_path));
  if (options.out_dir) {
    StagedOutput staged(*options.out_dir);
    staged.Add("bound.csv", csv);
    staged.Commit();
  } else {
    out << csv;
  }
}

// Runs `body` and maps failures to exit codes.
inline int RunGuarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const AlignmentTooLarge& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_COMMANDS_HPP_
