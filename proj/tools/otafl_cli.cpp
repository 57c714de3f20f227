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

// Command-line entry point: otafl {schedule,train,sweep,bound}.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "otafl/harness/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Differentially private over-the-air federated learning experiments"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::int64_t> seed_override;
  app.add_option("--config", config_path, "Experiment config (JSON)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed-override", seed_override, "Replace the config's seed list");

  CLI::App* schedule = app.add_subcommand("schedule", "Print the scheduling decision as JSON");
  CLI::App* train = app.add_subcommand("train", "Write per-round metrics CSVs");
  CLI::App* sweep = app.add_subcommand("sweep", "Run a power or fleet-size sweep");
  CLI::App* bound = app.add_subcommand("bound", "Print the optimality-gap bound trajectory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? otafl::harness::kExitOk : otafl::harness::kExitConfigError;
  }

  otafl::harness::CommandOptions options;
  options.config_path = config_path;
  if (!out_dir.empty()) options.out_dir = out_dir;
  if (seed_override) {
    if (*seed_override < 0) {
      std::cerr << "config error: --seed-override must be nonnegative\n";
      return otafl::harness::kExitConfigError;
    }
    options.seed_override = static_cast<std::uint64_t>(*seed_override);
  }

  return otafl::harness::RunGuarded(
      [&] {
        if (schedule->parsed()) {
          otafl::harness::CmdSchedule(options, std::cout);
        } else if (train->parsed()) {
          for (const std::string& name : otafl::harness::CmdTrain(options)) {
            std::cout << name << '\n';
          }
        } else if (sweep->parsed()) {
          for (const std::string& name : otafl::harness::CmdSweep(options)) {
            std::cout << name << '\n';
          }
        } else if (bound->parsed()) {
          otafl::harness::CmdBound(options, std::cout);
        }
      },
      std::cerr);
}
