// Copyright 2026 The AWES-OCP Authors
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

// Command-line front end:
//   awes run --config <file> [--tether flexible|rigid] [--out <dir>]
//   awes compare <dir_a> <dir_b> [--out <file>]
//   awes validate --config <file>
// Exit codes: 0 success, 2 invalid configuration or usage, 3 homotopy stage
// failure, 4 any other error. AWES_LOG_LEVEL selects quiet, info or debug.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "awes/config.hpp"
#include "awes/errors.hpp"
#include "awes/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;
constexpr int kExitOther = 4;

void report_error(const awes::Error& e, const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json line = {{"error", std::string(awes::error_name(e.code()))}, {"message", e.what()}};
  line.update(extra);
  std::cerr << line.dump() << '\n';
}

int run(const std::string& config_file, const std::optional<std::string>& tether,
        const std::optional<std::string>& out) {
  awes::ExperimentConfig config;
  try {
    config = awes::load_config(config_file);
    if (tether) config.params.tether_mode = awes::parse_tether_mode(*tether);
    if (out) config.output.directory = *out;
    awes::validate(config);
  } catch (const awes::Error& e) {
    report_error(e);
    return kExitConfig;
  }
  const awes::Logger log{awes::log_level_from_env(), &std::cerr};
  try {
    const awes::TrajectorySolution s = awes::run_experiment(config, log);
    awes::write_outputs(s, config, config.output.directory);
    if (log.enabled(awes::LogLevel::kInfo)) {
      std::cerr << "average_power " << s.average_power << " W, outputs in " << config.output.directory << '\n';
    }
    return 0;
  } catch (const awes::StageFailure& e) {
    report_error(e, {{"stage", e.stage()}, {"tag", std::string(awes::stage_name(e.report().tag))}});
    try {
      awes::write_failure(e, config, config.output.directory);
    } catch (const awes::Error& io) {
      report_error(io);
    }
    return kExitStage;
  } catch (const awes::Error& e) {
    report_error(e);
    return e.code() == awes::ErrorCode::kConfigError ? kExitConfig : kExitOther;
  }
}

int compare(const std::string& a, const std::string& b, const std::optional<std::string>& out) {
  try {
    const nlohmann::json report = awes::to_json(awes::compare_runs(a, b));
    if (out) {
      std::ofstream f(*out);
      if (!f) throw awes::Error(awes::ErrorCode::kIoError, "cannot write " + *out);
      f << report.dump(2) << '\n';
    } else {
      std::cout << report.dump(2) << '\n';
    }
    return 0;
  } catch (const awes::Error& e) {
    report_error(e);
    return kExitOther;
  }
}

int validate(const std::string& config_file) {
  try {
    awes::validate(awes::load_config(config_file));
    std::cout << "valid\n";
    return 0;
  } catch (const awes::Error& e) {
    report_error(e);
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory optimization for tethered aircraft with a winch"};
  app.require_subcommand(1);

  std::string config_file;
  std::optional<std::string> tether;
  std::optional<std::string> out;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment");
  run_cmd->add_option("--config", config_file, "Experiment configuration (JSON)")->required();
  run_cmd->add_option("--tether", tether, "Tether model override")->check(CLI::IsMember({"flexible", "rigid"}));
  run_cmd->add_option("--out", out, "Output directory override");

  std::string dir_a, dir_b;
  std::optional<std::string> report_file;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Compare two finished runs (b against a)");
  cmp_cmd->add_option("dir_a", dir_a, "Reference run, e.g. flexible")->required();
  cmp_cmd->add_option("dir_b", dir_b, "Other run, e.g. rigid")->required();
  cmp_cmd->add_option("--out", report_file, "Write the report to this file instead of stdout");

  CLI::App* val_cmd = app.add_subcommand("validate", "Check a configuration file");
  val_cmd->add_option("--config", config_file, "Experiment configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*run_cmd) return run(config_file, tether, out);
  if (*cmp_cmd) return compare(dir_a, dir_b, report_file);
  return validate(config_file);
}
