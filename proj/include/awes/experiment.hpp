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

// Experiment orchestration: guess, homotopy, post-processing, result files
// and the comparison of two runs.

#ifndef AWES_EXPERIMENT_HPP_
#define AWES_EXPERIMENT_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "awes/config.hpp"
#include "awes/homotopy.hpp"
#include "awes/transcription.hpp"

namespace awes {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

/// Verbosity from AWES_LOG_LEVEL (quiet, info, debug); info when unset.
LogLevel log_level_from_env();

struct Logger {
  LogLevel level = LogLevel::kInfo;
  std::ostream* stream = nullptr;
  bool enabled(LogLevel l) const { return stream && level >= l; }
};

struct TrajectorySolution {
  std::vector<double> time;
  std::vector<NodeVariables<double>> nodes;
  std::vector<std::vector<Vec3<double>>> tether;  // p_0 .. p_{N+1} per node, W frame
  std::vector<double> power;                      // winch_rate * generator_torque
  std::vector<Eigen::Matrix<double, kNumPathConstraints, 1>> path_values;
  double average_power = 0.0;            // (1/T) sum_{n=1}^{N_t} dt P_n
  double reel_out_average_power = 0.0;   // mean of P_n over nodes with winch_rate > 0
  double retraction_average_power = 0.0;  // mean of P_n over nodes with winch_rate < 0
  double objective = 0.0;
  double periodicity_residual = 0.0;   // max norm, physical units
  double fictitious_input_max = 0.0;   // max norm of scaled (f_fict, tau_fict, f_prop)
  double max_bound_violation = 0.0;    // variable bounds and inequality rows, scaled
  double max_equality_residual = 0.0;  // scaled
  double yaw_winding = 0.0;
  std::vector<StageReport> stages;
};

/// Post-processes a physical decision vector.
TrajectorySolution assemble_solution(const Transcription& tr, const Eigen::VectorXd& w, const ModelParams& params,
                                     double yaw_winding);

struct ExperimentSetup {
  Transcription transcription;
  Eigen::VectorXd guess;  // physical, Phi = 1
  double yaw_winding = 0.0;
};

/// Guess and transcription for a validated configuration.
ExperimentSetup prepare_experiment(const ExperimentConfig& config);

/// Full pipeline. Throws StageFailure when a homotopy stage fails.
TrajectorySolution run_experiment(const ExperimentConfig& config, const Logger& log = {});

/// trajectory.csv, tether.csv and summary.json, plus timing.json with the
/// wall-clock figures kept out of the reproducible files.
void write_outputs(const TrajectorySolution& solution, const ExperimentConfig& config,
                   const std::filesystem::path& dir);

/// summary.json and timing.json for a run that stopped at a failing stage.
void write_failure(const StageFailure& failure, const ExperimentConfig& config, const std::filesystem::path& dir);

std::vector<std::string> trajectory_columns();

struct RunData {
  std::vector<std::vector<double>> trajectory;  // rows of trajectory.csv
  std::vector<std::vector<Vec3<double>>> tether;
  nlohmann::json summary;
};

RunData load_run(const std::filesystem::path& dir);

struct ComparisonReport {
  std::vector<double> time;
  double average_power_a = 0.0;
  double average_power_b = 0.0;
  double overestimation_ratio = 0.0;  // average_power_b / average_power_a - 1
  double reel_out_power_difference = 0.0;    // mean P_b - P_a over reel-out nodes of run a
  double retraction_power_difference = 0.0;  // same over retraction nodes of run a
  std::vector<double> power_difference;
  std::vector<double> angle_difference;  // body-frame tether direction at the aircraft, rad
  int max_angle_node = 0;
  double max_angle_difference = 0.0;
  double winch_rate_at_max_angle = 0.0;  // run a
};

/// Compares run b against run a. Throws Error(kMeshMismatch) when the time
/// grids or tether discretizations differ.
ComparisonReport compare_runs(const std::filesystem::path& dir_a, const std::filesystem::path& dir_b);
nlohmann::json to_json(const ComparisonReport& report);

}  // namespace awes

#endif  // AWES_EXPERIMENT_HPP_
