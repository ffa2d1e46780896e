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

// Experiment configuration: one JSON document with a versioned layout.
// Unknown keys are rejected; absent keys keep their defaults.

#ifndef AWES_CONFIG_HPP_
#define AWES_CONFIG_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "awes/homotopy.hpp"
#include "awes/initialization.hpp"
#include "awes/nlp/solver.hpp"
#include "awes/ocp.hpp"
#include "awes/params.hpp"

namespace awes {

inline constexpr int kConfigSchemaVersion = 1;

struct CostConfig {
  CostWeights weights;
  double power_reference = 1e5;
  double fictitious_regularization = 1e-3;
};

struct OutputConfig {
  std::string directory = "out";
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelParams params;
  int intervals = 270;   // N_t
  double horizon = 90.0;  // T_f, s
  PathSpec path;
  int circle_loops = 6;
  int lemniscate_loops = 3;
  GuessOptions guess;
  PathBounds path_bounds;
  VariableBoundsTable variable_bounds;
  CostConfig cost;
  HomotopySchedule homotopy;
  nlp::SolverOptions solver;
  OutputConfig output;

  /// Path with duration and loop count resolved for the selected shape.
  PathSpec resolved_path() const;
  VariableBounds resolved_variable_bounds() const;
};

/// Throws Error(kConfigError) naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& document);
ExperimentConfig load_config(const std::filesystem::path& file);
nlohmann::json to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

std::string_view tether_mode_name(TetherMode mode);
TetherMode parse_tether_mode(std::string_view name);
std::string_view path_shape_name(PathShape shape);
PathShape parse_path_shape(std::string_view name);

}  // namespace awes

#endif  // AWES_CONFIG_HPP_
