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

// Penalty-based interior-point homotopy: eight warm-started solves that
// release and then clamp each homotopy parameter in turn.

#ifndef AWES_HOMOTOPY_HPP_
#define AWES_HOMOTOPY_HPP_

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "awes/errors.hpp"
#include "awes/nlp/solver.hpp"
#include "awes/transcription.hpp"

namespace awes {

enum class StageTag {
  kInit,
  kPhi1Release,
  kPhi1Clamp,
  kPhi2Release,
  kPhi2Clamp,
  kPhi3Release,
  kPhi3Clamp,
  kFinal,
};

inline constexpr int kNumStages = 2 * kNumHomotopy + 2;

constexpr std::string_view stage_name(StageTag tag) {
  switch (tag) {
    case StageTag::kInit: return "init";
    case StageTag::kPhi1Release: return "phi1-release";
    case StageTag::kPhi1Clamp: return "phi1-clamp";
    case StageTag::kPhi2Release: return "phi2-release";
    case StageTag::kPhi2Clamp: return "phi2-clamp";
    case StageTag::kPhi3Release: return "phi3-release";
    case StageTag::kPhi3Clamp: return "phi3-clamp";
    case StageTag::kFinal: return "final";
  }
  return "unknown";
}

struct HomotopySchedule {
  double tau_initial = 1e-1;       // tau_0
  double tau_intermediate = 1e-3;  // tau_i, held fixed between first and last solve
  double tau_final = 1e-8;         // tau_f
  Vec3<double> penalty{1e3, 1e3, 1e3};
  // Pin the inputs a clamped homotopy parameter has switched off to zero.
  bool fix_released_inputs = true;
};

void validate(const HomotopySchedule& schedule);

struct StageReport {
  StageTag tag = StageTag::kInit;
  double barrier_lower = 0.0;
  double barrier_upper = 0.0;
  Vec3<double> phi_lower = Vec3<double>::Ones();
  Vec3<double> phi_upper = Vec3<double>::Ones();
  Vec3<double> phi = Vec3<double>::Ones();  // value at the end of the stage
  nlp::SolveReport report;
};

class StageFailure : public Error {
 public:
  /// `history` holds every stage report up to and including the failing one.
  StageFailure(int stage, std::vector<StageReport> history);
  int stage() const noexcept { return stage_; }
  const StageReport& report() const noexcept { return history_.back(); }
  const std::vector<StageReport>& history() const noexcept { return history_; }

 private:
  int stage_;
  std::vector<StageReport> history_;
};

struct PiphResult {
  Eigen::VectorXd w;  // physical units
  nlp::PrimalDualPoint point;  // scaled, as returned by the last solve
  std::vector<StageReport> stages;
};

/// Runs the eight stages on `tr`, starting from the physical guess `w0`
/// with Phi = 1. The variable bounds of `tr` are modified along the way.
/// Throws StageFailure when a stage does not end Optimal.
PiphResult run_piph(Transcription& tr, const Eigen::VectorXd& w0, const HomotopySchedule& schedule,
                    const nlp::SolverOptions& options,
                    const std::function<void(const StageReport&)>& on_stage = {});

}  // namespace awes

#endif  // AWES_HOMOTOPY_HPP_
