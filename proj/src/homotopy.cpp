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

#include "awes/homotopy.hpp"

#include <string>
#include <utility>

namespace awes {

void validate(const HomotopySchedule& s) {
  if (!(s.tau_final > 0.0 && s.tau_final <= s.tau_intermediate && s.tau_intermediate <= s.tau_initial)) {
    throw Error(ErrorCode::kConfigError, "barrier schedule needs 0 < tau_f <= tau_i <= tau_0");
  }
  if (!(s.penalty.minCoeff() > 0.0)) throw Error(ErrorCode::kConfigError, "homotopy penalties must be positive");
}

StageFailure::StageFailure(int stage, std::vector<StageReport> history)
    : Error(ErrorCode::kStageFailure, "stage " + std::to_string(stage) + " (" +
                                          std::string(stage_name(history.back().tag)) + ") ended " +
                                          std::string(nlp::status_name(history.back().report.status)) + ": " +
                                          history.back().report.message),
      stage_(stage),
      history_(std::move(history)) {}

namespace {

// Inputs switched off by each homotopy parameter, as control offsets.
std::vector<int> released_inputs(int parameter) {
  if (parameter == 0) return {su::kFictForce, su::kFictForce + 1, su::kFictForce + 2,
                              su::kFictTorque, su::kFictTorque + 1, su::kFictTorque + 2};
  if (parameter == 1) return {su::kPropulsion};
  return {};
}

}  // namespace

PiphResult run_piph(Transcription& tr, const Eigen::VectorXd& w0, const HomotopySchedule& schedule,
                    const nlp::SolverOptions& options, const std::function<void(const StageReport&)>& on_stage) {
  validate(schedule);
  if (w0.size() != tr.layout.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial guess does not match the transcription");
  }
  const int phi0 = tr.layout.homotopy();
  Vec3<double> lower = Vec3<double>::Ones();
  Vec3<double> upper = Vec3<double>::Ones();
  auto apply_phi_bounds = [&] {
    for (int i = 0; i < kNumHomotopy; ++i) tr.problem.set_variable_bounds(phi0 + i, lower(i), upper(i));
  };

  PiphResult result;
  nlp::PrimalDualPoint point;
  point.x = tr.to_scaled(w0);
  point.x.tail<kNumHomotopy>().setOnes();

  for (int stage = 0; stage < kNumStages; ++stage) {
    const auto tag = static_cast<StageTag>(stage);
    nlp::SolverOptions opt = options;
    if (tag == StageTag::kInit) {
      opt.barrier_initial = opt.barrier_upper = schedule.tau_initial;
      opt.barrier_lower = schedule.tau_intermediate;
    } else if (tag == StageTag::kFinal) {
      opt.barrier_initial = opt.barrier_upper = schedule.tau_intermediate;
      opt.barrier_lower = schedule.tau_final;
    } else {
      opt.barrier_initial = opt.barrier_upper = opt.barrier_lower = schedule.tau_intermediate;
      const int i = (stage - 1) / 2;
      if ((stage - 1) % 2 == 0) {
        lower(i) = 0.0;
      } else {
        upper(i) = 0.0;
        point.x(phi0 + i) = 0.0;
        if (schedule.fix_released_inputs) {
          for (int k : released_inputs(i)) {
            for (int n = 0; n < tr.layout.nodes; ++n) {
              const int v = tr.layout.control(n) + k;
              tr.problem.set_variable_bounds(v, 0.0, 0.0);
              point.x(v) = 0.0;
            }
          }
        }
      }
    }
    apply_phi_bounds();
    point.barrier = 0.0;

    nlp::SolveResult solved = nlp::solve_nlp(tr.problem, point, opt);
    StageReport rep;
    rep.tag = tag;
    rep.barrier_lower = opt.barrier_lower;
    rep.barrier_upper = opt.barrier_upper;
    rep.phi_lower = lower;
    rep.phi_upper = upper;
    rep.phi = solved.point.x.tail<kNumHomotopy>();
    rep.report = std::move(solved.report);
    result.stages.push_back(rep);
    if (on_stage) on_stage(rep);
    if (rep.report.status != nlp::SolveStatus::kOptimal) throw StageFailure(stage + 1, result.stages);
    point = std::move(solved.point);
  }
  result.w = tr.to_physical(point.x);
  result.point = std::move(point);
  return result;
}

}  // namespace awes
