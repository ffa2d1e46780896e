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

// Primal-dual interior-point method with a filter line search.
//
// Inequality rows receive slack variables, fixed variables are removed, and
// each Newton step solves the regularized sparse KKT system
//
//   [ W + Sigma + dw I    A^T  ] [dv]     [grad phi + A^T y]
//   [ A                 -dc I  ] [dy] = - [c               ]
//
// with dw raised until the factorization has the inertia of a local
// minimizer. The barrier parameter is kept inside [barrier_lower,
// barrier_upper]; with equal bounds it stays fixed for the whole solve.

#ifndef AWES_NLP_SOLVER_HPP_
#define AWES_NLP_SOLVER_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "awes/nlp/problem.hpp"

namespace awes::nlp {

enum class SolveStatus { kOptimal, kMaxIter, kInfeasible, kError };

constexpr std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kMaxIter: return "MaxIter";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kError: return "Error";
  }
  return "Unknown";
}

struct IterationLog {
  int iteration = 0;
  double objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double barrier = 0.0;
  double step = 0.0;
  double regularization = 0.0;
  int backtracks = 0;
  char kind = ' ';  // 'f' objective-type step, 'h' filter step, 'r' restoration
};

struct SolverOptions {
  double barrier_lower = 1e-8;
  double barrier_upper = 1e-1;
  double barrier_initial = 1e-1;  // used when the start point carries no barrier value
  double barrier_reduction = 0.2;
  double barrier_progress = 10.0;  // reduce once the barrier error is below this times mu
  int max_iterations = 3000;
  double kkt_tolerance = 1e-6;
  double feasibility_tolerance = 1e-7;

  double bound_push = 1e-2;
  double warm_bound_push = 1e-9;
  double fraction_to_boundary_min = 0.99;

  double armijo = 1e-4;
  double filter_gamma_theta = 1e-5;
  double filter_gamma_phi = 1e-5;
  double switching_delta = 1.0;
  double switching_s_theta = 1.1;
  double switching_s_phi = 2.3;
  int max_backtracks = 40;
  int max_second_order_corrections = 4;
  int max_restoration_iterations = 200;

  double constraint_regularization = 1e-9;
  int refinement_steps = 3;

  std::function<void(const IterationLog&)> on_iteration;
};

/// Primal-dual point in terms of the original problem. Multipliers may be
/// left empty for a cold start.
struct PrimalDualPoint {
  VectorXd x;
  VectorXd y;                 // constraint multipliers
  VectorXd z_lower;           // variable lower-bound multipliers
  VectorXd z_upper;
  VectorXd constraint_z_lower;  // inequality-row bound multipliers
  VectorXd constraint_z_upper;
  double barrier = 0.0;         // 0: unset

  bool has_multipliers() const { return z_lower.size() > 0 || y.size() > 0; }
};

struct SolveReport {
  SolveStatus status = SolveStatus::kError;
  int iterations = 0;
  double kkt_residual = 0.0;  // barrier error at barrier_lower
  double barrier = 0.0;
  double objective = 0.0;
  double primal_infeasibility = 0.0;  // max norm of constraint violation
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  double wall_time = 0.0;  // seconds
  int restorations = 0;
  std::vector<double> barrier_trace;  // barrier value per iteration
  std::string message;
};

struct SolveResult {
  PrimalDualPoint point;
  SolveReport report;
};

/// Starting point x must have length num_variables(). A point carrying
/// multipliers of matching size is treated as a warm start.
SolveResult solve_nlp(const NlpProblem& problem, const PrimalDualPoint& start, const SolverOptions& options);

}  // namespace awes::nlp

#endif  // AWES_NLP_SOLVER_HPP_
