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

// Small problems with known solutions for the interior-point solver and a
// test-side KKT measure computed from the exported primal-dual point.

#ifndef AWES_TESTS_SUPPORT_NLP_SUITE_HPP_
#define AWES_TESTS_SUPPORT_NLP_SUITE_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "awes/nlp/problem.hpp"
#include "awes/nlp/solver.hpp"

namespace awes::testing {

struct KnownProblem {
  std::string name;
  nlp::NlpProblem problem;
  Eigen::VectorXd start;
  Eigen::VectorXd solution;
  double objective = 0.0;
};

template <typename S>
using DynVec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

/// min 1/2 |x - c|^2 over a box that cuts off c in two coordinates.
inline KnownProblem box_projection() {
  KnownProblem k{"box_projection", nlp::NlpProblem(3, 0), Eigen::Vector3d::Zero(), Eigen::Vector3d(1.0, -0.5, 0.25),
                 0.0};
  const Eigen::Vector3d c(2.0, -1.0, 0.25);
  k.problem.add_element(nlp::make_element<3>({0, 1, 2}, true, {}, [c](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(1);
    out(0) = S(0.0);
    for (int i = 0; i < 3; ++i) out(0) += 0.5 * (x(i) - c(i)) * (x(i) - c(i));
    return out;
  }));
  k.problem.set_variable_bounds(0, -1.0, 1.0);
  k.problem.set_variable_bounds(1, -0.5, 0.5);
  k.problem.set_variable_bounds(2, -1.0, 1.0);
  k.objective = 0.5 * (1.0 + 0.25);
  return k;
}

/// Inequality QP with two active constraints: min (x1-1)^2 + (x2-2.5)^2
/// subject to three half-planes and x >= 0. Solution (1.4, 1.7).
inline KnownProblem inequality_qp() {
  KnownProblem k{"inequality_qp", nlp::NlpProblem(2, 3), Eigen::Vector2d(2.0, 0.0), Eigen::Vector2d(1.4, 1.7),
                 0.8};
  k.problem.add_element(nlp::make_element<2>({0, 1}, true, {0, 1, 2}, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(4);
    out(0) = (x(0) - 1.0) * (x(0) - 1.0) + (x(1) - 2.5) * (x(1) - 2.5);
    out(1) = x(0) - 2.0 * x(1);
    out(2) = -x(0) - 2.0 * x(1);
    out(3) = -x(0) + 2.0 * x(1);
    return out;
  }));
  k.problem.set_constraint_bounds(0, -2.0, nlp::kInf);
  k.problem.set_constraint_bounds(1, -6.0, nlp::kInf);
  k.problem.set_constraint_bounds(2, -2.0, nlp::kInf);
  k.problem.set_variable_bounds(0, 0.0, nlp::kInf);
  k.problem.set_variable_bounds(1, 0.0, nlp::kInf);
  return k;
}

/// min 1/2 x'Qx + g'x s.t. Ax = b, solution from the dense KKT system.
inline KnownProblem equality_qp() {
  Eigen::Matrix4d q;
  q << 4, 1, 0, 0.5, 1, 3, 0.2, 0, 0, 0.2, 2, 0.1, 0.5, 0, 0.1, 5;
  const Eigen::Vector4d g(1.0, -2.0, 0.5, 3.0);
  Eigen::Matrix<double, 2, 4> a;
  a << 1, 1, 1, 1, 1, -1, 2, 0;
  const Eigen::Vector2d b(1.0, 0.5);
  Eigen::Matrix<double, 6, 6> kkt = Eigen::Matrix<double, 6, 6>::Zero();
  kkt.topLeftCorner<4, 4>() = q;
  kkt.topRightCorner<4, 2>() = a.transpose();
  kkt.bottomLeftCorner<2, 4>() = a;
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << -g, b;
  const Eigen::Matrix<double, 6, 1> sol = kkt.fullPivLu().solve(rhs);
  const Eigen::Vector4d xs = sol.head<4>();

  KnownProblem k{"equality_qp", nlp::NlpProblem(4, 2), Eigen::Vector4d::Zero(), xs,
                 0.5 * xs.dot(q * xs) + g.dot(xs)};
  k.problem.add_element(nlp::make_element<4>({0, 1, 2, 3}, true, {0, 1}, [q, g, a](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(3);
    out(0) = S(0.0);
    for (int i = 0; i < 4; ++i) {
      out(0) += g(i) * x(i);
      for (int j = 0; j < 4; ++j) out(0) += 0.5 * q(i, j) * x(i) * x(j);
    }
    for (int r = 0; r < 2; ++r) {
      out(1 + r) = S(0.0);
      for (int i = 0; i < 4; ++i) out(1 + r) += a(r, i) * x(i);
    }
    return out;
  }));
  k.problem.set_constraint_bounds(0, b(0), b(0));
  k.problem.set_constraint_bounds(1, b(1), b(1));
  return k;
}

inline nlp::Element rosenbrock_element() {
  return nlp::make_element<2>({0, 1}, true, {}, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(1);
    out(0) = 100.0 * (x(1) - x(0) * x(0)) * (x(1) - x(0) * x(0)) + (1.0 - x(0)) * (1.0 - x(0));
    return out;
  });
}

/// Rosenbrock in a box containing the unconstrained minimum (1, 1).
inline KnownProblem rosenbrock_interior() {
  KnownProblem k{"rosenbrock_interior", nlp::NlpProblem(2, 0), Eigen::Vector2d(-1.2, 1.0), Eigen::Vector2d(1.0, 1.0),
                 0.0};
  k.problem.add_element(rosenbrock_element());
  k.problem.set_variable_bounds(0, -2.0, 2.0);
  k.problem.set_variable_bounds(1, -1.0, 3.0);
  return k;
}

/// Rosenbrock with x <= 0.5 active: the minimum moves to (0.5, 0.25).
inline KnownProblem rosenbrock_bounded() {
  KnownProblem k{"rosenbrock_bounded", nlp::NlpProblem(2, 0), Eigen::Vector2d(-1.2, 1.0),
                 Eigen::Vector2d(0.5, 0.25), 0.25};
  k.problem.add_element(rosenbrock_element());
  k.problem.set_variable_bounds(0, -1.5, 0.5);
  k.problem.set_variable_bounds(1, -1.0, 2.0);
  return k;
}

/// Hock-Schittkowski 71.
inline KnownProblem hs071() {
  KnownProblem k{"hs071", nlp::NlpProblem(4, 2), Eigen::Vector4d(1.0, 5.0, 5.0, 1.0),
                 Eigen::Vector4d(1.0, 4.74299963, 3.82114998, 1.37940829), 17.0140173};
  k.problem.add_element(nlp::make_element<4>({0, 1, 2, 3}, true, {0, 1}, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(3);
    out(0) = x(0) * x(3) * (x(0) + x(1) + x(2)) + x(2);
    out(1) = x(0) * x(1) * x(2) * x(3);
    out(2) = x(0) * x(0) + x(1) * x(1) + x(2) * x(2) + x(3) * x(3);
    return out;
  }));
  k.problem.set_constraint_bounds(0, 25.0, nlp::kInf);
  k.problem.set_constraint_bounds(1, 40.0, 40.0);
  for (int i = 0; i < 4; ++i) k.problem.set_variable_bounds(i, 1.0, 5.0);
  return k;
}

inline std::vector<KnownProblem> known_problems() {
  return {box_projection(), inequality_qp(), equality_qp(), rosenbrock_interior(), rosenbrock_bounded(), hs071()};
}

/// Options for the tight solves.
inline nlp::SolverOptions tight_options() {
  nlp::SolverOptions o;
  o.barrier_lower = 1e-11;
  o.kkt_tolerance = 1e-10;
  o.feasibility_tolerance = 1e-10;
  return o;
}

/// Max of stationarity, primal violation and complementarity of the
/// exported point, evaluated on the problem without the solver's slacks.
inline double kkt_error(const nlp::NlpProblem& p, const nlp::PrimalDualPoint& pt) {
  const Eigen::VectorXd& x = pt.x;
  double f = 0.0;
  Eigen::VectorXd grad, c, jv;
  p.first_order(x, f, grad, c, jv);
  const Eigen::MatrixXd jac = p.dense_jacobian(x);
  Eigen::VectorXd stat = grad - pt.z_lower + pt.z_upper;
  if (p.num_constraints() > 0) stat += jac.transpose() * pt.y;
  double err = 0.0;
  for (int i = 0; i < p.num_variables(); ++i) {
    const double lo = p.variable_lower()(i), hi = p.variable_upper()(i);
    err = std::max(err, std::max(lo - x(i), x(i) - hi));
    if (lo == hi) continue;  // fixed: multiplier not reported
    err = std::max(err, std::abs(stat(i)));
    err = std::max({err, -pt.z_lower(i), -pt.z_upper(i)});
    if (std::isfinite(lo)) err = std::max(err, std::abs(pt.z_lower(i) * (x(i) - lo)));
    if (std::isfinite(hi)) err = std::max(err, std::abs(pt.z_upper(i) * (hi - x(i))));
  }
  for (int r = 0; r < p.num_constraints(); ++r) {
    const double lo = p.constraint_lower()(r), hi = p.constraint_upper()(r);
    err = std::max(err, std::max(lo - c(r), c(r) - hi));
    if (lo == hi) continue;
    // L = f + y'c: y <= 0 on an active lower side, y >= 0 on an active upper side.
    const double gap = pt.y(r) <= 0.0 ? c(r) - lo : hi - c(r);
    if (std::isfinite(gap)) err = std::max(err, std::abs(pt.y(r) * gap));
    else err = std::max(err, std::abs(pt.y(r)));
  }
  return err;
}

struct SuiteOutcome {
  std::string name;
  nlp::SolveStatus status = nlp::SolveStatus::kError;
  double kkt = 0.0;
  double solution_error = 0.0;
  double objective_error = 0.0;
  int warm_iterations = 0;
  nlp::SolveStatus warm_status = nlp::SolveStatus::kError;
};

inline SuiteOutcome run_known(const KnownProblem& k) {
  SuiteOutcome o;
  o.name = k.name;
  nlp::PrimalDualPoint start;
  start.x = k.start;
  const nlp::SolveResult r = nlp::solve_nlp(k.problem, start, tight_options());
  o.status = r.report.status;
  o.kkt = kkt_error(k.problem, r.point);
  o.solution_error = (r.point.x - k.solution).lpNorm<Eigen::Infinity>();
  o.objective_error = std::abs(k.problem.objective(r.point.x) - k.objective);
  const nlp::SolveResult w = nlp::solve_nlp(k.problem, r.point, tight_options());
  o.warm_status = w.report.status;
  o.warm_iterations = w.report.iterations;
  return o;
}

/// Barrier trace of a solve with tau_lower = tau_upper = tau.
inline std::vector<double> fixed_barrier_trace(double tau, nlp::SolveStatus* status = nullptr) {
  const KnownProblem k = hs071();
  nlp::SolverOptions o;
  o.barrier_lower = tau;
  o.barrier_upper = tau;
  o.barrier_initial = tau;
  nlp::PrimalDualPoint start;
  start.x = k.start;
  const nlp::SolveResult r = nlp::solve_nlp(k.problem, start, o);
  if (status) *status = r.report.status;
  return r.report.barrier_trace;
}

}  // namespace awes::testing

#endif  // AWES_TESTS_SUPPORT_NLP_SUITE_HPP_
