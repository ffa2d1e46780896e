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

// Direct multiple shooting with backward Euler: the homotopy OCP as a
// finite-dimensional nonlinear program.
//
// Variables (physical units, before scaling):
//   w = (x_0, u_0, z_0, ..., x_N, u_N, z_N, Phi),  28 per node plus 3.
// Rows, in order:
//   per interval n = 0..N-1:
//     14 dynamics defects  x_{n+1} - x_n - dt f(x_{n+1}, u_n, z_{n+1}, Phi)
//      3 algebraic rows    g(x_{n+1}, z_{n+1})
//     11 path rows at node n+1, plus the winch-rate row on reel-out nodes
//   initial constraint     g(x_0, z_0) [, p_aircraft(0) - anchor]
//   14 periodicity rows    x_0 - x_N (+ yaw winding)
//   11 control rows        u_N - u_0 (u_N carries no dynamics)
// The NLP itself works in scaled variables w / variable_scale, and each
// row is divided by its row scale.

#ifndef AWES_TRANSCRIPTION_HPP_
#define AWES_TRANSCRIPTION_HPP_

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "awes/nlp/problem.hpp"
#include "awes/ocp.hpp"
#include "awes/params.hpp"
#include "awes/state.hpp"
#include "awes/system.hpp"

namespace awes {

struct Mesh {
  int intervals = 0;      // N_t
  double horizon = 0.0;   // T
  double step() const { return horizon / intervals; }
  double time(int n) const { return horizon * n / intervals; }
  int nodes() const { return intervals + 1; }
};

/// Validated uniform mesh.
Mesh make_mesh(int intervals, double horizon);

/// x_{n+1} - x_n - dt f(x_{n+1}).
template <typename A, typename B, typename C>
auto backward_euler_defect(const A& x_next, const B& x, double dt, const C& f_next) {
  return (x_next - x - dt * f_next).eval();
}

struct OcpDefinition {
  ModelParams params;
  VariableBounds bounds = default_variable_bounds(PathShape::kCircle, 1);
  PathBounds path;
  CostWeights weights;
  double power_reference = 1e5;  // W
  Vec3<double> penalty{1e3, 1e3, 1e3};
  // Weight on the squared scaled fictitious inputs, keeps them bounded while
  // their homotopy factor goes to zero.
  double fictitious_regularization = 1e-3;
  double yaw_winding = 0.0;  // expected psi(T) - psi(0)
  std::optional<Vec3<double>> anchor;
  std::vector<StateVec<double>> reference;  // tracking reference per node
};

struct VariableLayout {
  int nodes = 0;
  int state(int n) const { return n * kNodeSize; }
  int control(int n) const { return n * kNodeSize + kNumStates; }
  int algebraic(int n) const { return n * kNodeSize + kNumStates + kNumControls; }
  int homotopy() const { return nodes * kNodeSize; }
  int size() const { return nodes * kNodeSize + kNumHomotopy; }
};

struct RowLayout {
  std::vector<int> interval_begin;  // first row of each interval block
  std::vector<int> reel_out_row;    // winch-rate row per interval or -1
  int initial_begin = 0;
  int initial_size = 0;
  int periodicity_begin = 0;
  int control_periodicity_begin = 0;
  int total = 0;
};

struct Transcription {
  nlp::NlpProblem problem;  // scaled
  Mesh mesh;
  VariableLayout layout;
  RowLayout rows;
  Eigen::VectorXd variable_scale;
  Eigen::VectorXd row_scale;

  Eigen::VectorXd to_scaled(const Eigen::VectorXd& w) const { return w.cwiseQuotient(variable_scale); }
  Eigen::VectorXd to_physical(const Eigen::VectorXd& w) const { return w.cwiseProduct(variable_scale); }
  /// Physical-unit bounds for one variable.
  void set_bounds(int variable, double lower, double upper);
};

/// Per-component scale of the node variables: the largest magnitude over
/// the reference trajectory, floored per component.
Eigen::Matrix<double, kNodeSize, 1> node_scale(const std::vector<NodeVariables<double>>& reference);

Transcription transcribe(const OcpDefinition& ocp, const Mesh& mesh,
                         const Eigen::Matrix<double, kNodeSize, 1>& scale);

Eigen::VectorXd pack_trajectory(const std::vector<NodeVariables<double>>& nodes, const Vec3<double>& phi);
std::vector<NodeVariables<double>> unpack_trajectory(const Eigen::VectorXd& w, const VariableLayout& layout);

/// Equality residuals in physical units, in row order: per interval the 14
/// defects then the 3 algebraic rows; then the initial constraint,
/// periodicity and control periodicity rows.
Eigen::VectorXd evaluate_defects(const Eigen::VectorXd& w, const Transcription& tr);

/// Backward-Euler NLP for an autonomous ODE dx/dt = f(x) with fixed x(0):
/// variables x_0..x_steps, equality rows the step defects, zero objective.
template <int NX, typename F>
nlp::NlpProblem transcribe_ode(F rhs, const Eigen::Matrix<double, NX, 1>& x0, int steps, double dt) {
  nlp::NlpProblem p(NX * (steps + 1), NX * steps);
  for (int i = 0; i < NX; ++i) p.set_variable_bounds(i, x0(i), x0(i));
  for (int n = 0; n < steps; ++n) {
    std::vector<int> vars(NX), rows(NX);
    for (int i = 0; i < NX; ++i) {
      vars[i] = NX * (n + 1) + i;
      rows[i] = NX * n + i;
      p.add_linear(rows[i], NX * n + i, -1.0);
    }
    p.add_element(nlp::make_element<NX>(vars, false, rows, [rhs, dt](const auto& x) {
      using S = typename std::decay_t<decltype(x)>::Scalar;
      const Eigen::Matrix<S, NX, 1> xn = x;
      const Eigen::Matrix<S, NX, 1> zero = Eigen::Matrix<S, NX, 1>::Zero();
      Eigen::Matrix<S, Eigen::Dynamic, 1> out = backward_euler_defect(xn, zero, dt, rhs(xn));
      return out;
    }));
  }
  return p;
}

}  // namespace awes

#endif  // AWES_TRANSCRIPTION_HPP_
