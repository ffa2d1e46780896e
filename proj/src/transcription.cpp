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

#include "awes/transcription.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "awes/errors.hpp"
#include "awes/tether.hpp"

namespace awes {

Mesh make_mesh(int intervals, double horizon) {
  if (intervals < 1) throw Error(ErrorCode::kMeshMismatch, "mesh needs at least one interval");
  if (!(horizon > 0.0)) throw Error(ErrorCode::kMeshMismatch, "mesh horizon must be positive");
  return {intervals, horizon};
}

void Transcription::set_bounds(int variable, double lower, double upper) {
  const double s = variable_scale(variable);
  problem.set_variable_bounds(variable, lower / s, upper / s);
}

Eigen::Matrix<double, kNodeSize, 1> node_scale(const std::vector<NodeVariables<double>>& reference) {
  Eigen::Matrix<double, kNodeSize, 1> floor;
  floor << 1.0, 1.0,                      // winch angle, rate
      10.0, 10.0, 10.0,                   // v_B
      1.0, 1.0, 1.0,                      // omega_B
      1.0, 1.0, 1.0,                      // attitude
      1.0, 1.0, 100.0,                    // lambda, eta, r
      1e3, 0.3, 0.3, 0.3,                 // tau_gen, deflections
      3e3, 3e3, 3e3, 1e3, 1e3, 1e3, 1e3,  // f_fict, tau_fict, f_prop
      1e3, 1.0, 1.0;                      // tension, theta_N, phi_N
  Eigen::Matrix<double, kNodeSize, 1> s = floor;
  for (const auto& w : reference) s = s.cwiseMax(pack(w).cwiseAbs());
  return s;
}

namespace {

using Eigen::VectorXd;
constexpr int kIntervalVars = kNumStates + kNumControls + kNumAlgebraic + kNumHomotopy;
constexpr int kInitialVars = kNumStates + kNumAlgebraic;

template <typename S>
using Dyn = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Scales of the path rows.
Eigen::Matrix<double, kNumPathConstraints, 1> path_row_scale(const Eigen::Matrix<double, kNodeSize, 1>& s) {
  Eigen::Matrix<double, kNumPathConstraints, 1> r;
  r << s(kNumStates + kNumControls), 100.0, 100.0, 1.0, 10.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0;
  return r;
}

}  // namespace

Transcription transcribe(const OcpDefinition& ocp, const Mesh& mesh,
                         const Eigen::Matrix<double, kNodeSize, 1>& scale) {
  const int nt = mesh.intervals;
  if (nt < 1) throw Error(ErrorCode::kMeshMismatch, "mesh needs at least one interval");
  if (!ocp.reference.empty() && static_cast<int>(ocp.reference.size()) != mesh.nodes()) {
    throw Error(ErrorCode::kMeshMismatch, "tracking reference has " + std::to_string(ocp.reference.size()) +
                                              " nodes, mesh has " + std::to_string(mesh.nodes()));
  }
  const double dt = mesh.step();
  Transcription tr;
  tr.mesh = mesh;
  tr.layout.nodes = mesh.nodes();
  const VariableLayout& lay = tr.layout;

  // Row layout.
  RowLayout& rows = tr.rows;
  int row = 0;
  rows.interval_begin.resize(nt);
  rows.reel_out_row.assign(nt, -1);
  for (int n = 0; n < nt; ++n) {
    rows.interval_begin[n] = row;
    row += kNumStates + kNumAlgebraic + kNumPathConstraints;
    if (reel_out_active(ocp.path, mesh.time(n + 1), mesh.horizon)) rows.reel_out_row[n] = row++;
  }
  rows.initial_begin = row;
  rows.initial_size = ocp.anchor ? 6 : 3;
  row += rows.initial_size;
  rows.periodicity_begin = row;
  row += kNumStates;
  rows.control_periodicity_begin = row;
  row += kNumControls;
  rows.total = row;

  // Scales.
  tr.variable_scale.resize(lay.size());
  for (int n = 0; n < lay.nodes; ++n) tr.variable_scale.segment<kNodeSize>(n * kNodeSize) = scale;
  tr.variable_scale.tail<kNumHomotopy>().setOnes();
  const StateVec<double> xs = scale.head<kNumStates>();
  const double rs = xs(sx::kPosition + 2);
  const auto hs = path_row_scale(scale);
  tr.row_scale = VectorXd::Ones(rows.total);
  for (int n = 0; n < nt; ++n) {
    const int b = rows.interval_begin[n];
    tr.row_scale.segment<kNumStates>(b) = xs;
    tr.row_scale.segment<kNumAlgebraic>(b + kNumStates).setConstant(rs);
    tr.row_scale.segment<kNumPathConstraints>(b + kNumStates + kNumAlgebraic) = hs;
    if (rows.reel_out_row[n] >= 0) tr.row_scale(rows.reel_out_row[n]) = xs(sx::kWinchRate);
  }
  tr.row_scale.segment(rows.initial_begin, rows.initial_size).setConstant(rs);
  tr.row_scale.segment<kNumStates>(rows.periodicity_begin) = xs;
  tr.row_scale.segment<kNumControls>(rows.control_periodicity_begin) = scale.segment<kNumControls>(kNumStates);

  tr.problem = nlp::NlpProblem(lay.size(), rows.total);
  nlp::NlpProblem& p = tr.problem;

  // Variable bounds.
  for (int n = 0; n < lay.nodes; ++n) {
    for (int i = 0; i < kNumStates; ++i) {
      tr.set_bounds(lay.state(n) + i, ocp.bounds.state_lower(i), ocp.bounds.state_upper(i));
    }
    for (int i = 0; i < kNumControls; ++i) {
      tr.set_bounds(lay.control(n) + i, ocp.bounds.control_lower(i), ocp.bounds.control_upper(i));
    }
    for (int i = 0; i < kNumAlgebraic; ++i) {
      tr.set_bounds(lay.algebraic(n) + i, ocp.bounds.algebraic_lower(i), ocp.bounds.algebraic_upper(i));
    }
  }
  for (int i = 0; i < kNumHomotopy; ++i) p.set_variable_bounds(lay.homotopy() + i, 0.0, 1.0);

  // Interval elements.
  const ModelParams params = ocp.params;
  const CostWeights weights = ocp.weights;
  const double p_ref = ocp.power_reference;
  const double cost_factor = dt / mesh.horizon / p_ref;
  const double eps = ocp.fictitious_regularization;
  const Eigen::Matrix<double, kNumControls, 1> us = scale.segment<kNumControls>(kNumStates);
  const Vec3<double> zs = scale.tail<kNumAlgebraic>();
  for (int n = 0; n < nt; ++n) {
    const bool reel_out = rows.reel_out_row[n] >= 0;
    const StateVec<double> ref =
        ocp.reference.empty() ? StateVec<double>::Zero() : ocp.reference[n + 1];
    std::vector<int> vars;
    for (int i = 0; i < kNumStates; ++i) vars.push_back(lay.state(n + 1) + i);
    for (int i = 0; i < kNumControls; ++i) vars.push_back(lay.control(n) + i);
    for (int i = 0; i < kNumAlgebraic; ++i) vars.push_back(lay.algebraic(n + 1) + i);
    for (int i = 0; i < kNumHomotopy; ++i) vars.push_back(lay.homotopy() + i);
    std::vector<int> out_rows;
    const int b = rows.interval_begin[n];
    for (int i = 0; i < kNumStates + kNumAlgebraic + kNumPathConstraints; ++i) out_rows.push_back(b + i);
    if (reel_out) out_rows.push_back(rows.reel_out_row[n]);
    for (int i = 0; i < kNumStates; ++i) p.add_linear(b + i, lay.state(n) + i, -1.0);

    auto f = [=](const auto& v) {
      using S = typename std::decay_t<decltype(v)>::Scalar;
      StateVec<S> xv;
      for (int i = 0; i < kNumStates; ++i) xv(i) = v(i) * xs(i);
      ControlVec<S> uv;
      for (int i = 0; i < kNumControls; ++i) uv(i) = v(kNumStates + i) * us(i);
      Vec3<S> zv;
      for (int i = 0; i < kNumAlgebraic; ++i) zv(i) = v(kNumStates + kNumControls + i) * zs(i);
      const HomotopyVec<S> phi = v.template tail<kNumHomotopy>();
      const State<S> x = unpack_state(xv);
      const Controls<S> u = unpack_controls(uv);
      const TetherBoundary<S> z = unpack_algebraic(zv);
      const SystemEvaluation<S> ev = evaluate_system(x, u, z, phi, params);

      Dyn<S> out(1 + kNumStates + kNumAlgebraic + kNumPathConstraints + (reel_out ? 1 : 0));
      S fict(0.0);
      for (int i = su::kFictForce; i < kNumControls; ++i) fict += v(kNumStates + i) * v(kNumStates + i);
      out(0) = cost_factor * homotopy_cost_rate(ev, x, u, phi(2), ref, xs, weights, p_ref) +
               (dt / mesh.horizon) * eps * fict;
      for (int i = 0; i < kNumStates; ++i) out(1 + i) = v(i) - dt * ev.x_dot(i) / xs(i);
      const Vec3<S> g = ev.position_world - ev.tether.aircraft_end();
      for (int i = 0; i < 3; ++i) out(1 + kNumStates + i) = g(i) / rs;
      const auto h = path_constraints(ev);
      for (int i = 0; i < kNumPathConstraints; ++i) out(1 + kNumStates + kNumAlgebraic + i) = h(i) / hs(i);
      if (reel_out) out(out.size() - 1) = v(sx::kWinchRate);
      return out;
    };
    p.add_element(nlp::make_element<kIntervalVars>(vars, true, out_rows, f));

    const int hb = b + kNumStates + kNumAlgebraic;
    for (int i = 0; i < kNumStates + kNumAlgebraic; ++i) p.set_constraint_bounds(b + i, 0.0, 0.0);
    for (int i = 0; i < kNumPathConstraints; ++i) {
      const Interval iv = ocp.path.row(i);
      p.set_constraint_bounds(hb + i, iv.lower / hs(i), iv.upper / hs(i));
    }
    if (reel_out) p.set_constraint_bounds(rows.reel_out_row[n], 0.0, nlp::kInf);
  }

  // Initial-point constraint.
  {
    std::vector<int> vars;
    for (int i = 0; i < kNumStates; ++i) vars.push_back(lay.state(0) + i);
    for (int i = 0; i < kNumAlgebraic; ++i) vars.push_back(lay.algebraic(0) + i);
    std::vector<int> out_rows;
    for (int i = 0; i < rows.initial_size; ++i) out_rows.push_back(rows.initial_begin + i);
    const std::optional<Vec3<double>> anchor = ocp.anchor;
    auto f = [=](const auto& v) {
      using S = typename std::decay_t<decltype(v)>::Scalar;
      StateVec<S> xv;
      for (int i = 0; i < kNumStates; ++i) xv(i) = v(i) * xs(i);
      Vec3<S> zv;
      for (int i = 0; i < kNumAlgebraic; ++i) zv(i) = v(kNumStates + i) * zs(i);
      Dyn<S> r = initial_constraint(unpack_state(xv), unpack_algebraic(zv), anchor, params);
      r /= S(rs);
      return r;
    };
    p.add_element(nlp::make_element<kInitialVars>(vars, false, out_rows, f));
    for (int i = 0; i < rows.initial_size; ++i) p.set_constraint_bounds(rows.initial_begin + i, 0.0, 0.0);
  }

  // Periodicity: x_0 - x_N + winding e_psi = 0, u_N - u_0 = 0.
  for (int i = 0; i < kNumStates; ++i) {
    const int r = rows.periodicity_begin + i;
    p.add_linear(r, lay.state(0) + i, 1.0);
    p.add_linear(r, lay.state(nt) + i, -1.0);
    const double target = i == sx::kYaw ? -ocp.yaw_winding / xs(i) : 0.0;
    p.set_constraint_bounds(r, target, target);
  }
  for (int i = 0; i < kNumControls; ++i) {
    const int r = rows.control_periodicity_begin + i;
    p.add_linear(r, lay.control(nt) + i, 1.0);
    p.add_linear(r, lay.control(0) + i, -1.0);
    p.set_constraint_bounds(r, 0.0, 0.0);
  }

  // Homotopy penalty s^T Phi.
  for (int i = 0; i < kNumHomotopy; ++i) p.add_linear(-1, lay.homotopy() + i, ocp.penalty(i));
  return tr;
}

Eigen::VectorXd pack_trajectory(const std::vector<NodeVariables<double>>& nodes, const Vec3<double>& phi) {
  Eigen::VectorXd w(static_cast<int>(nodes.size()) * kNodeSize + kNumHomotopy);
  for (std::size_t n = 0; n < nodes.size(); ++n) w.segment<kNodeSize>(n * kNodeSize) = pack(nodes[n]);
  w.tail<kNumHomotopy>() = phi;
  return w;
}

std::vector<NodeVariables<double>> unpack_trajectory(const Eigen::VectorXd& w, const VariableLayout& layout) {
  if (w.size() != layout.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "trajectory vector has length " + std::to_string(w.size()) +
                                                   ", expected " + std::to_string(layout.size()));
  }
  std::vector<NodeVariables<double>> nodes(layout.nodes);
  for (int n = 0; n < layout.nodes; ++n) nodes[n] = unpack_node(w.segment<kNodeSize>(n * kNodeSize));
  return nodes;
}

Eigen::VectorXd evaluate_defects(const Eigen::VectorXd& w, const Transcription& tr) {
  if (w.size() != tr.layout.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "trajectory vector does not match the transcription");
  }
  const Eigen::VectorXd c = tr.problem.constraints(tr.to_scaled(w));
  const RowLayout& rows = tr.rows;
  std::vector<int> eq;
  for (int b : rows.interval_begin) {
    for (int i = 0; i < kNumStates + kNumAlgebraic; ++i) eq.push_back(b + i);
  }
  for (int i = rows.initial_begin; i < rows.total; ++i) eq.push_back(i);
  Eigen::VectorXd out(static_cast<int>(eq.size()));
  for (std::size_t k = 0; k < eq.size(); ++k) {
    const int r = eq[k];
    out(k) = (c(r) - tr.problem.constraint_lower()(r)) * tr.row_scale(r);
  }
  return out;
}

}  // namespace awes
