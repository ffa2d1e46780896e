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

// Dual-number Jacobians of the model functions checked against central
// differences at sampled interior points.

#ifndef AWES_TESTS_SUPPORT_GRADIENT_CHECKS_HPP_
#define AWES_TESTS_SUPPORT_GRADIENT_CHECKS_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "awes/ocp.hpp"
#include "awes/system.hpp"
#include "support/testing.hpp"

namespace awes::testing {

inline constexpr int kPointSize = kNodeSize + kNumHomotopy;

template <typename S>
using PointVec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

struct ModelFunction {
  std::string name;
  // Evaluated for double and for Dual<double, kPointSize>.
  std::function<PointVec<double>(const PointVec<double>&)> value;
  std::function<PointVec<Dual<double, kPointSize>>(const PointVec<Dual<double, kPointSize>>&)> dual;
};

template <typename S>
struct Unpacked {
  State<S> x;
  Controls<S> u;
  TetherBoundary<S> z;
  HomotopyVec<S> phi;
};

template <typename S>
Unpacked<S> unpack_point(const PointVec<S>& v) {
  const NodeVariables<S> n = unpack_node(v.template head<kNodeSize>());
  return {n.x, n.u, n.z, v.template tail<kNumHomotopy>()};
}

/// Generic callable over the packed point (x, u, z, Phi).
template <typename F>
ModelFunction model_function(std::string name, F f) {
  return {std::move(name), [f](const PointVec<double>& v) { return f(v); },
          [f](const PointVec<Dual<double, kPointSize>>& v) { return f(v); }};
}

inline std::vector<ModelFunction> model_functions(const ModelParams& params) {
  const CostWeights weights;
  const StateVec<double> reference = StateVec<double>::Constant(0.3);
  const StateVec<double> scale = StateVec<double>::Constant(2.0);
  std::vector<ModelFunction> fs;
  fs.push_back(model_function("dae_rhs", [params](const auto& v) {
    using S = typename std::decay_t<decltype(v)>::Scalar;
    const Unpacked<S> p = unpack_point(v);
    return PointVec<S>(dae_rhs(p.x, p.u, p.z, p.phi, params));
  }));
  fs.push_back(model_function("tether_residual", [params](const auto& v) {
    using S = typename std::decay_t<decltype(v)>::Scalar;
    const Unpacked<S> p = unpack_point(v);
    return PointVec<S>(tether_residual(p.x, p.z, params));
  }));
  fs.push_back(model_function("cost_rate", [params, weights](const auto& v) {
    using S = typename std::decay_t<decltype(v)>::Scalar;
    const Unpacked<S> p = unpack_point(v);
    const SystemEvaluation<S> ev = evaluate_system(p.x, p.u, p.z, p.phi, params);
    PointVec<S> out(1);
    out(0) = cost_rate(ev, p.x, p.u, weights, 1e5);
    return out;
  }));
  fs.push_back(model_function("homotopy_cost_rate", [params, weights, reference, scale](const auto& v) {
    using S = typename std::decay_t<decltype(v)>::Scalar;
    const Unpacked<S> p = unpack_point(v);
    const SystemEvaluation<S> ev = evaluate_system(p.x, p.u, p.z, p.phi, params);
    PointVec<S> out(1);
    out(0) = homotopy_cost_rate(ev, p.x, p.u, p.phi(2), reference, scale, weights, 1e5);
    return out;
  }));
  fs.push_back(model_function("path_constraints", [params](const auto& v) {
    using S = typename std::decay_t<decltype(v)>::Scalar;
    const Unpacked<S> p = unpack_point(v);
    return PointVec<S>(path_constraints(evaluate_system(p.x, p.u, p.z, p.phi, params)));
  }));
  return fs;
}

/// Interior point with a closed tether.
inline Eigen::VectorXd sample_point(Sampler& s, const ModelParams& params) {
  NodeVariables<double> n;
  n.x = s.flying_state(params);
  n.u = s.controls();
  n.z = closed_boundary(n.x, params);
  Eigen::VectorXd v(kPointSize);
  v << pack(n), s.uniform(0.0, 1.0), s.uniform(0.0, 1.0), s.uniform(0.0, 1.0);
  return v;
}

/// Magnitude of each coordinate, floored so steps stay meaningful near 0.
inline Eigen::VectorXd point_scale(const Eigen::VectorXd& v) {
  Eigen::VectorXd floor(kPointSize);
  floor << 1.0, 1.0, 10.0, 10.0, 10.0, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 100.0,  // x
      1e3, 0.1, 0.1, 0.1, 1e3, 1e3, 1e3, 1e2, 1e2, 1e2, 1e2,                         // u
      1e3, 0.3, 0.3,                                                                 // z
      1.0, 1.0, 1.0;                                                                 // Phi
  return v.cwiseAbs().cwiseMax(floor);
}

/// Worst row-wise relative mismatch between the dual Jacobian and central
/// differences, measured in coordinates divided by point_scale.
inline double gradient_mismatch(const ModelFunction& f, const Eigen::VectorXd& v) {
  using D = Dual<double, kPointSize>;
  PointVec<D> vd(kPointSize);
  for (int i = 0; i < kPointSize; ++i) vd(i) = D::variable(v(i), i);
  const PointVec<D> r = f.dual(vd);
  Eigen::MatrixXd ad(r.size(), kPointSize);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    for (int k = 0; k < kPointSize; ++k) ad(i, k) = r(i).d[k];
  }
  const Eigen::VectorXd scale = point_scale(v);
  const Eigen::MatrixXd fd = central_jacobian(f.value, v, 1e-5 * scale);
  const Eigen::MatrixXd sa = ad * scale.asDiagonal();
  const Eigen::MatrixXd sf = fd * scale.asDiagonal();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < sa.rows(); ++i) {
    const double denom = std::max(sa.row(i).norm(), 1e-12);
    worst = std::max(worst, (sa.row(i) - sf.row(i)).norm() / denom);
  }
  return worst;
}

}  // namespace awes::testing

#endif  // AWES_TESTS_SUPPORT_GRADIENT_CHECKS_HPP_
