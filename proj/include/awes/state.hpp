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

// Variable layout of the system: differential states, extended controls and
// algebraic states, with packing into flat vectors.
//
//   x = (theta_w, dtheta_w, v_B[3], omega_B[3], q_a[3], q_s[3])   14
//   u = (tau_gen, d_ail, d_elev, d_rud, f_fict[3], tau_fict[3], f_prop)  11
//   z = (T, theta_N, phi_N)                                        3

#ifndef AWES_STATE_HPP_
#define AWES_STATE_HPP_

#include <string>

#include "awes/errors.hpp"
#include "awes/frames.hpp"
#include "awes/types.hpp"

namespace awes {

inline constexpr int kNumStates = 14;
inline constexpr int kNumControls = 11;
inline constexpr int kNumAlgebraic = 3;
inline constexpr int kNodeSize = kNumStates + kNumControls + kNumAlgebraic;

// Offsets into x.
namespace sx {
inline constexpr int kWinchAngle = 0;
inline constexpr int kWinchRate = 1;
inline constexpr int kVelocity = 2;
inline constexpr int kOmega = 5;
inline constexpr int kAttitude = 8;
inline constexpr int kYaw = 10;
inline constexpr int kPosition = 11;
}  // namespace sx

// Offsets into u.
namespace su {
inline constexpr int kGeneratorTorque = 0;
inline constexpr int kAileron = 1;
inline constexpr int kElevator = 2;
inline constexpr int kRudder = 3;
inline constexpr int kFictForce = 4;
inline constexpr int kFictTorque = 7;
inline constexpr int kPropulsion = 10;
}  // namespace su

template <typename Scalar>
using StateVec = Eigen::Matrix<Scalar, kNumStates, 1>;
template <typename Scalar>
using ControlVec = Eigen::Matrix<Scalar, kNumControls, 1>;

template <typename Scalar>
struct State {
  Scalar winch_angle{0.0};
  Scalar winch_rate{0.0};
  Vec3<Scalar> v_body = Vec3<Scalar>::Zero();
  Vec3<Scalar> omega_body = Vec3<Scalar>::Zero();
  EulerAngles<Scalar> attitude;
  SphericalCoords<Scalar> position;
};

template <typename Scalar>
struct Controls {
  Scalar generator_torque{0.0};
  Scalar aileron{0.0};
  Scalar elevator{0.0};
  Scalar rudder{0.0};
  Vec3<Scalar> f_fict = Vec3<Scalar>::Zero();
  Vec3<Scalar> tau_fict = Vec3<Scalar>::Zero();
  Scalar f_prop{0.0};
};

/// Algebraic state: tension and direction angles of the winch-side segment.
template <typename Scalar>
struct TetherBoundary {
  Scalar tension{1.0};
  Scalar theta_n{0.0};
  Scalar phi_n{0.0};

  Vec3<Scalar> vector() const { return Vec3<Scalar>(tension, theta_n, phi_n); }
  static TetherBoundary from(const Vec3<Scalar>& v) { return {v(0), v(1), v(2)}; }
};

namespace detail {
template <typename Derived>
void check_length(const Eigen::MatrixBase<Derived>& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + " expects length " +
                                                   std::to_string(n) + ", got " +
                                                   std::to_string(v.size()));
  }
}
}  // namespace detail

template <typename Scalar>
StateVec<Scalar> pack(const State<Scalar>& x) {
  StateVec<Scalar> v;
  v << x.winch_angle, x.winch_rate, x.v_body, x.omega_body, x.attitude.vector(), x.position.vector();
  return v;
}

template <typename Scalar>
ControlVec<Scalar> pack(const Controls<Scalar>& u) {
  ControlVec<Scalar> v;
  v << u.generator_torque, u.aileron, u.elevator, u.rudder, u.f_fict, u.tau_fict, u.f_prop;
  return v;
}

template <typename Scalar>
Vec3<Scalar> pack(const TetherBoundary<Scalar>& z) {
  return z.vector();
}

template <typename Derived>
auto unpack_state(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::check_length(v, kNumStates, "state vector");
  State<Scalar> x;
  x.winch_angle = v(0);
  x.winch_rate = v(1);
  x.v_body = v.template segment<3>(sx::kVelocity);
  x.omega_body = v.template segment<3>(sx::kOmega);
  x.attitude = EulerAngles<Scalar>::from(v.template segment<3>(sx::kAttitude));
  x.position = SphericalCoords<Scalar>::from(v.template segment<3>(sx::kPosition));
  return x;
}

template <typename Derived>
auto unpack_controls(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::check_length(v, kNumControls, "control vector");
  Controls<Scalar> u;
  u.generator_torque = v(0);
  u.aileron = v(1);
  u.elevator = v(2);
  u.rudder = v(3);
  u.f_fict = v.template segment<3>(su::kFictForce);
  u.tau_fict = v.template segment<3>(su::kFictTorque);
  u.f_prop = v(su::kPropulsion);
  return u;
}

template <typename Derived>
auto unpack_algebraic(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::check_length(v, kNumAlgebraic, "algebraic vector");
  return TetherBoundary<Scalar>{v(0), v(1), v(2)};
}

/// One node of the decision vector, w_n = (x, u, z).
template <typename Scalar>
struct NodeVariables {
  State<Scalar> x;
  Controls<Scalar> u;
  TetherBoundary<Scalar> z;
};

template <typename Scalar>
Eigen::Matrix<Scalar, kNodeSize, 1> pack(const NodeVariables<Scalar>& w) {
  Eigen::Matrix<Scalar, kNodeSize, 1> v;
  v << pack(w.x), pack(w.u), pack(w.z);
  return v;
}

template <typename Derived>
auto unpack_node(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  detail::check_length(v, kNodeSize, "node vector");
  NodeVariables<Scalar> w;
  w.x = unpack_state(v.template segment<kNumStates>(0));
  w.u = unpack_controls(v.template segment<kNumControls>(kNumStates));
  w.z = unpack_algebraic(v.template segment<kNumAlgebraic>(kNumStates + kNumControls));
  return w;
}

}  // namespace awes

#endif  // AWES_STATE_HPP_
