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

// Full semi-explicit DAE: winch, rigid body, attitude and position
// kinematics, with the homotopy-blended aircraft wrench.

#ifndef AWES_SYSTEM_HPP_
#define AWES_SYSTEM_HPP_

#include "awes/aircraft.hpp"
#include "awes/frames.hpp"
#include "awes/params.hpp"
#include "awes/state.hpp"
#include "awes/tether.hpp"
#include "awes/types.hpp"
#include "awes/winch.hpp"

namespace awes {

inline constexpr int kNumHomotopy = 3;

/// Homotopy parameters: Phi_1 fades the fictitious wrench, Phi_2 the
/// propulsion force, Phi_3 the tracking cost.
template <typename Scalar>
using HomotopyVec = Eigen::Matrix<Scalar, kNumHomotopy, 1>;

/// (1 - Phi_1) aero + Phi_1 (f_fict, tau_fict) + Phi_2 f_prop e_x.
template <typename Scalar>
BodyWrench<Scalar> blended_wrench(const BodyWrench<Scalar>& aero, const Controls<Scalar>& u,
                                  const HomotopyVec<Scalar>& phi) {
  BodyWrench<Scalar> w;
  w.force = (1.0 - phi(0)) * aero.force + phi(0) * u.f_fict;
  w.torque = (1.0 - phi(0)) * aero.torque + phi(0) * u.tau_fict;
  w.force(0) += phi(1) * u.f_prop;
  return w;
}

/// Everything the OCP needs from one model evaluation.
template <typename Scalar>
struct SystemEvaluation {
  StateVec<Scalar> x_dot;
  AeroEvaluation<Scalar> aero;
  TetherConfiguration<Scalar> tether;
  Vec3<Scalar> tether_force_body = Vec3<Scalar>::Zero();
  Vec3<Scalar> position_world = Vec3<Scalar>::Zero();
  Vec3<Scalar> velocity_world = Vec3<Scalar>::Zero();
};

template <typename Scalar>
SystemEvaluation<Scalar> evaluate_system(const State<Scalar>& x, const Controls<Scalar>& u,
                                         const TetherBoundary<Scalar>& z, const HomotopyVec<Scalar>& phi,
                                         const ModelParams& params) {
  SystemEvaluation<Scalar> ev;
  const double zeta = params.env.wind.zeta;
  ev.tether = tether_configuration(x, z, params);
  ev.tether_force_body = aircraft_tether_force(ev.tether, x.attitude, zeta);
  ev.aero = evaluate_aero(x, u, params);
  ev.position_world = spherical_to_position(x.position);
  ev.velocity_world = aircraft_velocity_world(x, zeta);

  BodyWrench<Scalar> total = blended_wrench(ev.aero.wrench, u, phi);
  total.force += ev.tether_force_body +
                 gravity_force_body(x.attitude, params.aircraft.mass, params.env.gravity);
  if (params.tether_mode == TetherMode::kRigid) {
    const Mat3<Scalar> body_from_world = body_from_wind(x.attitude, zeta);
    total.force += body_from_world * rigid_bulk_drag(x, params);
  }
  const BodyAccelerations<Scalar> acc = rigid_body_rhs(x.v_body, x.omega_body, total, params.aircraft);

  ev.x_dot(sx::kWinchAngle) = x.winch_rate;
  ev.x_dot(sx::kWinchRate) = winch_rhs(x.winch_rate, z.tension, u.generator_torque, params.winch);
  ev.x_dot.template segment<3>(sx::kVelocity) = acc.v_dot;
  ev.x_dot.template segment<3>(sx::kOmega) = acc.omega_dot;
  ev.x_dot.template segment<3>(sx::kAttitude) = euler_rates(x.attitude, x.omega_body);
  ev.x_dot.template segment<3>(sx::kPosition) = spherical_rates(x.position, ev.velocity_world);
  return ev;
}

template <typename Scalar>
StateVec<Scalar> dae_rhs(const State<Scalar>& x, const Controls<Scalar>& u, const TetherBoundary<Scalar>& z,
                         const HomotopyVec<Scalar>& phi, const ModelParams& params) {
  return evaluate_system(x, u, z, phi, params).x_dot;
}

}  // namespace awes

#endif  // AWES_SYSTEM_HPP_
