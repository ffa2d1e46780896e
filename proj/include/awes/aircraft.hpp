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

// Aerodynamics and rigid-body dynamics of the aircraft.
//
// Per-surface axis convention (body frame, x forward, z down): with e_v the
// unit apparent velocity, lift acts along normalize(e_y x e_v) (upwards for
// axial flow), drag along -e_v and the rudder side force along
// normalize(e_v x e_z) (towards -y for axial flow). The angle of attack is
// alpha = -atan(v_z / v_x), so lift-producing attitudes have alpha < 0.

#ifndef AWES_AIRCRAFT_HPP_
#define AWES_AIRCRAFT_HPP_

#include <cmath>

#include "awes/environment.hpp"
#include "awes/errors.hpp"
#include "awes/frames.hpp"
#include "awes/params.hpp"
#include "awes/state.hpp"
#include "awes/types.hpp"

namespace awes {

enum class Surface { kWing, kElevator, kRudder };
enum class CoefficientKind { kLift, kDrag, kMoment };

inline constexpr double kMinAxialAirspeed = 1e-6;

template <typename Scalar>
struct AeroState {
  Vec3<Scalar> v_a = Vec3<Scalar>::Zero();  // apparent velocity, body frame
  Scalar airspeed{0.0};
  Scalar alpha{0.0};
  Scalar beta{0.0};
  Scalar dynamic_pressure{0.0};
};

template <typename Scalar>
struct BodyWrench {
  Vec3<Scalar> force = Vec3<Scalar>::Zero();
  Vec3<Scalar> torque = Vec3<Scalar>::Zero();
};

/// Aerodynamic state with the rate-corrected control-surface angles and the
/// resulting wrench.
template <typename Scalar>
struct AeroEvaluation {
  AeroState<Scalar> state;
  Scalar elevator_angle{0.0};  // alpha + alpha_damped + delta_e
  Scalar rudder_angle{0.0};    // beta + beta_damped + delta_r
  Scalar aileron_angle{0.0};   // delta_a_damped + delta_a
  BodyWrench<Scalar> wrench;
};

template <typename Scalar>
AeroState<Scalar> aero_angles(const Vec3<Scalar>& v_body, const Vec3<Scalar>& v_wind_body) {
  using std::atan;
  AeroState<Scalar> s;
  s.v_a = v_body - v_wind_body;
  if (std::abs(value_of(s.v_a(0))) < kMinAxialAirspeed) {
    throw Error(ErrorCode::kDegenerateAirspeed, "axial apparent velocity vanishes");
  }
  s.airspeed = norm(s.v_a);
  s.alpha = -atan(s.v_a(2) / s.v_a(0));
  s.beta = atan(s.v_a(1) / s.v_a(0));
  return s;
}

inline const AeroPolynomial& coefficient_polynomial(Surface surface, CoefficientKind kind,
                                                    const AircraftParams& params) {
  const SurfaceCoefficients* c = nullptr;
  switch (surface) {
    case Surface::kWing: c = &params.wing; break;
    case Surface::kElevator: c = &params.elevator; break;
    case Surface::kRudder: c = &params.rudder; break;
  }
  switch (kind) {
    case CoefficientKind::kLift: return c->lift;
    case CoefficientKind::kDrag: return c->drag;
    case CoefficientKind::kMoment:
      if (surface != Surface::kWing) {
        throw Error(ErrorCode::kInvalidSurfaceKind, "only the wing carries a pitch-moment polynomial");
      }
      return c->moment;
  }
  throw Error(ErrorCode::kInvalidSurfaceKind, "unknown coefficient kind");
}

template <typename Scalar>
Scalar aero_coefficient(Surface surface, CoefficientKind kind, const Scalar& alpha,
                        const AircraftParams& params) {
  const AeroPolynomial& p = coefficient_polynomial(surface, kind, params);
  return (p.c2 * alpha + p.c1) * alpha + p.c0;
}

/// Per-surface aerodynamics given body-frame velocities and the local air
/// density.
template <typename Scalar>
AeroEvaluation<Scalar> evaluate_aero(const Vec3<Scalar>& v_body, const Vec3<Scalar>& omega_body,
                                     const Vec3<Scalar>& v_wind_body, const Scalar& density,
                                     const Controls<Scalar>& u, const AircraftParams& ac) {
  using std::sqrt;
  AeroEvaluation<Scalar> out;
  out.state = aero_angles(v_body, v_wind_body);
  AeroState<Scalar>& s = out.state;
  s.dynamic_pressure = 0.5 * density * s.v_a.squaredNorm();
  const Scalar& q = s.dynamic_pressure;
  const Scalar inv_speed = 1.0 / s.airspeed;
  const Vec3<Scalar> e_v = s.v_a * inv_speed;

  const Scalar lift_norm = sqrt(e_v(0) * e_v(0) + e_v(2) * e_v(2));
  const Vec3<Scalar> e_lift(e_v(2) / lift_norm, Scalar(0.0), -e_v(0) / lift_norm);
  const Scalar side_norm = sqrt(e_v(0) * e_v(0) + e_v(1) * e_v(1));
  const Vec3<Scalar> e_side(e_v(1) / side_norm, -e_v(0) / side_norm, Scalar(0.0));

  const Scalar alpha_damped = -omega_body(1) * ac.elevator_damping_lever * inv_speed;
  const Scalar beta_damped = omega_body(2) * ac.rudder_damping_lever * inv_speed;
  const Scalar aileron_damped = -omega_body(0) * ac.aileron_damping_lever * inv_speed;
  out.elevator_angle = s.alpha + alpha_damped + u.elevator;
  out.rudder_angle = s.beta + beta_damped + u.rudder;
  out.aileron_angle = aileron_damped + u.aileron;

  const Scalar qs_wing = q * ac.wing_area;
  const Vec3<Scalar> f_wing =
      qs_wing * (aero_coefficient(Surface::kWing, CoefficientKind::kLift, s.alpha, ac) * e_lift -
                 aero_coefficient(Surface::kWing, CoefficientKind::kDrag, s.alpha, ac) * e_v);
  const Scalar m_wing =
      qs_wing * ac.wing_chord * aero_coefficient(Surface::kWing, CoefficientKind::kMoment, s.alpha, ac);

  const Scalar qs_elev = q * ac.elevator_area;
  const Vec3<Scalar> f_elev =
      qs_elev *
      (aero_coefficient(Surface::kElevator, CoefficientKind::kLift, out.elevator_angle, ac) * e_lift -
       aero_coefficient(Surface::kElevator, CoefficientKind::kDrag, out.elevator_angle, ac) * e_v);

  const Scalar qs_rud = q * ac.rudder_area;
  const Vec3<Scalar> f_rud =
      qs_rud *
      (aero_coefficient(Surface::kRudder, CoefficientKind::kLift, out.rudder_angle, ac) * e_side -
       aero_coefficient(Surface::kRudder, CoefficientKind::kDrag, out.rudder_angle, ac) * e_v);

  const Vec3<Scalar> r_elev = cast_vec<Scalar>(ac.elevator_position);
  const Vec3<Scalar> r_rud = cast_vec<Scalar>(ac.rudder_position);
  out.wrench.force = f_wing + f_elev + f_rud;
  out.wrench.torque = r_elev.cross(f_elev) + r_rud.cross(f_rud);
  out.wrench.torque(0) += qs_wing * ac.wing_span * ac.aileron_roll_coefficient * out.aileron_angle;
  out.wrench.torque(1) += m_wing;
  return out;
}

/// R_W^B = R_O^B (R_O^W)^T.
template <typename Scalar>
Mat3<Scalar> body_from_wind(const EulerAngles<Scalar>& q_a, double zeta) {
  return attitude_matrix(q_a) * wind_frame(Scalar(zeta)).transpose();
}

/// Wind velocity at the aircraft, body frame.
template <typename Scalar>
Vec3<Scalar> wind_at_aircraft_body(const State<Scalar>& x, const Environment& env) {
  const Vec3<Scalar> p_w = spherical_to_position(x.position);
  return body_from_wind(x.attitude, env.wind.zeta) * wind_velocity(p_w(2), env.wind);
}

template <typename Scalar>
AeroEvaluation<Scalar> evaluate_aero(const State<Scalar>& x, const Controls<Scalar>& u,
                                     const ModelParams& params) {
  const Vec3<Scalar> p_w = spherical_to_position(x.position);
  const Vec3<Scalar> wind_b =
      body_from_wind(x.attitude, params.env.wind.zeta) * wind_velocity(p_w(2), params.env.wind);
  const Scalar rho = air_density(p_w(2), params.env.atmosphere);
  return evaluate_aero(x.v_body, x.omega_body, wind_b, rho, u, params.aircraft);
}

template <typename Scalar>
BodyWrench<Scalar> aero_wrench(const State<Scalar>& x, const Controls<Scalar>& u,
                               const ModelParams& params) {
  return evaluate_aero(x, u, params).wrench;
}

template <typename Scalar>
struct BodyAccelerations {
  Vec3<Scalar> v_dot = Vec3<Scalar>::Zero();
  Vec3<Scalar> omega_dot = Vec3<Scalar>::Zero();
};

/// m (dv + omega x v) = f,  J domega + omega x J omega = tau.
template <typename Scalar>
BodyAccelerations<Scalar> rigid_body_rhs(const Vec3<Scalar>& v, const Vec3<Scalar>& omega,
                                         const BodyWrench<Scalar>& total, const AircraftParams& ac) {
  BodyAccelerations<Scalar> a;
  a.v_dot = total.force / ac.mass - omega.cross(v);
  const Mat3<Scalar> inertia = ac.inertia.template cast<Scalar>();
  a.omega_dot = solve3(inertia, Vec3<Scalar>(total.torque - omega.cross(inertia * omega)));
  return a;
}

/// R_O^B (0, 0, m g); inertial z points down.
template <typename Scalar>
Vec3<Scalar> gravity_force_body(const EulerAngles<Scalar>& q_a, double mass, double gravity) {
  return attitude_matrix(q_a) * Vec3<Scalar>(Scalar(0.0), Scalar(0.0), Scalar(mass * gravity));
}

}  // namespace awes

#endif  // AWES_AIRCRAFT_HPP_
