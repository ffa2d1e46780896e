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

// Continuous optimal control problem: cost rates, path constraints,
// variable bounds, periodicity and the initial-point constraint.

#ifndef AWES_OCP_HPP_
#define AWES_OCP_HPP_

#include <cmath>
#include <limits>
#include <optional>

#include "awes/aircraft.hpp"
#include "awes/state.hpp"
#include "awes/system.hpp"
#include "awes/tether.hpp"
#include "awes/types.hpp"
#include "awes/winch.hpp"

namespace awes {

inline constexpr double deg(double degrees) { return degrees * kPi / 180.0; }

enum class PathShape { kCircle, kLemniscate };

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Weights of the cost rate. The smoothness weights Gamma act on the body
/// angular acceleration and the sideslip angle; the tracking weights Lambda
/// act on state deviations measured in state-scale units. All weights are
/// multiplied by the power reference so that they read in units of that
/// reference.
struct CostWeights {
  Vec3<double> angular_acceleration{1e-2, 1e-2, 1e-2};
  double sideslip = 1.0;
  StateVec<double> tracking = StateVec<double>::Ones();
};

inline constexpr int kNumPathConstraints = 11;

// Rows of path_constraints().
namespace pc {
inline constexpr int kTetherForce = 0;
inline constexpr int kLateralPosition = 1;
inline constexpr int kAltitude = 2;
inline constexpr int kWinchAcceleration = 3;
inline constexpr int kAirspeed = 4;
inline constexpr int kAngleOfAttack = 5;
inline constexpr int kSideslip = 6;
inline constexpr int kElevatorAngle = 7;
inline constexpr int kRudderAngle = 8;
inline constexpr int kAileronAngle = 9;
inline constexpr int kTetherAngle = 10;
}  // namespace pc

struct PathBounds {
  Interval tether_force{1.31e3, 1.665e6};  // |f_0|, N
  Interval lateral_position{-300.0, 300.0};  // y^W, m
  Interval altitude{100.0, 600.0};  // z^W, m
  Interval winch_acceleration{-5.0, 5.0};  // rad/s^2
  Interval airspeed{10.0, 90.0};
  Interval angle_of_attack{deg(-15.0), deg(4.2)};
  Interval sideslip{deg(-10.0), deg(10.0)};
  Interval elevator_angle{deg(-15.0), deg(15.0)};
  Interval rudder_angle{deg(-15.0), deg(15.0)};
  Interval aileron_angle{deg(-35.0), deg(35.0)};
  Interval tether_angle{deg(2.0), deg(178.0)};
  // Non-negative winch rate on nodes with t <= reel_out_fraction * T.
  bool reel_out_enabled = true;
  double reel_out_fraction = 0.6;

  Interval row(int i) const {
    switch (i) {
      case pc::kTetherForce: return tether_force;
      case pc::kLateralPosition: return lateral_position;
      case pc::kAltitude: return altitude;
      case pc::kWinchAcceleration: return winch_acceleration;
      case pc::kAirspeed: return airspeed;
      case pc::kAngleOfAttack: return angle_of_attack;
      case pc::kSideslip: return sideslip;
      case pc::kElevatorAngle: return elevator_angle;
      case pc::kRudderAngle: return rudder_angle;
      case pc::kAileronAngle: return aileron_angle;
      default: return tether_angle;
    }
  }
};

struct VariableBounds {
  StateVec<double> state_lower;
  StateVec<double> state_upper;
  ControlVec<double> control_lower;
  ControlVec<double> control_upper;
  Vec3<double> algebraic_lower;
  Vec3<double> algebraic_upper;
};

/// Tabulated variable bounds in physical units. The circular-path yaw range
/// grows with the number of loops: [per_loop * N_w + offset, max].
struct VariableBoundsTable {
  Interval velocity_x{15.0, 90.0};  // m/s, body axes
  Interval velocity_y{-60.0, 60.0};
  Interval velocity_z{-30.0, 30.0};
  Interval angular_velocity{deg(-50.0), deg(50.0)};  // each body axis
  Interval roll{-0.7 * kPi / 2.0, 0.7 * kPi / 2.0};
  Interval pitch{-0.65 * kPi / 2.0, 0.65 * kPi / 2.0};
  double yaw_circle_min_per_loop = -2.0 * kPi;
  double yaw_circle_min_offset = -0.5 * kPi;
  double yaw_circle_max = kPi / 20.0;
  Interval yaw_lemniscate{-kPi, kPi};
  Interval longitude{-kPi / 2.0 + kPi / 20.0, kPi / 2.0 - kPi / 20.0};  // lambda
  Interval latitude{kPi / 20.0, kPi / 2.0 - kPi / 20.0};               // eta
  Interval distance{60.0, 1000.0};                                     // r, m
  Interval generator_torque{0.0, 9e7};  // N m
  Interval aileron{-1.0, 1.0};
  Interval elevator{-0.3316, 0.3316};
  Interval rudder{-0.3316, 0.3316};
  // Winch-side segment: theta_N from the vertical, phi_N out of the x-z plane.
  Interval winch_segment_polar{kPi / 50.0, kPi / 2.0 - kPi / 50.0};
  Interval winch_segment_lateral{-kPi / 2.0, kPi / 2.0};
  Interval tension{1.31e3, 1.665e6};  // N
};

inline VariableBounds make_variable_bounds(const VariableBoundsTable& t, PathShape shape, int loops) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  VariableBounds b;
  b.state_lower.setConstant(-inf);
  b.state_upper.setConstant(inf);
  auto set = [](auto& lo, auto& hi, int i, const Interval& iv) {
    lo(i) = iv.lower;
    hi(i) = iv.upper;
  };
  set(b.state_lower, b.state_upper, sx::kVelocity, t.velocity_x);
  set(b.state_lower, b.state_upper, sx::kVelocity + 1, t.velocity_y);
  set(b.state_lower, b.state_upper, sx::kVelocity + 2, t.velocity_z);
  for (int i = 0; i < 3; ++i) set(b.state_lower, b.state_upper, sx::kOmega + i, t.angular_velocity);
  set(b.state_lower, b.state_upper, sx::kAttitude, t.roll);
  set(b.state_lower, b.state_upper, sx::kAttitude + 1, t.pitch);
  if (shape == PathShape::kCircle) {
    set(b.state_lower, b.state_upper, sx::kYaw,
        {t.yaw_circle_min_per_loop * loops + t.yaw_circle_min_offset, t.yaw_circle_max});
  } else {
    set(b.state_lower, b.state_upper, sx::kYaw, t.yaw_lemniscate);
  }
  set(b.state_lower, b.state_upper, sx::kPosition, t.longitude);
  set(b.state_lower, b.state_upper, sx::kPosition + 1, t.latitude);
  set(b.state_lower, b.state_upper, sx::kPosition + 2, t.distance);

  b.control_lower.setConstant(-inf);
  b.control_upper.setConstant(inf);
  set(b.control_lower, b.control_upper, su::kGeneratorTorque, t.generator_torque);
  set(b.control_lower, b.control_upper, su::kAileron, t.aileron);
  set(b.control_lower, b.control_upper, su::kElevator, t.elevator);
  set(b.control_lower, b.control_upper, su::kRudder, t.rudder);

  b.algebraic_lower << t.tension.lower, t.winch_segment_polar.lower, t.winch_segment_lateral.lower;
  b.algebraic_upper << t.tension.upper, t.winch_segment_polar.upper, t.winch_segment_lateral.upper;
  return b;
}

inline VariableBounds default_variable_bounds(PathShape shape, int loops) {
  return make_variable_bounds(VariableBoundsTable{}, shape, loops);
}

template <typename Scalar>
Scalar smoothness_penalty(const SystemEvaluation<Scalar>& ev, const CostWeights& w) {
  const auto omega_dot = ev.x_dot.template segment<3>(sx::kOmega);
  Scalar p = w.sideslip * ev.aero.state.beta * ev.aero.state.beta;
  for (int i = 0; i < 3; ++i) p += w.angular_acceleration(i) * omega_dot(i) * omega_dot(i);
  return p;
}

/// -P + |xi|_Gamma^2 with xi = (domega_B, beta); power_reference scales the
/// penalty weights.
template <typename Scalar>
Scalar cost_rate(const SystemEvaluation<Scalar>& ev, const State<Scalar>& x, const Controls<Scalar>& u,
                 const CostWeights& w, double power_reference) {
  return -mechanical_power(x.winch_rate, u.generator_torque) + power_reference * smoothness_penalty(ev, w);
}

/// -(1 - Phi_3) P + |xi|_Gamma^2 + Phi_3 |x - x_ref|_Lambda^2, state
/// deviations divided componentwise by state_scale.
template <typename Scalar>
Scalar homotopy_cost_rate(const SystemEvaluation<Scalar>& ev, const State<Scalar>& x,
                          const Controls<Scalar>& u, const Scalar& phi_tracking,
                          const StateVec<double>& reference, const StateVec<double>& state_scale,
                          const CostWeights& w, double power_reference) {
  const StateVec<Scalar> xv = pack(x);
  Scalar tracking(0.0);
  for (int i = 0; i < kNumStates; ++i) {
    const Scalar d = (xv(i) - reference(i)) / state_scale(i);
    tracking += w.tracking(i) * d * d;
  }
  return -(1.0 - phi_tracking) * mechanical_power(x.winch_rate, u.generator_torque) +
         power_reference * (smoothness_penalty(ev, w) + phi_tracking * tracking);
}

/// Angle between body x-axis and the tether force in the body x-z plane,
/// atan2(f_z, f_x). A tether pulling straight down at level attitude gives
/// pi/2.
template <typename Scalar>
Scalar tether_aircraft_angle(const Vec3<Scalar>& f_body) {
  using std::atan2;
  return atan2(f_body(2), f_body(0));
}

/// Lateral angle of the tether force out of the body x-z plane.
template <typename Scalar>
Scalar tether_lateral_angle(const Vec3<Scalar>& f_body) {
  using std::asin;
  return asin(f_body(1) / norm(f_body));
}

/// Path-constraint values in the order of the pc:: rows.
template <typename Scalar>
Eigen::Matrix<Scalar, kNumPathConstraints, 1> path_constraints(const SystemEvaluation<Scalar>& ev) {
  Eigen::Matrix<Scalar, kNumPathConstraints, 1> h;
  h(pc::kTetherForce) = norm(ev.tether.aircraft_force());
  h(pc::kLateralPosition) = ev.position_world(1);
  h(pc::kAltitude) = ev.position_world(2);
  h(pc::kWinchAcceleration) = ev.x_dot(sx::kWinchRate);
  h(pc::kAirspeed) = ev.aero.state.airspeed;
  h(pc::kAngleOfAttack) = ev.aero.state.alpha;
  h(pc::kSideslip) = ev.aero.state.beta;
  h(pc::kElevatorAngle) = ev.aero.elevator_angle;
  h(pc::kRudderAngle) = ev.aero.rudder_angle;
  h(pc::kAileronAngle) = ev.aero.aileron_angle;
  h(pc::kTetherAngle) = tether_aircraft_angle(ev.tether_force_body);
  return h;
}

/// Whether the non-negative winch-rate constraint applies at time t.
inline bool reel_out_active(const PathBounds& b, double t, double horizon) {
  return b.reel_out_enabled && t <= b.reel_out_fraction * horizon + 1e-12 * horizon;
}

/// x(0) - x(T) with the yaw of x(T) shifted back by the expected winding
/// psi(T) - psi(0).
template <typename Scalar>
StateVec<Scalar> periodicity_residual(const StateVec<Scalar>& x0, const StateVec<Scalar>& xn, double yaw_winding) {
  StateVec<Scalar> r = x0 - xn;
  r(sx::kYaw) += yaw_winding;
  return r;
}

/// Signed yaw change over the horizon for a path: circles turn N_w times in
/// the direction given by the sign of `direction`.
inline double yaw_winding(PathShape shape, int loops, int direction) {
  if (shape != PathShape::kCircle) return 0.0;
  return (direction < 0 ? -2.0 : 2.0) * kPi * loops;
}

/// g(x_0, z_0), followed by p_aircraft^W(0) - anchor when an anchor is set.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> initial_constraint(const State<Scalar>& x0, const TetherBoundary<Scalar>& z0,
                                                            const std::optional<Vec3<double>>& anchor,
                                                            const ModelParams& params) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> r(anchor ? 6 : 3);
  r.template head<3>() = tether_residual(x0, z0, params);
  if (anchor) r.template tail<3>() = spherical_to_position(x0.position) - cast_vec<Scalar>(*anchor);
  return r;
}

}  // namespace awes

#endif  // AWES_OCP_HPP_
