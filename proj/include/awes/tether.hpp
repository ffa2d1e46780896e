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

// Quasi-static lumped-mass tether.
//
// N point masses sit between the winch (origin of W) and the aircraft. The
// winch-side algebraic state (T, theta_N, phi_N) fixes the first segment;
// force balance at each mass then propagates force and position outwards to
// the aircraft, and the mismatch with the aircraft position closes the DAE.
//
// Indexing: p_0 is the aircraft end of the recursion, p_{N+1} = 0 the winch.
// Segment j joins p_{j+1} and p_j and carries force f_j (pointing towards
// the aircraft) over stretched length l_j.

#ifndef AWES_TETHER_HPP_
#define AWES_TETHER_HPP_

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "awes/environment.hpp"
#include "awes/errors.hpp"
#include "awes/frames.hpp"
#include "awes/params.hpp"
#include "awes/state.hpp"
#include "awes/types.hpp"
#include "awes/winch.hpp"

namespace awes {

inline constexpr double kMinAircraftDistance = 1e-9;
inline constexpr double kMinSegmentForce = 1e-9;

template <typename Scalar>
struct SegmentProperties {
  Scalar nominal_length{0.0};  // L_s
  Scalar mass{0.0};            // m_j
};

template <typename Scalar>
SegmentProperties<Scalar> segment_properties(const Scalar& length, const TetherParams& params) {
  const Scalar ls = length / double(params.masses + 1);
  return {ls, params.density * ls};
}

/// Rigid-body motion of the tether line: radial velocity and rotation rate.
template <typename Scalar>
struct TetherMotion {
  Vec3<Scalar> radial_velocity = Vec3<Scalar>::Zero();
  Vec3<Scalar> rotation_rate = Vec3<Scalar>::Zero();
};

template <typename Scalar>
TetherMotion<Scalar> tether_kinematics(const Vec3<Scalar>& p_aircraft, const Vec3<Scalar>& v_aircraft) {
  const Scalar r2 = p_aircraft.squaredNorm();
  if (std::sqrt(value_of(r2)) < kMinAircraftDistance) {
    throw Error(ErrorCode::kDegeneratePosition, "aircraft at the winch");
  }
  TetherMotion<Scalar> m;
  m.radial_velocity = p_aircraft * (p_aircraft.dot(v_aircraft) / r2);
  m.rotation_rate = p_aircraft.cross(v_aircraft) / r2;
  return m;
}

template <typename Scalar>
struct MassMotion {
  Vec3<Scalar> velocity = Vec3<Scalar>::Zero();
  Vec3<Scalar> acceleration = Vec3<Scalar>::Zero();
};

template <typename Scalar>
MassMotion<Scalar> mass_velocity_acceleration(const Vec3<Scalar>& p_mass, const TetherMotion<Scalar>& motion) {
  const Vec3<Scalar>& w = motion.rotation_rate;
  return {motion.radial_velocity + w.cross(p_mass), w.cross(Vec3<Scalar>(w.cross(p_mass)))};
}

/// Cross-flow drag on one segment: -1/2 rho d C_D L |v_perp| v_perp, with
/// v_perp the part of the air-relative velocity normal to the segment.
template <typename Scalar>
Vec3<Scalar> segment_drag(const Vec3<Scalar>& v_relative, const Vec3<Scalar>& segment_direction,
                          const Scalar& segment_length, const Scalar& altitude,
                          const TetherParams& params, const Environment& env) {
  using std::sqrt;
  const Vec3<Scalar> v_perp = v_relative - segment_direction * segment_direction.dot(v_relative);
  const Scalar speed2 = v_perp.squaredNorm();
  // sqrt is not differentiable at zero; the drag is, with zero derivative.
  if (value_of(speed2) == 0.0) return Vec3<Scalar>::Zero();
  const Scalar rho = air_density(altitude, env.atmosphere);
  return -0.5 * rho * params.diameter * params.drag_coefficient * segment_length * sqrt(speed2) * v_perp;
}

template <typename Scalar>
struct TetherConfiguration {
  std::vector<Vec3<Scalar>> positions;  // p_0 .. p_{N+1}
  std::vector<Vec3<Scalar>> forces;     // f_0 .. f_N
  std::vector<Scalar> segment_lengths;  // l_0 .. l_N

  int masses() const { return static_cast<int>(forces.size()) - 1; }
  const Vec3<Scalar>& aircraft_end() const { return positions.front(); }
  const Vec3<Scalar>& aircraft_force() const { return forces.front(); }
};

/// Unit direction of the winch-side segment from (theta_N, phi_N).
template <typename Scalar>
Vec3<Scalar> winch_segment_direction(const Scalar& theta_n, const Scalar& phi_n) {
  using std::cos;
  using std::sin;
  return Vec3<Scalar>(sin(theta_n) * cos(phi_n), sin(phi_n), cos(theta_n) * cos(phi_n));
}

/// Aircraft position and velocity in W.
template <typename Scalar>
Vec3<Scalar> aircraft_velocity_world(const State<Scalar>& x, double zeta) {
  return wind_frame(Scalar(zeta)) * (attitude_matrix(x.attitude).transpose() * x.v_body);
}

namespace detail {

template <typename Scalar>
Scalar checked_norm(const Vec3<Scalar>& f, int index) {
  const Scalar n = norm(f);
  if (!(value_of(n) >= kMinSegmentForce)) {
    throw Error(ErrorCode::kSlackSegment, "segment " + std::to_string(index) + " lost tension");
  }
  return n;
}

template <typename Scalar>
TetherConfiguration<Scalar> run_recursion(const State<Scalar>& x, const TetherBoundary<Scalar>& z,
                                          const ModelParams& params, bool loads) {
  const TetherParams& tp = params.tether;
  const int n = tp.masses;
  if (n < 1) throw Error(ErrorCode::kConfigError, "tether needs at least one mass");
  if (!(value_of(z.tension) > 0.0)) {
    throw Error(ErrorCode::kNonPositiveTension, "winch-side tension must be positive");
  }
  const Scalar length = tether_length(x.winch_angle, params.winch.radius);
  const SegmentProperties<Scalar> seg = segment_properties(length, tp);
  const double ea = tp.youngs_modulus * tp.area;

  const Vec3<Scalar> p_air = spherical_to_position(x.position);
  const Vec3<Scalar> v_air = aircraft_velocity_world(x, params.env.wind.zeta);
  const TetherMotion<Scalar> motion = tether_kinematics(p_air, v_air);

  TetherConfiguration<Scalar> c;
  c.positions.resize(n + 2);
  c.forces.resize(n + 1);
  c.segment_lengths.resize(n + 1);
  const Vec3<Scalar> dir_n = winch_segment_direction(z.theta_n, z.phi_n);
  c.positions[n + 1] = Vec3<Scalar>::Zero();
  c.forces[n] = z.tension * dir_n;
  c.segment_lengths[n] = seg.nominal_length;
  c.positions[n] = seg.nominal_length * dir_n;

  const Vec3<Scalar> weight(Scalar(0.0), Scalar(0.0), seg.mass * params.env.gravity);
  for (int j = n; j >= 1; --j) {
    const Vec3<Scalar>& p = c.positions[j];
    const MassMotion<Scalar> mm = mass_velocity_acceleration(p, motion);
    Vec3<Scalar> inertial_and_tension = seg.mass * mm.acceleration + c.forces[j];
    Vec3<Scalar> f_prev = inertial_and_tension;
    if (loads) {
      inertial_and_tension += weight;
      const Vec3<Scalar> v_rel = mm.velocity - wind_velocity(p(2), params.env.wind);
      Vec3<Scalar> dir = c.forces[j] / checked_norm(c.forces[j], j);
      f_prev = inertial_and_tension - segment_drag(v_rel, dir, seg.nominal_length, p(2), tp, params.env);
      for (int k = 0; k < tp.drag_refinements; ++k) {
        dir = f_prev / checked_norm(f_prev, j - 1);
        f_prev = inertial_and_tension - segment_drag(v_rel, dir, seg.nominal_length, p(2), tp, params.env);
      }
    }
    const Scalar f_norm = checked_norm(f_prev, j - 1);
    const Scalar l = seg.nominal_length * (1.0 + f_norm / ea);
    c.forces[j - 1] = f_prev;
    c.segment_lengths[j - 1] = l;
    c.positions[j - 1] = p + (l / f_norm) * f_prev;
  }
  return c;
}

}  // namespace detail

/// Full model: inertia, gravity and drag on every mass.
template <typename Scalar>
TetherConfiguration<Scalar> tether_recursion(const State<Scalar>& x, const TetherBoundary<Scalar>& z,
                                             const ModelParams& params) {
  return detail::run_recursion(x, z, params, true);
}

/// Straight-line limit: the masses carry only their centripetal inertia.
template <typename Scalar>
TetherConfiguration<Scalar> rigid_recursion(const State<Scalar>& x, const TetherBoundary<Scalar>& z,
                                            const ModelParams& params) {
  return detail::run_recursion(x, z, params, false);
}

template <typename Scalar>
TetherConfiguration<Scalar> tether_configuration(const State<Scalar>& x, const TetherBoundary<Scalar>& z,
                                                 const ModelParams& params) {
  return params.tether_mode == TetherMode::kRigid ? rigid_recursion(x, z, params)
                                                  : tether_recursion(x, z, params);
}

/// Algebraic residual p_aircraft^W - p_0.
template <typename Scalar>
Vec3<Scalar> tether_residual(const State<Scalar>& x, const TetherBoundary<Scalar>& z,
                             const ModelParams& params) {
  return spherical_to_position(x.position) - tether_configuration(x, z, params).aircraft_end();
}

/// Force of the tether on the aircraft in body axes, -R_W^B f_0.
template <typename Scalar>
Vec3<Scalar> aircraft_tether_force(const TetherConfiguration<Scalar>& config, const EulerAngles<Scalar>& q_a,
                                   double zeta) {
  const Mat3<Scalar> body_from_world = attitude_matrix(q_a) * wind_frame(Scalar(zeta)).transpose();
  return -(body_from_world * config.aircraft_force());
}

/// Lumped drag of a straight tether acting at the aircraft,
/// -1/8 rho C_D l d |v_perp| v_perp.
template <typename Scalar>
Vec3<Scalar> rigid_bulk_drag(const Vec3<Scalar>& v_perp, const Scalar& length, const Scalar& mid_altitude,
                             const TetherParams& params, const Environment& env) {
  using std::sqrt;
  const Scalar speed2 = v_perp.squaredNorm();
  if (value_of(speed2) == 0.0) return Vec3<Scalar>::Zero();
  const Scalar rho = air_density(mid_altitude, env.atmosphere);
  return -0.125 * rho * params.drag_coefficient * length * params.diameter * sqrt(speed2) * v_perp;
}

/// Bulk drag for the aircraft state x, world frame. The apparent velocity at
/// the aircraft is projected normal to the tether chord; density is taken at
/// half the aircraft altitude.
template <typename Scalar>
Vec3<Scalar> rigid_bulk_drag(const State<Scalar>& x, const ModelParams& params) {
  const Vec3<Scalar> p = spherical_to_position(x.position);
  const Vec3<Scalar> v_a =
      aircraft_velocity_world(x, params.env.wind.zeta) - wind_velocity(p(2), params.env.wind);
  const Vec3<Scalar> e = p / norm(p);
  const Vec3<Scalar> v_perp = v_a - e * e.dot(v_a);
  return rigid_bulk_drag(v_perp, tether_length(x.winch_angle, params.winch.radius), Scalar(0.5 * p(2)),
                         params.tether, params.env);
}

struct TetherSolveOptions {
  double tolerance = 1e-8;  // m
  int max_iterations = 50;
  double max_condition = 1e12;
};

struct TetherSolveResult {
  TetherBoundary<double> boundary;
  int iterations = 0;
  double residual = 0.0;
};

/// Residual and exact Jacobian with respect to z.
inline std::pair<Vec3<double>, Mat3<double>> tether_residual_jacobian(const State<double>& x,
                                                                       const TetherBoundary<double>& z,
                                                                       const ModelParams& params) {
  using D = Dual<double, 3>;
  const State<D> xd = unpack_state(pack(x).cast<D>().eval());
  const TetherBoundary<D> zd{D::variable(z.tension, 0), D::variable(z.theta_n, 1), D::variable(z.phi_n, 2)};
  const Vec3<D> g = tether_residual(xd, zd, params);
  Vec3<double> value;
  Mat3<double> jac;
  for (int i = 0; i < 3; ++i) {
    value(i) = g(i).v;
    for (int k = 0; k < 3; ++k) jac(i, k) = g(i).d[k];
  }
  return {value, jac};
}

/// Newton iteration on the algebraic residual with step halving.
inline TetherSolveResult solve_tether_boundary_report(const State<double>& x, const TetherBoundary<double>& guess,
                                                      const ModelParams& params,
                                                      const TetherSolveOptions& options = {}) {
  TetherSolveResult out{guess, 0, 0.0};
  auto residual_norm = [&](const TetherBoundary<double>& z) -> double {
    try {
      return tether_residual(x, z, params).norm();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  out.residual = residual_norm(out.boundary);
  if (!std::isfinite(out.residual)) {
    throw Error(ErrorCode::kNoConvergence, "tether residual not evaluable at the initial guess");
  }
  while (out.residual >= options.tolerance) {
    if (out.iterations >= options.max_iterations) {
      throw Error(ErrorCode::kNoConvergence,
                  "tether boundary Newton did not converge, residual " + std::to_string(out.residual) + " m");
    }
    ++out.iterations;
    const auto [g, jac] = tether_residual_jacobian(x, out.boundary, params);
    const Eigen::JacobiSVD<Mat3<double>> svd(jac);
    const Vec3<double> sv = svd.singularValues();
    if (!(sv(2) > 0.0) || sv(0) / sv(2) > options.max_condition) {
      throw Error(ErrorCode::kSingularJacobian, "tether residual Jacobian is singular");
    }
    const Vec3<double> step = -jac.partialPivLu().solve(g);
    double alpha = 1.0;
    // Keep the tension positive.
    if (out.boundary.tension + step(0) <= 0.0) alpha = 0.5 * out.boundary.tension / -step(0);
    bool accepted = false;
    for (int k = 0; k < 30; ++k, alpha *= 0.5) {
      const TetherBoundary<double> trial = TetherBoundary<double>::from(out.boundary.vector() + alpha * step);
      const double r = residual_norm(trial);
      if (r < out.residual || (alpha == 1.0 && r < options.tolerance)) {
        out.boundary = trial;
        out.residual = r;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw Error(ErrorCode::kNoConvergence, "tether boundary line search failed");
    }
  }
  return out;
}

inline TetherBoundary<double> solve_tether_boundary(const State<double>& x, const TetherBoundary<double>& guess,
                                                    const ModelParams& params,
                                                    const TetherSolveOptions& options = {}) {
  return solve_tether_boundary_report(x, guess, params, options).boundary;
}

}  // namespace awes

#endif  // AWES_TETHER_HPP_
