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

#include "awes/initialization.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "awes/environment.hpp"
#include "awes/errors.hpp"
#include "awes/system.hpp"
#include "awes/tether.hpp"
#include "awes/winch.hpp"

namespace awes {

void validate(const PathSpec& spec) {
  if (!(spec.duration > 0.0)) throw Error(ErrorCode::kConfigError, "path duration must be positive");
  if (spec.loops < 1) throw Error(ErrorCode::kConfigError, "path needs at least one loop");
  if (!(spec.radius > 0.0)) throw Error(ErrorCode::kConfigError, "path radius must be positive");
  if (spec.direction != 1 && spec.direction != -1) {
    throw Error(ErrorCode::kConfigError, "path direction must be +1 or -1");
  }
}

namespace {

// Path in the unelevated plane and its time derivative.
Vec3<double> planar_point(const PathSpec& s, double t, int derivative) {
  const double w = s.angular_rate();
  const double a = w * t - s.phase;
  const double d = s.direction;
  if (s.shape == PathShape::kCircle) {
    if (derivative == 0) return s.radius * Vec3<double>(0.0, d * std::sin(a), std::cos(a));
    return s.radius * w * Vec3<double>(0.0, d * std::cos(a), -std::sin(a));
  }
  const double a2 = 2.0 * w * t - s.phase;
  if (derivative == 0) return s.radius * Vec3<double>(0.0, d * s.width * std::sin(a), -s.height * std::sin(a2));
  return s.radius * w * Vec3<double>(0.0, d * s.width * std::cos(a), -2.0 * s.height * std::cos(a2));
}

Mat3<double> elevation(const PathSpec& s) { return elementary_rotation(Axis::kY, s.elevation); }

}  // namespace

Vec3<double> path_position(const PathSpec& spec, double t) {
  return elevation(spec) * (spec.center + planar_point(spec, t, 0));
}

Vec3<double> path_velocity(const PathSpec& spec, double t) { return elevation(spec) * planar_point(spec, t, 1); }

EulerAngles<double> path_attitude(const Vec3<double>& p_o, const Vec3<double>& v_o) {
  if (!(v_o.norm() > 0.0) || !(p_o.norm() > 0.0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "zero position or velocity");
  }
  const Vec3<double> ex = v_o.normalized();
  Vec3<double> ez = -p_o.normalized();
  if (ez.cross(ex).norm() < 1e-6) throw Error(ErrorCode::kDegenerateGeometry, "velocity parallel to position");
  ez = (ez - ex * ex.dot(ez)).normalized();
  const Vec3<double> ey = ez.cross(ex);
  Mat3<double> r;
  r.row(0) = ex.transpose();
  r.row(1) = ey.transpose();
  r.row(2) = ez.transpose();
  return euler_from_matrix(r);
}

WinchInit winch_init(const Vec3<double>& p_w, const Vec3<double>& v_w, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kNonPositiveLength, "winch radius must be positive");
  const double r = p_w.norm();
  if (!(r > 0.0)) throw Error(ErrorCode::kDegeneratePosition, "aircraft at the winch");
  return {r / radius, p_w.dot(v_w) / r / radius};
}

namespace {

// Winch angle and winch-side direction that close the tether at the given
// winch-side tension, by Newton on (theta_winch, theta_N, phi_N).
void close_tether(State<double>& x, TetherBoundary<double>& z, const ModelParams& params, int node) {
  using D = Dual<double, 3>;
  auto residual = [&](const Vec3<double>& v, Mat3<double>* jac) {
    State<D> xd = unpack_state(pack(x).cast<D>().eval());
    xd.winch_angle = D::variable(v(0), 0);
    const TetherBoundary<D> zd{D(z.tension), D::variable(v(1), 1), D::variable(v(2), 2)};
    const Vec3<D> g = tether_residual(xd, zd, params);
    Vec3<double> out;
    for (int i = 0; i < 3; ++i) {
      out(i) = g(i).v;
      if (jac) for (int k = 0; k < 3; ++k) (*jac)(i, k) = g(i).d[k];
    }
    return out;
  };
  Vec3<double> v(x.winch_angle, z.theta_n, z.phi_n);
  Mat3<double> jac;
  Vec3<double> g = residual(v, &jac);
  for (int it = 0; it < 50 && g.norm() > 1e-10; ++it) {
    const Vec3<double> step = -jac.partialPivLu().solve(g);
    double alpha = 1.0;
    for (int k = 0; k < 30; ++k, alpha *= 0.5) {
      try {
        Mat3<double> jt;
        const Vec3<double> gt = residual(v + alpha * step, &jt);
        if (gt.norm() < g.norm()) {
          v += alpha * step;
          g = gt;
          jac = jt;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (alpha < 1e-8) break;
  }
  if (!(g.norm() <= 1e-8)) {
    throw Error(ErrorCode::kNoConvergence,
                "initial tether closure failed at node " + std::to_string(node) + ", residual " +
                    std::to_string(g.norm()) + " m");
  }
  x.winch_angle = v(0);
  z.theta_n = v(1);
  z.phi_n = v(2);
}

}  // namespace

std::vector<NodeVariables<double>> consistent_guess(const PathSpec& spec, const ModelParams& params,
                                                    const Mesh& mesh, const GuessOptions& options) {
  validate(spec);
  if (mesh.intervals < 1) throw Error(ErrorCode::kMeshMismatch, "mesh needs at least one interval");
  const int nn = mesh.nodes();
  const double dt = mesh.step();
  const double time_scale = spec.duration / mesh.horizon;
  const Mat3<double> w_from_o = wind_frame(params.env.wind.zeta);
  std::vector<NodeVariables<double>> w(nn);

  // Positions on the path; node 0 and node N coincide for a full period.
  std::vector<SphericalCoords<double>> pos(nn);
  for (int n = 0; n < nn; ++n) pos[n] = position_to_spherical(path_position(spec, time_scale * mesh.time(n)));

  // Velocities from backward differences of the spherical coordinates so
  // the kinematic defects vanish; node 0 takes the value of node N.
  std::vector<Vec3<double>> vel(nn);
  for (int n = 1; n < nn; ++n) {
    vel[n] = spherical_rate_map(pos[n]) * ((pos[n].vector() - pos[n - 1].vector()) / dt);
  }
  vel[0] = vel[nn - 1];

  // Attitudes with the body x-axis along the air-relative velocity, yaw
  // unwrapped along the path.
  std::vector<EulerAngles<double>> att(nn);
  for (int n = 0; n < nn; ++n) {
    const Vec3<double> p = spherical_to_position(pos[n]);
    const Vec3<double> v_air = vel[n] - wind_velocity(p.z(), params.env.wind);
    att[n] = path_attitude(w_from_o.transpose() * p, w_from_o.transpose() * v_air);
    if (n > 0) {
      const double prev = att[n - 1].psi;
      att[n].psi = prev + std::remainder(att[n].psi - prev, 2.0 * kPi);
    }
  }
  att[nn - 1].psi = att[0].psi + yaw_winding(spec.shape, spec.loops, spec.direction);

  const Mat3<double> j = params.aircraft.inertia;
  std::vector<Vec3<double>> omega(nn);
  for (int n = 1; n < nn; ++n) {
    omega[n] = euler_rate_map(att[n]) * ((att[n].vector() - att[n - 1].vector()) / dt);
  }
  omega[0] = omega[nn - 1];

  for (int n = 0; n < nn; ++n) {
    State<double>& x = w[n].x;
    x.position = pos[n];
    x.attitude = att[n];
    x.omega_body = omega[n];
    x.v_body = attitude_matrix(att[n]) * w_from_o.transpose() * vel[n];
    x.winch_angle = winch_init(spherical_to_position(pos[n]), vel[n], params.winch.radius).angle;
    TetherBoundary<double>& z = w[n].z;
    z.tension = options.initial_tension;
    const Vec3<double> p = spherical_to_position(pos[n]);
    // theta_N is measured from the W z-axis towards x.
    z.theta_n = std::atan2(std::hypot(p.x(), p.y()), p.z());
    z.phi_n = std::asin(p.y() / p.norm());
    close_tether(x, z, params, n);
  }
  for (int n = 1; n < nn; ++n) w[n].x.winch_rate = (w[n].x.winch_angle - w[n - 1].x.winch_angle) / dt;
  w[0].x.winch_rate = w[nn - 1].x.winch_rate;

  // Controls: the dynamics are affine in (f_fict, tau_fict, tau_gen) once the
  // physical deflections are zero and Phi = 1.
  const HomotopyVec<double> phi = HomotopyVec<double>::Ones();
  for (int n = 0; n + 1 < nn; ++n) {
    const NodeVariables<double>& next = w[n + 1];
    Controls<double> u;
    const StateVec<double> f0 = dae_rhs(next.x, u, next.z, phi, params);
    const StateVec<double> need = (pack(next.x) - pack(w[n].x)) / dt;
    const StateVec<double> gap = need - f0;
    u.f_fict = params.aircraft.mass * gap.segment<3>(sx::kVelocity);
    u.tau_fict = j * gap.segment<3>(sx::kOmega);
    u.generator_torque = -params.winch.inertia * gap(sx::kWinchRate);
    w[n].u = u;
  }
  w[nn - 1].u = w[0].u;
  return w;
}

}  // namespace awes
