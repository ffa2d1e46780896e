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

// Reference frames and kinematic maps.
//
// Elementary rotations follow the "mapping" convention: R_a(angle) converts
// coordinates expressed in a parent frame into coordinates of the frame
// rotated by `angle` about axis a. Under this convention the attitude
// R_O^B = R_x(phi) R_y(theta) R_z(psi) maps inertial (O) coordinates into
// body (B) coordinates. O has z pointing down, the wind frame W has z up.

#ifndef AWES_FRAMES_HPP_
#define AWES_FRAMES_HPP_

#include <algorithm>
#include <cmath>

#include "awes/errors.hpp"
#include "awes/types.hpp"

namespace awes {

enum class Axis { kX, kY, kZ };

inline constexpr double kSingularityThreshold = 1e-10;

template <typename Scalar>
struct EulerAngles {
  Scalar phi{0.0};
  Scalar theta{0.0};
  Scalar psi{0.0};

  Vec3<Scalar> vector() const { return Vec3<Scalar>(phi, theta, psi); }
  static EulerAngles from(const Vec3<Scalar>& v) { return {v(0), v(1), v(2)}; }
};

/// Azimuth lambda, polar (elevation) eta and radial distance r of the
/// aircraft relative to the ground station, expressed in W.
template <typename Scalar>
struct SphericalCoords {
  Scalar lambda{0.0};
  Scalar eta{0.0};
  Scalar r{1.0};

  Vec3<Scalar> vector() const { return Vec3<Scalar>(lambda, eta, r); }
  static SphericalCoords from(const Vec3<Scalar>& v) { return {v(0), v(1), v(2)}; }
};

template <typename Scalar>
Mat3<Scalar> elementary_rotation(Axis axis, const Scalar& angle) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(angle);
  const Scalar s = sin(angle);
  const Scalar o(0.0);
  const Scalar l(1.0);
  Mat3<Scalar> r;
  switch (axis) {
    case Axis::kX:
      r << l, o, o,
           o, c, s,
           o, -s, c;
      break;
    case Axis::kY:
      r << c, o, -s,
           o, l, o,
           s, o, c;
      break;
    case Axis::kZ:
      r << c, s, o,
           -s, c, o,
           o, o, l;
      break;
  }
  return r;
}

/// R_O^B for the given Euler angles.
template <typename Scalar>
Mat3<Scalar> attitude_matrix(const EulerAngles<Scalar>& q) {
  return elementary_rotation(Axis::kX, q.phi) * elementary_rotation(Axis::kY, q.theta) *
         elementary_rotation(Axis::kZ, q.psi);
}

/// J(q) with omega_B = J(q) * dq/dt, derived from the composition in
/// attitude_matrix. det J = cos(theta).
template <typename Scalar>
Mat3<Scalar> euler_rate_map(const EulerAngles<Scalar>& q) {
  using std::cos;
  using std::sin;
  const Scalar cphi = cos(q.phi);
  const Scalar sphi = sin(q.phi);
  const Scalar cth = cos(q.theta);
  const Scalar sth = sin(q.theta);
  const Scalar o(0.0);
  Mat3<Scalar> j;
  j << Scalar(1.0), o, -sth,
       o, cphi, sphi * cth,
       o, -sphi, cphi * cth;
  if (std::abs(value_of(cth)) < kSingularityThreshold) {
    throw Error(ErrorCode::kSingularConfiguration, "Euler rate map singular at |theta| = pi/2");
  }
  return j;
}

/// dq/dt from the body angular velocity.
template <typename Scalar>
Vec3<Scalar> euler_rates(const EulerAngles<Scalar>& q, const Vec3<Scalar>& omega_body) {
  return solve3(euler_rate_map(q), omega_body);
}

/// Alternative closed form of the rate map. It does not satisfy the
/// kinematic identity for the R_x R_y R_z composition; regression reference
/// only.
inline Mat3<double> printed_euler_rate_map(const EulerAngles<double>& q) {
  const double cth = std::cos(q.theta);
  const double sth = std::sin(q.theta);
  const double cpsi = std::cos(q.psi);
  const double spsi = std::sin(q.psi);
  Mat3<double> j;
  j << cth * cpsi, spsi, 0.0,
       -spsi, cpsi, 0.0,
       sth * cpsi, 0.0, 1.0;
  return j;
}

/// R_O^W = R_z(zeta) R_x(pi); W x-axis along the wind, W z-axis up.
template <typename Scalar>
Mat3<Scalar> wind_frame(const Scalar& zeta) {
  return elementary_rotation(Axis::kZ, zeta) * elementary_rotation(Axis::kX, Scalar(kPi));
}

/// R_W^T, the tether frame whose z-axis points from the aircraft to the
/// origin. The factors R_z(lambda), R_y(-eta), R_y(-pi/2) are applied to
/// the aircraft-side vector first, which in the mapping convention reverses
/// the product order.
template <typename Scalar>
Mat3<Scalar> tether_frame(const SphericalCoords<Scalar>& q) {
  return elementary_rotation(Axis::kY, Scalar(-kPi / 2.0)) *
         elementary_rotation(Axis::kY, Scalar(-q.eta)) * elementary_rotation(Axis::kZ, q.lambda);
}

/// Aircraft position in W: (R_W^T)^T (0, 0, -r) = r (c_l c_e, s_l c_e, s_e).
template <typename Scalar>
Vec3<Scalar> spherical_to_position(const SphericalCoords<Scalar>& q) {
  if (value_of(q.r) <= 0.0) {
    throw Error(ErrorCode::kNonPositiveLength, "spherical radius must be positive");
  }
  return tether_frame(q).transpose() * Vec3<Scalar>(Scalar(0.0), Scalar(0.0), -q.r);
}

/// M(q) with v_W = M(q) * dq/dt, columns d p / d(lambda, eta, r).
template <typename Scalar>
Mat3<Scalar> spherical_rate_map(const SphericalCoords<Scalar>& q) {
  using std::cos;
  using std::sin;
  const Scalar cl = cos(q.lambda);
  const Scalar sl = sin(q.lambda);
  const Scalar ce = cos(q.eta);
  const Scalar se = sin(q.eta);
  Mat3<Scalar> m;
  m << -sl * ce * q.r, -cl * se * q.r, cl * ce,
       cl * ce * q.r, -sl * se * q.r, sl * ce,
       Scalar(0.0), ce * q.r, se;
  if (std::abs(value_of(q.r) * value_of(q.r) * value_of(ce)) < kSingularityThreshold) {
    throw Error(ErrorCode::kSingularConfiguration, "spherical rate map singular (cos(eta) = 0 or r = 0)");
  }
  return m;
}

template <typename Scalar>
Vec3<Scalar> spherical_rates(const SphericalCoords<Scalar>& q, const Vec3<Scalar>& v_wind_frame) {
  return solve3(spherical_rate_map(q), v_wind_frame);
}

/// Same map with columns ordered (r, lambda, eta). Regression reference only.
inline Mat3<double> printed_spherical_rate_map(const SphericalCoords<double>& q) {
  const double cl = std::cos(q.lambda);
  const double sl = std::sin(q.lambda);
  const double ce = std::cos(q.eta);
  const double se = std::sin(q.eta);
  Mat3<double> m;
  m << cl * ce, -sl * ce * q.r, -cl * se * q.r,
       sl * ce, cl * ce * q.r, -sl * se * q.r,
       se, 0.0, ce * q.r;
  return m;
}

/// Inverse of spherical_to_position.
inline SphericalCoords<double> position_to_spherical(const Vec3<double>& p) {
  const double r = p.norm();
  if (r <= 0.0) throw Error(ErrorCode::kDegeneratePosition, "position at the origin");
  return {std::atan2(p.y(), p.x()), std::asin(p.z() / r), r};
}

/// Euler angles reproducing R_O^B through attitude_matrix. The branch with
/// |theta| <= pi/2 is returned.
inline EulerAngles<double> euler_from_matrix(const Mat3<double>& r) {
  EulerAngles<double> q;
  q.theta = -std::asin(std::clamp(r(0, 2), -1.0, 1.0));
  q.psi = std::atan2(r(0, 1), r(0, 0));
  q.phi = std::atan2(r(1, 2), r(2, 2));
  return q;
}

}  // namespace awes

#endif  // AWES_FRAMES_HPP_
