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

#ifndef AWES_TYPES_HPP_
#define AWES_TYPES_HPP_

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "awes/dual.hpp"

namespace awes {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

inline constexpr double kPi = 3.14159265358979323846;

template <typename Scalar>
Mat3<Scalar> skew(const Vec3<Scalar>& w) {
  Mat3<Scalar> s;
  s << Scalar(0.0), -w(2), w(1),
       w(2), Scalar(0.0), -w(0),
       -w(1), w(0), Scalar(0.0);
  return s;
}

template <typename Scalar>
Scalar norm(const Vec3<Scalar>& v) {
  using std::sqrt;
  return sqrt(v.squaredNorm());
}

// Explicit 3x3 solve by cofactors so it stays generic over dual scalars.
template <typename Scalar>
Scalar det3(const Mat3<Scalar>& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

template <typename Scalar>
Vec3<Scalar> solve3(const Mat3<Scalar>& a, const Vec3<Scalar>& b) {
  Mat3<Scalar> adj;
  adj(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  adj(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  adj(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  adj(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  adj(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  adj(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  adj(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  adj(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  adj(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Scalar det = a(0, 0) * adj(0, 0) + a(0, 1) * adj(1, 0) + a(0, 2) * adj(2, 0);
  return (adj * b) / det;
}

template <typename Scalar>
Vec3<Scalar> cast_vec(const Vec3<double>& v) {
  return Vec3<Scalar>(Scalar(v(0)), Scalar(v(1)), Scalar(v(2)));
}

template <typename Scalar>
Vec3<double> values(const Vec3<Scalar>& v) {
  return Vec3<double>(value_of(v(0)), value_of(v(1)), value_of(v(2)));
}

}  // namespace awes

#endif  // AWES_TYPES_HPP_
