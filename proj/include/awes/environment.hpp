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

#ifndef AWES_ENVIRONMENT_HPP_
#define AWES_ENVIRONMENT_HPP_

#include <cmath>
#include <string>

#include "awes/errors.hpp"
#include "awes/params.hpp"
#include "awes/types.hpp"

namespace awes {

/// Logarithmic wind profile along the W x-axis,
/// v_ground ln(z / z0) / ln(z_ref / z0).
template <typename Scalar>
Vec3<Scalar> wind_velocity(const Scalar& z, const WindModel& model) {
  using std::log;
  if (!(value_of(z) > model.z0)) {
    throw Error(ErrorCode::kInvalidAltitude,
                "altitude " + std::to_string(value_of(z)) + " m is at or below the roughness length");
  }
  const Scalar speed = model.v_ground * log(z / model.z0) / std::log(model.z_ref / model.z0);
  return Vec3<Scalar>(speed, Scalar(0.0), Scalar(0.0));
}

template <typename Scalar>
Scalar air_density(const Scalar& z, const AtmosphereModel& model) {
  using std::exp;
  if (!std::isfinite(model.scale_height)) return Scalar(model.rho0);
  return model.rho0 * exp(-z / model.scale_height);
}

}  // namespace awes

#endif  // AWES_ENVIRONMENT_HPP_
