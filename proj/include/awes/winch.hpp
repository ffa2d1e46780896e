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

// One-degree-of-freedom winch and generator.

#ifndef AWES_WINCH_HPP_
#define AWES_WINCH_HPP_

#include "awes/errors.hpp"
#include "awes/params.hpp"
#include "awes/types.hpp"

namespace awes {

/// Drum acceleration, (r |f| - tau_gen - b dtheta) / J.
template <typename Scalar>
Scalar winch_rhs(const Scalar& winch_rate, const Scalar& tension, const Scalar& generator_torque,
                 const WinchParams& params) {
  if (!(value_of(tension) > 0.0)) {
    throw Error(ErrorCode::kNonPositiveTension, "winch tension must be positive");
  }
  return (params.radius * tension - generator_torque - params.friction * winch_rate) / params.inertia;
}

/// Unstretched deployed length r_winch * theta.
template <typename Scalar>
Scalar tether_length(const Scalar& winch_angle, double radius) {
  if (!(value_of(winch_angle) > 0.0)) {
    throw Error(ErrorCode::kNonPositiveLength, "winch angle must be positive");
  }
  return radius * winch_angle;
}

/// Positive while generating on reel-out, negative while motoring.
template <typename Scalar>
Scalar mechanical_power(const Scalar& winch_rate, const Scalar& generator_torque) {
  return winch_rate * generator_torque;
}

}  // namespace awes

#endif  // AWES_WINCH_HPP_
