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

// Model parameter sets shared by the dynamics modules.

#ifndef AWES_PARAMS_HPP_
#define AWES_PARAMS_HPP_

#include <limits>

#include "awes/types.hpp"

namespace awes {

struct WindModel {
  double v_ground = 15.0;  // m/s at z_ref
  double z_ref = 100.0;    // m
  double z0 = 0.1;         // roughness length, m
  double zeta = 0.0;       // wind direction from the inertial x-axis, rad
};

/// Isothermal exponential density profile. An infinite scale height gives a
/// constant density.
struct AtmosphereModel {
  double rho0 = 1.225;          // kg/m^3
  double scale_height = 8500.0;  // m
};

struct Environment {
  WindModel wind;
  AtmosphereModel atmosphere;
  double gravity = 9.81;
};

/// C(alpha) = c2 alpha^2 + c1 alpha + c0.
struct AeroPolynomial {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

struct SurfaceCoefficients {
  AeroPolynomial lift;
  AeroPolynomial drag;
  AeroPolynomial moment;  // wing only
};

struct AircraftParams {
  double mass = 300.0;
  Mat3<double> inertia = Vec3<double>(1500.0, 500.0, 1900.0).asDiagonal();
  double wing_span = 10.0;
  double wing_area = 10.0;
  double wing_chord = 1.0;
  double elevator_area = 1.5;
  double rudder_area = 1.0;
  // Application points relative to the centre of gravity, body frame.
  Vec3<double> elevator_position{-5.0, 0.0, 0.0};
  Vec3<double> rudder_position{-5.0, 0.0, 0.0};
  SurfaceCoefficients wing{{0.0, -4.5, 0.3}, {1.0, 0.0, 0.06}, {0.0, 0.0, 0.0}};
  SurfaceCoefficients elevator{{0.0, -3.5, 0.0}, {0.5, 0.0, 0.01}, {}};
  SurfaceCoefficients rudder{{0.0, 3.0, 0.0}, {0.5, 0.0, 0.01}, {}};
  // Roll moment coefficient per radian of corrected aileron deflection.
  double aileron_roll_coefficient = 0.1;
  // Rate-damping levers: alpha_damped = -q l_e / |v_a|,
  // beta_damped = r l_r / |v_a|, delta_aileron_damped = -p l_a / |v_a|.
  double elevator_damping_lever = 5.0;
  double rudder_damping_lever = -5.0;
  double aileron_damping_lever = 2.5;
};

struct WinchParams {
  double inertia = 20.0;   // kg m^2
  double friction = 10.0;  // N m s
  double radius = 0.5;     // m
};

struct TetherParams {
  int masses = 10;
  double density = 0.1;              // kg/m
  double diameter = 0.012;           // m
  double youngs_modulus = 1.0e11;    // Pa
  double area = 1.131e-4;            // m^2
  double drag_coefficient = 1.0;
  int drag_refinements = 1;
};

enum class TetherMode { kFlexible, kRigid };

struct ModelParams {
  AircraftParams aircraft;
  WinchParams winch;
  TetherParams tether;
  Environment env;
  TetherMode tether_mode = TetherMode::kFlexible;
};

}  // namespace awes

#endif  // AWES_PARAMS_HPP_
