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

// Initial guesses: reference paths, attitudes along them, and a
// per-node state/algebraic/control trajectory that satisfies the discrete
// dynamics exactly with the fictitious wrench switched fully on.

#ifndef AWES_INITIALIZATION_HPP_
#define AWES_INITIALIZATION_HPP_

#include <vector>

#include "awes/frames.hpp"
#include "awes/ocp.hpp"
#include "awes/params.hpp"
#include "awes/state.hpp"
#include "awes/transcription.hpp"
#include "awes/types.hpp"

namespace awes {

struct PathSpec {
  PathShape shape = PathShape::kCircle;
  int loops = 1;                                 // N_w
  double duration = 15.0;                        // T_f, s
  Vec3<double> center{500.0, 0.0, 0.0};          // o_c before elevation, W frame
  double radius = 140.0;                         // m
  double width = 1.0;                            // lemniscate a
  double height = 0.5;                           // lemniscate b
  double phase = 4.5;                            // phi_0, rad
  double elevation = 50.0 * kPi / 180.0;         // eta_0, rad
  int direction = -1;                            // sign of the lateral motion

  double angular_rate() const { return 2.0 * kPi * loops / duration; }
};

void validate(const PathSpec& spec);

/// Aircraft position on the reference path, W frame.
Vec3<double> path_position(const PathSpec& spec, double t);
/// Time derivative of path_position.
Vec3<double> path_velocity(const PathSpec& spec, double t);

/// Euler angles of a body frame with x along the velocity and z towards the
/// winch, both given in O. The z-axis is orthogonalized against x.
EulerAngles<double> path_attitude(const Vec3<double>& p_o, const Vec3<double>& v_o);

struct WinchInit {
  double angle = 0.0;
  double rate = 0.0;
};

/// Unstretched length equal to the aircraft distance and drum rate from the
/// radial speed, both per unit drum radius.
WinchInit winch_init(const Vec3<double>& p_w, const Vec3<double>& v_w, double radius);

struct GuessOptions {
  double initial_tension = 2.0e4;  // winch-side tension the guess is built around, N
};

/// Node-wise guess (x_n, u_n, z_n) for n = 0..N_t with Phi = (1, 1, 1).
std::vector<NodeVariables<double>> consistent_guess(const PathSpec& spec, const ModelParams& params,
                                                    const Mesh& mesh, const GuessOptions& options = {});

}  // namespace awes

#endif  // AWES_INITIALIZATION_HPP_
