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

#include <gtest/gtest.h>

#include "awes/errors.hpp"
#include "awes/system.hpp"
#include "support/gradient_checks.hpp"
#include "support/testing.hpp"

namespace awes {
namespace {

using testing::Sampler;

BodyWrench<double> some_wrench() { return {Vec3<double>(100.0, -20.0, 300.0), Vec3<double>(5.0, 7.0, -3.0)}; }

Controls<double> some_controls() {
  Controls<double> u;
  u.f_fict = Vec3<double>(-50.0, 10.0, 60.0);
  u.tau_fict = Vec3<double>(1.0, -2.0, 3.0);
  u.f_prop = 400.0;
  return u;
}

TEST(System, BlendWithoutHomotopyIsPhysical) {
  const BodyWrench<double> b = blended_wrench(some_wrench(), some_controls(), HomotopyVec<double>(0.0, 0.0, 0.7));
  EXPECT_EQ(b.force, some_wrench().force);
  EXPECT_EQ(b.torque, some_wrench().torque);
}

TEST(System, FullHomotopySuppressesAerodynamics) {
  const Controls<double> u = some_controls();
  const BodyWrench<double> b = blended_wrench(some_wrench(), u, HomotopyVec<double>(1.0, 1.0, 0.0));
  EXPECT_EQ(b.force, Vec3<double>(u.f_fict + u.f_prop * Vec3<double>::UnitX()));
  EXPECT_EQ(b.torque, u.tau_fict);
  const BodyWrench<double> no_prop = blended_wrench(some_wrench(), u, HomotopyVec<double>(1.0, 0.0, 0.0));
  EXPECT_EQ(no_prop.force, u.f_fict);
}

TEST(System, BlendIsAffineInEachParameter) {
  const Controls<double> u = some_controls();
  const BodyWrench<double> a = some_wrench();
  const BodyWrench<double> half = blended_wrench(a, u, HomotopyVec<double>(0.5, 0.0, 0.0));
  EXPECT_LT((half.force - 0.5 * (a.force + u.f_fict)).norm(), 1e-12);
  EXPECT_LT((half.torque - 0.5 * (a.torque + u.tau_fict)).norm(), 1e-12);
  for (int i = 0; i < 2; ++i) {
    HomotopyVec<double> p0(0.3, 0.6, 0.0), p1 = p0, pm = p0;
    p0(i) = 0.0;
    p1(i) = 1.0;
    pm(i) = 0.25;
    const BodyWrench<double> w0 = blended_wrench(a, u, p0), w1 = blended_wrench(a, u, p1), wm = blended_wrench(a, u, pm);
    EXPECT_LT((wm.force - (0.75 * w0.force + 0.25 * w1.force)).norm(), 1e-10);
  }
}

TEST(System, NodePackingRoundTrip) {
  Sampler s(31);
  NodeVariables<double> n;
  n.x = s.flying_state(ModelParams{});
  n.u = s.controls();
  n.z = {1234.0, 0.5, -0.1};
  const Eigen::Matrix<double, kNodeSize, 1> v = pack(n);
  EXPECT_EQ(kNodeSize, 28);
  EXPECT_EQ(pack(unpack_node(v)), v);
  const Eigen::VectorXd wrong = Eigen::VectorXd::Zero(13);
  try {
    unpack_state(wrong);
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(System, RightHandSideComponents) {
  const ModelParams p;
  Sampler s(32);
  const State<double> x = s.flying_state(p);
  const Controls<double> u = s.controls();
  const TetherBoundary<double> z = testing::closed_boundary(x, p);
  const HomotopyVec<double> phi(0.2, 0.4, 0.6);
  const SystemEvaluation<double> ev = evaluate_system(x, u, z, phi, p);
  EXPECT_EQ(ev.x_dot(sx::kWinchAngle), x.winch_rate);
  EXPECT_DOUBLE_EQ(ev.x_dot(sx::kWinchRate), winch_rhs(x.winch_rate, z.tension, u.generator_torque, p.winch));
  EXPECT_LT((ev.x_dot.segment<3>(sx::kAttitude) - euler_rates(x.attitude, x.omega_body)).norm(), 1e-14);
  // Position rates reproduce the world-frame velocity.
  EXPECT_LT((spherical_rate_map(x.position) * ev.x_dot.segment<3>(sx::kPosition) - ev.velocity_world).norm(), 1e-9);
  // Newton-Euler with the assembled wrench.
  BodyWrench<double> total = blended_wrench(ev.aero.wrench, u, phi);
  total.force += ev.tether_force_body + gravity_force_body(x.attitude, p.aircraft.mass, p.env.gravity);
  const BodyAccelerations<double> acc = rigid_body_rhs(x.v_body, x.omega_body, total, p.aircraft);
  EXPECT_LT((ev.x_dot.segment<3>(sx::kVelocity) - acc.v_dot).norm(), 1e-12);
  EXPECT_LT((ev.x_dot.segment<3>(sx::kOmega) - acc.omega_dot).norm(), 1e-12);
}

TEST(System, IntegratedPositionMatchesVelocity) {
  const ModelParams p;
  Sampler s(33);
  for (int i = 0; i < 20; ++i) {
    const State<double> x = s.flying_state(p);
    const Controls<double> u = s.controls();
    const TetherBoundary<double> z = testing::closed_boundary(x, p);
    const SystemEvaluation<double> ev = evaluate_system(x, u, z, HomotopyVec<double>(0.0, 0.0, 0.0), p);
    const Vec3<double> q = x.position.vector();
    const Vec3<double> q_dot = ev.x_dot.segment<3>(sx::kPosition);
    auto error = [&](double dt) {
      const Vec3<double> moved = spherical_to_position(SphericalCoords<double>::from(q + dt * q_dot));
      return (moved - spherical_to_position(x.position) - dt * ev.velocity_world).norm();
    };
    // Second-order remainder: halving dt quarters the error.
    EXPECT_NEAR(error(1e-2) / error(5e-3), 4.0, 0.1);
  }
}

TEST(System, RigidModeAddsBulkDrag) {
  ModelParams flex;
  ModelParams rigid = flex;
  rigid.tether_mode = TetherMode::kRigid;
  Sampler s(34);
  const State<double> x = s.flying_state(flex);
  const Controls<double> u = s.controls();
  const TetherBoundary<double> z = testing::closed_boundary(x, rigid);
  const HomotopyVec<double> phi(0.0, 0.0, 0.0);
  const SystemEvaluation<double> er = evaluate_system(x, u, z, phi, rigid);
  BodyWrench<double> total = blended_wrench(er.aero.wrench, u, phi);
  total.force += er.tether_force_body + gravity_force_body(x.attitude, rigid.aircraft.mass, rigid.env.gravity) +
                 body_from_wind(x.attitude, 0.0) * rigid_bulk_drag(x, rigid);
  const BodyAccelerations<double> acc = rigid_body_rhs(x.v_body, x.omega_body, total, rigid.aircraft);
  EXPECT_LT((er.x_dot.segment<3>(sx::kVelocity) - acc.v_dot).norm(), 1e-12);
}

TEST(System, FlexibleAndRigidAgreeWithoutLoads) {
  ModelParams flex;
  flex.env.gravity = 0.0;
  flex.env.wind.v_ground = 0.0;
  ModelParams rigid = flex;
  rigid.tether_mode = TetherMode::kRigid;
  State<double> x;
  x.position = {0.1, 0.7, 380.0};
  x.winch_angle = 379.0 / flex.winch.radius;
  x.v_body = Vec3<double>(1e-3, 0.0, 0.0);  // keeps the aerodynamic angles defined; aero is blended out
  const TetherBoundary<double> z = testing::closed_boundary(x, flex);
  Controls<double> u;
  const HomotopyVec<double> phi(1.0, 0.0, 0.0);
  const StateVec<double> a = dae_rhs(x, u, z, phi, flex);
  const StateVec<double> b = dae_rhs(x, u, z, phi, rigid);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(System, DualJacobiansMatchFiniteDifferences) {
  const ModelParams p;
  Sampler s(35);
  const auto fs = testing::model_functions(p);
  for (int i = 0; i < 5; ++i) {
    const Eigen::VectorXd v = testing::sample_point(s, p);
    for (const auto& f : fs) EXPECT_LT(testing::gradient_mismatch(f, v), 1e-5) << f.name;
  }
}

}  // namespace
}  // namespace awes
