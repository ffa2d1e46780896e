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

#include <cmath>

#include "awes/ocp.hpp"
#include "support/testing.hpp"

namespace awes {
namespace {

using testing::Sampler;

struct Fixture {
  ModelParams params;
  State<double> x;
  Controls<double> u;
  TetherBoundary<double> z;
  SystemEvaluation<double> ev;

  explicit Fixture(unsigned seed) {
    Sampler s(seed);
    x = s.flying_state(params);
    u = s.controls();
    z = testing::closed_boundary(x, params);
    ev = evaluate_system(x, u, z, HomotopyVec<double>(0.0, 0.0, 0.0), params);
  }
};

TEST(Ocp, CostRateWithoutWeightsIsNegativePower) {
  const Fixture f(41);
  CostWeights w;
  w.angular_acceleration.setZero();
  w.sideslip = 0.0;
  EXPECT_DOUBLE_EQ(cost_rate(f.ev, f.x, f.u, w, 1e5), -f.x.winch_rate * f.u.generator_torque);
}

TEST(Ocp, CostRateZeroPowerZeroPenalty) {
  Fixture f(42);
  f.u.generator_torque = 0.0;
  CostWeights w;
  w.angular_acceleration.setZero();
  w.sideslip = 0.0;
  EXPECT_EQ(cost_rate(f.ev, f.x, f.u, w, 1e5), 0.0);
}

TEST(Ocp, DoublingWeightsDoublesOnlyThePenalty) {
  const Fixture f(43);
  const CostWeights w;
  CostWeights w2 = w;
  w2.angular_acceleration *= 2.0;
  w2.sideslip *= 2.0;
  const double power = -f.x.winch_rate * f.u.generator_torque;
  const double p1 = cost_rate(f.ev, f.x, f.u, w, 1e5) - power;
  const double p2 = cost_rate(f.ev, f.x, f.u, w2, 1e5) - power;
  EXPECT_NEAR(p2, 2.0 * p1, 1e-9 * std::abs(p1));
  EXPECT_GT(p1, 0.0);
}

TEST(Ocp, HomotopyCostLimits) {
  const Fixture f(44);
  const CostWeights w;
  const StateVec<double> ref = pack(f.x);
  const StateVec<double> scale = StateVec<double>::Ones();
  // Phi_3 = 0 gives the plain cost rate.
  EXPECT_NEAR(homotopy_cost_rate(f.ev, f.x, f.u, 0.0, ref, scale, w, 1e5), cost_rate(f.ev, f.x, f.u, w, 1e5), 1e-9);
  // Phi_3 = 1 at the reference: smoothness only.
  const double smooth = 1e5 * smoothness_penalty(f.ev, w);
  EXPECT_NEAR(homotopy_cost_rate(f.ev, f.x, f.u, 1.0, ref, scale, w, 1e5), smooth, 1e-9 * smooth);
  // Away from the reference the tracking term is the weighted squared deviation.
  StateVec<double> shifted = ref;
  shifted(0) += 2.0;
  EXPECT_NEAR(homotopy_cost_rate(f.ev, f.x, f.u, 1.0, shifted, scale, w, 1e5), smooth + 1e5 * 4.0, 1e-6 * smooth);
}

TEST(Ocp, PathConstraintRows) {
  const Fixture f(45);
  const auto h = path_constraints(f.ev);
  EXPECT_DOUBLE_EQ(h(pc::kTetherForce), f.ev.tether.aircraft_force().norm());
  EXPECT_DOUBLE_EQ(h(pc::kLateralPosition), f.ev.position_world.y());
  EXPECT_DOUBLE_EQ(h(pc::kAltitude), f.ev.position_world.z());
  EXPECT_DOUBLE_EQ(h(pc::kWinchAcceleration), f.ev.x_dot(sx::kWinchRate));
  EXPECT_DOUBLE_EQ(h(pc::kAirspeed), f.ev.aero.state.airspeed);
  EXPECT_DOUBLE_EQ(h(pc::kAngleOfAttack), f.ev.aero.state.alpha);
  EXPECT_DOUBLE_EQ(h(pc::kSideslip), f.ev.aero.state.beta);
  EXPECT_DOUBLE_EQ(h(pc::kElevatorAngle), f.ev.aero.elevator_angle);
  EXPECT_DOUBLE_EQ(h(pc::kRudderAngle), f.ev.aero.rudder_angle);
  EXPECT_DOUBLE_EQ(h(pc::kAileronAngle), f.ev.aero.aileron_angle);
}

TEST(Ocp, TetherAngleStraightDownIsNinetyDegrees) {
  EXPECT_NEAR(tether_aircraft_angle(Vec3<double>(0.0, 0.0, 1e4)), kPi / 2.0, 1e-15);
  EXPECT_NEAR(tether_aircraft_angle(Vec3<double>(-1e4, 0.0, 1e-9)), kPi, 1e-9);
  EXPECT_NEAR(tether_lateral_angle(Vec3<double>(1.0, 1.0, 0.0)), kPi / 4.0, 1e-15);
}

TEST(Ocp, TableOneDefaults) {
  const PathBounds b;
  EXPECT_EQ(b.tether_force.lower, 1.31e3);
  EXPECT_EQ(b.tether_force.upper, 1.665e6);
  EXPECT_DOUBLE_EQ(b.angle_of_attack.lower, -15.0 * kPi / 180.0);
  EXPECT_DOUBLE_EQ(b.angle_of_attack.upper, 4.2 * kPi / 180.0);
  EXPECT_EQ(b.airspeed.lower, 10.0);
  EXPECT_EQ(b.airspeed.upper, 90.0);
  EXPECT_DOUBLE_EQ(b.tether_angle.lower, 2.0 * kPi / 180.0);
  EXPECT_DOUBLE_EQ(b.tether_angle.upper, 178.0 * kPi / 180.0);
  for (int i = 0; i < kNumPathConstraints; ++i) EXPECT_LT(b.row(i).lower, b.row(i).upper);
}

TEST(Ocp, ReelOutWindow) {
  PathBounds b;
  EXPECT_TRUE(reel_out_active(b, 0.0, 90.0));
  EXPECT_TRUE(reel_out_active(b, 54.0, 90.0));
  EXPECT_FALSE(reel_out_active(b, 54.3, 90.0));
  b.reel_out_enabled = false;
  EXPECT_FALSE(reel_out_active(b, 0.0, 90.0));
}

TEST(Ocp, YawBoundGrowsWithLoops) {
  const VariableBounds six = default_variable_bounds(PathShape::kCircle, 6);
  EXPECT_DOUBLE_EQ(six.state_lower(sx::kYaw), -(2.0 * 6 + 0.5) * kPi);
  EXPECT_DOUBLE_EQ(six.state_upper(sx::kYaw), kPi / 20.0);
  const VariableBounds lem = default_variable_bounds(PathShape::kLemniscate, 3);
  EXPECT_DOUBLE_EQ(lem.state_lower(sx::kYaw), -kPi);
  EXPECT_DOUBLE_EQ(lem.state_upper(sx::kYaw), kPi);
  EXPECT_TRUE(std::isinf(six.state_lower(sx::kWinchAngle)));
  for (int i = 0; i < kNumStates; ++i) EXPECT_LT(six.state_lower(i), six.state_upper(i));
}

TEST(Ocp, PeriodicityResidual) {
  Sampler s(46);
  const StateVec<double> x0 = pack(s.flying_state(ModelParams{}));
  EXPECT_EQ(periodicity_residual(x0, x0, 0.0).norm(), 0.0);
  StateVec<double> xn = x0;
  xn(sx::kYaw) -= 12.0 * kPi;
  EXPECT_NEAR(periodicity_residual(x0, xn, yaw_winding(PathShape::kCircle, 6, -1)).norm(), 0.0, 1e-12);
  StateVec<double> wa = x0;
  wa(sx::kWinchAngle) += 0.5;
  const StateVec<double> r = periodicity_residual(x0, wa, 0.0);
  EXPECT_DOUBLE_EQ(r(0), -0.5);
  EXPECT_EQ(r.tail<kNumStates - 1>().norm(), 0.0);
}

TEST(Ocp, PeriodicityInvariantUnderTimeShift) {
  // Synthetic periodic signal sampled over one period from two start times.
  auto signal = [](double t) {
    StateVec<double> x;
    for (int i = 0; i < kNumStates; ++i) x(i) = std::sin(2.0 * kPi * t / 15.0 + i) + 0.1 * i;
    x(sx::kYaw) = -2.0 * kPi * t / 15.0;
    return x;
  };
  const double winding = yaw_winding(PathShape::kCircle, 1, -1);
  for (double shift : {0.0, 1.3, 7.7}) {
    EXPECT_LT(periodicity_residual(signal(shift), signal(shift + 15.0), winding).norm(), 1e-12);
  }
}

TEST(Ocp, WindingSign) {
  EXPECT_DOUBLE_EQ(yaw_winding(PathShape::kCircle, 6, -1), -12.0 * kPi);
  EXPECT_DOUBLE_EQ(yaw_winding(PathShape::kCircle, 2, 1), 4.0 * kPi);
  EXPECT_EQ(yaw_winding(PathShape::kLemniscate, 3, -1), 0.0);
}

TEST(Ocp, InitialConstraint) {
  const Fixture f(47);
  const auto r3 = initial_constraint(f.x, f.z, std::nullopt, f.params);
  ASSERT_EQ(r3.size(), 3);
  EXPECT_LT(r3.norm(), 1e-8);
  const Vec3<double> anchor = spherical_to_position(f.x.position);
  const auto r6 = initial_constraint(f.x, f.z, std::optional<Vec3<double>>(anchor), f.params);
  ASSERT_EQ(r6.size(), 6);
  EXPECT_LT(r6.norm(), 1e-8);
}

}  // namespace
}  // namespace awes
