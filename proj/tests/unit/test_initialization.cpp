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

#include "awes/config.hpp"
#include "awes/errors.hpp"
#include "awes/initialization.hpp"
#include "awes/system.hpp"
#include "awes/transcription.hpp"
#include "support/testing.hpp"

namespace awes {
namespace {

PathSpec flat_spec(PathShape shape) {
  PathSpec s;
  s.shape = shape;
  s.phase = 0.0;
  s.elevation = 0.0;
  s.loops = shape == PathShape::kCircle ? 6 : 3;
  s.duration = 90.0;
  return s;
}

TEST(Path, CircleStartsAtTop) {
  const PathSpec s = flat_spec(PathShape::kCircle);
  EXPECT_LT((path_position(s, 0.0) - (s.center + s.radius * Vec3<double>(0.0, 0.0, 1.0))).norm(), 1e-12);
}

TEST(Path, LemniscateStartsAtCentre) {
  const PathSpec s = flat_spec(PathShape::kLemniscate);
  EXPECT_LT((path_position(s, 0.0) - s.center).norm(), 1e-12);
}

TEST(Path, PeriodicOverOneLoop) {
  for (PathShape shape : {PathShape::kCircle, PathShape::kLemniscate}) {
    PathSpec s = flat_spec(shape);
    s.phase = 0.7;
    s.elevation = 0.6;
    const double period = s.duration / s.loops;
    testing::Sampler rng(71);
    for (int i = 0; i < 20; ++i) {
      const double t = rng.uniform(0.0, s.duration - period);
      EXPECT_LT((path_position(s, t + period) - path_position(s, t)).norm(), 1e-9);
    }
  }
}

TEST(Path, CircleKeepsItsRadius) {
  PathSpec s = flat_spec(PathShape::kCircle);
  s.elevation = 0.8;
  const Vec3<double> centre = elementary_rotation(Axis::kY, s.elevation) * s.center;
  for (double t : {0.0, 1.1, 7.3, 14.9}) EXPECT_NEAR((path_position(s, t) - centre).norm(), s.radius, 1e-9);
}

TEST(Path, VelocityIsTheDerivative) {
  for (PathShape shape : {PathShape::kCircle, PathShape::kLemniscate}) {
    PathSpec s = flat_spec(shape);
    s.phase = 4.5;
    s.elevation = 50.0 * kPi / 180.0;
    for (double t : {0.0, 2.0, 33.3, 80.0}) {
      const double h = 1e-5;
      const Vec3<double> fd = (path_position(s, t + h) - path_position(s, t - h)) / (2.0 * h);
      EXPECT_LT((fd - path_velocity(s, t)).norm(), 1e-6 * path_velocity(s, t).norm());
    }
  }
}

TEST(Path, Validation) {
  PathSpec s;
  s.loops = 0;
  EXPECT_THROW(validate(s), Error);
  s = PathSpec{};
  s.duration = -1.0;
  EXPECT_THROW(validate(s), Error);
  s = PathSpec{};
  s.radius = 0.0;
  EXPECT_THROW(validate(s), Error);
  s = PathSpec{};
  s.direction = 0;
  EXPECT_THROW(validate(s), Error);
}

TEST(PathAttitude, BodyAxesFromVelocityAndPosition) {
  testing::Sampler rng(72);
  for (int i = 0; i < 200; ++i) {
    const Vec3<double> p = rng.vec(-300.0, 300.0) + Vec3<double>(0.0, 0.0, -400.0);
    const Vec3<double> v = rng.vec(-40.0, 40.0);
    const EulerAngles<double> q = path_attitude(p, v);
    const Mat3<double> r = attitude_matrix(q);
    EXPECT_LT((r * r.transpose() - Mat3<double>::Identity()).norm(), 1e-12);
    const Vec3<double> ex = r.row(0).transpose();
    const Vec3<double> ez = r.row(2).transpose();
    // x along the velocity, z in the plane of x and -p, on the -p side.
    EXPECT_LT((ex - v.normalized()).norm(), 1e-9);
    EXPECT_LT(std::abs(ez.dot(v.cross(p).normalized())), 1e-9);
    EXPECT_GT(ez.dot(-p), 0.0);
    EXPECT_GT(q.theta, -kPi / 2.0);
    EXPECT_LT(q.theta, kPi / 2.0);
  }
}

TEST(PathAttitude, TangentToTheCircle) {
  PathSpec s = flat_spec(PathShape::kCircle);
  s.elevation = 0.5;
  for (double t : {0.0, 3.0, 9.0}) {
    const Vec3<double> p = path_position(s, t);
    const Vec3<double> v = path_velocity(s, t);
    const Mat3<double> r = attitude_matrix(path_attitude(p, v));
    EXPECT_NEAR(r.row(0).dot(v.normalized()), 1.0, 1e-12);
  }
}

TEST(PathAttitude, DegenerateInputs) {
  EXPECT_THROW(path_attitude(Vec3<double>(0.0, 0.0, 100.0), Vec3<double>(0.0, 0.0, 5.0)), Error);
  EXPECT_THROW(path_attitude(Vec3<double>(0.0, 0.0, 100.0), Vec3<double>::Zero()), Error);
}

TEST(WinchInit, Examples) {
  const Vec3<double> p = Vec3<double>(0.0, 240.0, 320.0);  // |p| = 400
  EXPECT_DOUBLE_EQ(winch_init(p, Vec3<double>(5.0, 0.0, 0.0), 1.0).angle, 400.0);
  EXPECT_NEAR(winch_init(p, Vec3<double>(7.0, 4.0, -3.0), 1.0).rate, 0.0, 1e-14);
  EXPECT_NEAR(winch_init(p, 5.0 * p.normalized(), 1.0).rate, 5.0, 1e-14);
  EXPECT_NEAR(winch_init(p, 5.0 * p.normalized(), 0.5).rate, 10.0, 1e-14);
  EXPECT_THROW(winch_init(p, p, 0.0), Error);
}

void expect_inside(const std::vector<NodeVariables<double>>& guess, const VariableBounds& b) {
  for (std::size_t n = 0; n < guess.size(); ++n) {
    const StateVec<double> x = pack(guess[n].x);
    for (int i = 0; i < kNumStates; ++i) {
      EXPECT_GE(x(i), b.state_lower(i)) << "node " << n << " state " << i;
      EXPECT_LE(x(i), b.state_upper(i)) << "node " << n << " state " << i;
    }
    const Vec3<double> z = pack(guess[n].z);
    for (int i = 0; i < kNumAlgebraic; ++i) {
      EXPECT_GE(z(i), b.algebraic_lower(i)) << "node " << n << " algebraic " << i;
      EXPECT_LE(z(i), b.algebraic_upper(i)) << "node " << n << " algebraic " << i;
    }
  }
}

TEST(ConsistentGuess, DefaultCircleInsideStateBounds) {
  const ExperimentConfig cfg = load_config(testing::config_path("paper_defaults.json"));
  const PathSpec path = cfg.resolved_path();
  ASSERT_EQ(path.loops, 6);
  ASSERT_EQ(path.duration, 90.0);
  const auto guess = consistent_guess(path, cfg.params, make_mesh(cfg.intervals, cfg.horizon));
  ASSERT_EQ(guess.size(), 271u);
  expect_inside(guess, cfg.resolved_variable_bounds());
  EXPECT_NEAR(guess.back().x.attitude.psi - guess.front().x.attitude.psi, -12.0 * kPi, 1e-9);
}

TEST(ConsistentGuess, DefaultLemniscateBuilds) {
  ExperimentConfig cfg = load_config(testing::config_path("paper_defaults.json"));
  cfg.path.shape = PathShape::kLemniscate;
  const PathSpec path = cfg.resolved_path();
  ASSERT_EQ(path.loops, 3);
  const auto guess = consistent_guess(path, cfg.params, make_mesh(cfg.intervals, cfg.horizon));
  ASSERT_EQ(guess.size(), 271u);
  EXPECT_NEAR(guess.back().x.attitude.psi, guess.front().x.attitude.psi, 1e-9);
  for (const auto& n : guess) {
    EXPECT_LT((tether_residual(n.x, n.z, cfg.params)).norm(), 1e-8);
  }
}

TEST(ConsistentGuess, DiscreteDynamicsHoldWithFictitiousInputs) {
  const ExperimentConfig cfg = load_config(testing::config_path("desk_circle.json"));
  const Mesh mesh = make_mesh(cfg.intervals, cfg.horizon);
  const auto guess = consistent_guess(cfg.resolved_path(), cfg.params, mesh);
  for (int n = 0; n < mesh.intervals; ++n) {
    const auto& next = guess[n + 1];
    EXPECT_LT(tether_residual(next.x, next.z, cfg.params).norm(), 1e-8);
    const StateVec<double> f = dae_rhs(next.x, guess[n].u, next.z, HomotopyVec<double>(1.0, 1.0, 1.0), cfg.params);
    const StateVec<double> defect = pack(next.x) - pack(guess[n].x) - mesh.step() * f;
    EXPECT_LT(defect.cwiseAbs().maxCoeff(), 1e-6) << "interval " << n;
    EXPECT_EQ(guess[n].u.aileron, 0.0);
    EXPECT_EQ(guess[n].u.elevator, 0.0);
    EXPECT_EQ(guess[n].u.rudder, 0.0);
  }
}

}  // namespace
}  // namespace awes
