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
#include "awes/experiment.hpp"
#include "support/nlp_suite.hpp"
#include "support/testing.hpp"

namespace awes {
namespace {

class KnownSolution : public ::testing::TestWithParam<int> {};

TEST_P(KnownSolution, SolvesToTightKkt) {
  const testing::KnownProblem k = testing::known_problems()[GetParam()];
  const testing::SuiteOutcome o = testing::run_known(k);
  EXPECT_EQ(o.status, nlp::SolveStatus::kOptimal) << k.name;
  EXPECT_LT(o.kkt, 1e-8) << k.name;
  EXPECT_LT(o.solution_error, 1e-6) << k.name;
  EXPECT_LT(o.objective_error, 1e-6) << k.name;
  EXPECT_EQ(o.warm_status, nlp::SolveStatus::kOptimal) << k.name;
  EXPECT_LE(o.warm_iterations, 3) << k.name;
}

INSTANTIATE_TEST_SUITE_P(Nlp, KnownSolution, ::testing::Range(0, 6));

TEST(Nlp, FixedBarrierTraceIsConstant) {
  nlp::SolveStatus status;
  const std::vector<double> trace = testing::fixed_barrier_trace(1e-3, &status);
  EXPECT_EQ(status, nlp::SolveStatus::kOptimal);
  ASSERT_FALSE(trace.empty());
  for (double t : trace) EXPECT_EQ(t, 1e-3);
}

TEST(Nlp, BarrierDecreasesMonotonically) {
  const testing::KnownProblem k = testing::hs071();
  nlp::PrimalDualPoint start;
  start.x = k.start;
  const nlp::SolveResult r = nlp::solve_nlp(k.problem, start, nlp::SolverOptions{});
  ASSERT_EQ(r.report.status, nlp::SolveStatus::kOptimal);
  for (std::size_t i = 1; i < r.report.barrier_trace.size(); ++i) {
    EXPECT_LE(r.report.barrier_trace[i], r.report.barrier_trace[i - 1]);
  }
  // Termination is on the KKT error at tau_lower, which may come before
  // the barrier itself gets there.
  EXPECT_GE(r.report.barrier_trace.back(), 1e-8);
  EXPECT_LE(r.report.kkt_residual, 1e-6);
}

TEST(Nlp, IterationLimit) {
  const testing::KnownProblem k = testing::hs071();
  nlp::SolverOptions o;
  o.max_iterations = 2;
  nlp::PrimalDualPoint start;
  start.x = k.start;
  const nlp::SolveResult r = nlp::solve_nlp(k.problem, start, o);
  EXPECT_EQ(r.report.status, nlp::SolveStatus::kMaxIter);
  EXPECT_EQ(r.report.iterations, 2);
}

TEST(Nlp, InfeasibleProblemIsReported) {
  nlp::NlpProblem p(1, 1);
  p.add_element(nlp::make_element<1>({0}, true, {0}, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    testing::DynVec<S> out(2);
    out(0) = x(0) * x(0);
    out(1) = x(0) * x(0);
    return out;
  }));
  p.set_constraint_bounds(0, -2.0, -1.0);
  nlp::PrimalDualPoint start;
  start.x = Eigen::VectorXd::Constant(1, 1.0);
  nlp::SolverOptions o;
  o.max_iterations = 200;
  const nlp::SolveResult r = nlp::solve_nlp(p, start, o);
  EXPECT_NE(r.report.status, nlp::SolveStatus::kOptimal);
}

TEST(Nlp, RejectsBadBarrierBounds) {
  const testing::KnownProblem k = testing::box_projection();
  nlp::SolverOptions o;
  o.barrier_lower = 1e-2;
  o.barrier_upper = 1e-3;
  nlp::PrimalDualPoint start;
  start.x = k.start;
  EXPECT_THROW(nlp::solve_nlp(k.problem, start, o), Error);
}

TEST(Nlp, ElementSizeChecked) {
  EXPECT_THROW(nlp::make_element<2>({0}, true, {}, [](const auto& x) { return x; }), Error);
}

// Derivatives of the desk transcription: Jacobian against central
// differences of the constraints, Lagrangian Hessian against central
// differences of the Lagrangian gradient, on sampled columns.
class DeskDerivatives : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    setup_ = new ExperimentSetup(prepare_experiment(load_config(testing::config_path("desk_circle.json"))));
  }
  static void TearDownTestSuite() { delete setup_; }

  static Eigen::VectorXd point() {
    const Transcription& tr = setup_->transcription;
    testing::Sampler s(61);
    Eigen::VectorXd x = tr.to_scaled(setup_->guess);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += s.uniform(-0.01, 0.01);
    x.tail<kNumHomotopy>() = Eigen::Vector3d(0.6, 0.4, 0.3);
    return x;
  }

  static std::vector<int> columns() {
    std::vector<int> cols;
    const VariableLayout& lay = setup_->transcription.layout;
    for (int n : {0, 7, 30, 60}) {
      for (int i = 0; i < kNodeSize; ++i) cols.push_back(n * kNodeSize + i);
    }
    for (int i = 0; i < kNumHomotopy; ++i) cols.push_back(lay.homotopy() + i);
    return cols;
  }

  static ExperimentSetup* setup_;
};

ExperimentSetup* DeskDerivatives::setup_ = nullptr;

TEST_F(DeskDerivatives, JacobianMatchesFiniteDifferences) {
  const nlp::NlpProblem& p = setup_->transcription.problem;
  const Eigen::VectorXd x = point();
  const Eigen::MatrixXd jac = p.dense_jacobian(x);
  for (int k : columns()) {
    const double h = 1e-6;
    Eigen::VectorXd xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const Eigen::VectorXd fd = (p.constraints(xp) - p.constraints(xm)) / (2.0 * h);
    const double scale = std::max(1.0, jac.col(k).lpNorm<Eigen::Infinity>());
    EXPECT_LT((fd - jac.col(k)).lpNorm<Eigen::Infinity>() / scale, 1e-5) << "column " << k;
  }
}

TEST_F(DeskDerivatives, HessianMatchesFiniteDifferences) {
  const nlp::NlpProblem& p = setup_->transcription.problem;
  const Eigen::VectorXd x = point();
  testing::Sampler s(62);
  Eigen::VectorXd y(p.num_constraints());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = s.uniform(-1.0, 1.0);
  const double sigma = 0.7;
  auto lagrangian_gradient = [&](const Eigen::VectorXd& v) {
    double f;
    Eigen::VectorXd g, c, jv;
    p.first_order(v, f, g, c, jv);
    Eigen::VectorXd out = sigma * g;
    const auto& st = p.jacobian_structure();
    for (std::size_t e = 0; e < st.size(); ++e) out(st[e].col) += y(st[e].row) * jv(e);
    return out;
  };
  Eigen::VectorXd hv;
  p.lagrangian_hessian(x, sigma, y, hv);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(x.size(), x.size());
  const auto& hs = p.hessian_structure();
  for (std::size_t e = 0; e < hs.size(); ++e) {
    hess(hs[e].row, hs[e].col) += hv(e);
    if (hs[e].row != hs[e].col) hess(hs[e].col, hs[e].row) += hv(e);
  }
  for (int k : columns()) {
    const double h = 1e-5;
    Eigen::VectorXd xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    const Eigen::VectorXd fd = (lagrangian_gradient(xp) - lagrangian_gradient(xm)) / (2.0 * h);
    const double scale = std::max(1.0, hess.col(k).lpNorm<Eigen::Infinity>());
    EXPECT_LT((fd - hess.col(k)).lpNorm<Eigen::Infinity>() / scale, 1e-5) << "column " << k;
  }
}

}  // namespace
}  // namespace awes
