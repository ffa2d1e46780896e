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

// Element-structured nonlinear program
//
//   min  f(x)   s.t.  c_l <= c(x) <= c_u,  x_l <= x <= x_u.
//
// The objective and constraints are sums of small dense elements, each a
// function of a handful of variables, plus constant-coefficient linear
// terms. Elements are generic callables instantiated for double and for
// forward-mode duals, which gives exact Jacobians and Lagrangian Hessians.

#ifndef AWES_NLP_PROBLEM_HPP_
#define AWES_NLP_PROBLEM_HPP_

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "awes/dual.hpp"
#include "awes/errors.hpp"

namespace awes::nlp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One dense building block. Outputs are ordered as [objective term if
/// present, then one value per entry of `rows`].
struct Element {
  std::vector<int> variables;
  bool has_objective = false;
  std::vector<int> rows;
  std::function<void(const VectorXd&, VectorXd&)> evaluate;
  std::function<void(const VectorXd&, VectorXd&, MatrixXd&)> jacobian;
  // Hessian of sum_i weights(i) * output_i.
  std::function<void(const VectorXd&, const VectorXd&, MatrixXd&)> hessian;

  int num_outputs() const { return static_cast<int>(rows.size()) + (has_objective ? 1 : 0); }
};

namespace detail {

template <typename Scalar, int K>
using LocalVec = Eigen::Matrix<Scalar, K, 1>;

template <int K, typename F>
void eval_double(F& f, const VectorXd& x, VectorXd& out) {
  const LocalVec<double, K> xl = x;
  out = f(xl);
}

template <int K, typename F>
void eval_jacobian(F& f, const VectorXd& x, VectorXd& out, MatrixXd& jac) {
  using D = Dual<double, K>;
  LocalVec<D, K> xd;
  for (int i = 0; i < K; ++i) xd(i) = D::variable(x(i), i);
  const Eigen::Matrix<D, Eigen::Dynamic, 1> r = f(xd);
  out.resize(r.size());
  jac.resize(r.size(), K);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    out(i) = r(i).v;
    for (int k = 0; k < K; ++k) jac(i, k) = r(i).d[k];
  }
}

// Forward-over-forward: the inner dual carries all K first derivatives, the
// outer one a batch of B seed directions, so each pass yields B Hessian rows.
template <int K, int B, typename F>
void eval_hessian(F& f, const VectorXd& x, const VectorXd& w, MatrixXd& hess) {
  using Inner = Dual<double, K>;
  using Outer = Dual<Inner, B>;
  hess.setZero(K, K);
  for (int k0 = 0; k0 < K; k0 += B) {
    LocalVec<Outer, K> xd;
    for (int i = 0; i < K; ++i) {
      xd(i) = Outer(Inner::variable(x(i), i));
      const int b = i - k0;
      if (b >= 0 && b < B) xd(i).d[b] = Inner(1.0);
    }
    const Eigen::Matrix<Outer, Eigen::Dynamic, 1> r = f(xd);
    for (int b = 0; b < B && k0 + b < K; ++b) {
      for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (w(i) == 0.0) continue;
        const Inner& row = r(i).d[b];
        for (int l = 0; l < K; ++l) hess(k0 + b, l) += w(i) * row.d[l];
      }
    }
  }
}

}  // namespace detail

/// Wraps a generic callable `f(const Eigen::Matrix<S, K, 1>&) ->
/// Eigen::Matrix<S, Dynamic, 1>` as an element.
template <int K, int B = 4, typename F>
Element make_element(std::vector<int> variables, bool has_objective, std::vector<int> rows, F f) {
  if (static_cast<int>(variables.size()) != K) {
    throw Error(ErrorCode::kDimensionMismatch, "element expects " + std::to_string(K) + " variables");
  }
  Element e;
  e.variables = std::move(variables);
  e.has_objective = has_objective;
  e.rows = std::move(rows);
  e.evaluate = [f](const VectorXd& x, VectorXd& out) mutable { detail::eval_double<K>(f, x, out); };
  e.jacobian = [f](const VectorXd& x, VectorXd& out, MatrixXd& jac) mutable {
    detail::eval_jacobian<K>(f, x, out, jac);
  };
  e.hessian = [f](const VectorXd& x, const VectorXd& w, MatrixXd& hess) mutable {
    detail::eval_hessian<K, B>(f, x, w, hess);
  };
  return e;
}

struct LinearTerm {
  int row;  // -1 for the objective
  int variable;
  double coefficient;
};

/// Structural nonzero (row, col). Jacobian and Hessian values are returned
/// aligned with these lists; repeated coordinates are to be summed.
struct Coordinate {
  int row;
  int col;
};

class NlpProblem {
 public:
  NlpProblem() = default;
  NlpProblem(int num_variables, int num_constraints)
      : variable_lower_(VectorXd::Constant(num_variables, -kInf)),
        variable_upper_(VectorXd::Constant(num_variables, kInf)),
        constraint_lower_(VectorXd::Zero(num_constraints)),
        constraint_upper_(VectorXd::Zero(num_constraints)) {}

  int num_variables() const { return static_cast<int>(variable_lower_.size()); }
  int num_constraints() const { return static_cast<int>(constraint_lower_.size()); }

  void add_element(Element e);
  void add_linear(int row, int variable, double coefficient);
  void set_variable_bounds(int i, double lower, double upper);
  void set_constraint_bounds(int row, double lower, double upper);

  const VectorXd& variable_lower() const { return variable_lower_; }
  const VectorXd& variable_upper() const { return variable_upper_; }
  const VectorXd& constraint_lower() const { return constraint_lower_; }
  const VectorXd& constraint_upper() const { return constraint_upper_; }
  const std::vector<Element>& elements() const { return elements_; }

  double objective(const VectorXd& x) const;
  VectorXd constraints(const VectorXd& x) const;
  /// Objective and constraints in one sweep.
  void values(const VectorXd& x, double& f, VectorXd& c) const;

  /// Objective, gradient, constraints and Jacobian values in one sweep.
  void first_order(const VectorXd& x, double& f, VectorXd& grad, VectorXd& c, VectorXd& jac_values) const;
  /// Lower triangle (row >= col) of sigma * grad^2 f + sum_i y_i grad^2 c_i.
  void lagrangian_hessian(const VectorXd& x, double sigma, const VectorXd& y, VectorXd& hess_values) const;

  const std::vector<Coordinate>& jacobian_structure() const;
  const std::vector<Coordinate>& hessian_structure() const;

  /// Dense Jacobian, for diagnostics and tests.
  MatrixXd dense_jacobian(const VectorXd& x) const;

 private:
  void check_variable(int i) const;
  void check_row(int row) const;
  void build_structure() const;

  VectorXd variable_lower_;
  VectorXd variable_upper_;
  VectorXd constraint_lower_;
  VectorXd constraint_upper_;
  std::vector<Element> elements_;
  std::vector<LinearTerm> linear_;

  mutable bool structure_ready_ = false;
  mutable std::vector<Coordinate> jacobian_structure_;
  mutable std::vector<Coordinate> hessian_structure_;
  // Per element: local (a, b) pairs kept in the lower triangle.
  mutable std::vector<std::vector<std::pair<int, int>>> hessian_local_;
};

}  // namespace awes::nlp

#endif  // AWES_NLP_PROBLEM_HPP_
