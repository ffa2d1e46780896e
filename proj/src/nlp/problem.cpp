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

#include "awes/nlp/problem.hpp"

namespace awes::nlp {

void NlpProblem::check_variable(int i) const {
  if (i < 0 || i >= num_variables()) {
    throw Error(ErrorCode::kDimensionMismatch, "variable index " + std::to_string(i) + " out of range");
  }
}

void NlpProblem::check_row(int row) const {
  if (row < 0 || row >= num_constraints()) {
    throw Error(ErrorCode::kDimensionMismatch, "constraint row " + std::to_string(row) + " out of range");
  }
}

void NlpProblem::add_element(Element e) {
  for (int v : e.variables) check_variable(v);
  for (int r : e.rows) check_row(r);
  elements_.push_back(std::move(e));
  structure_ready_ = false;
}

void NlpProblem::add_linear(int row, int variable, double coefficient) {
  check_variable(variable);
  if (row != -1) check_row(row);
  linear_.push_back({row, variable, coefficient});
  structure_ready_ = false;
}

void NlpProblem::set_variable_bounds(int i, double lower, double upper) {
  check_variable(i);
  if (lower > upper) throw Error(ErrorCode::kConfigError, "variable bounds are crossed");
  variable_lower_(i) = lower;
  variable_upper_(i) = upper;
}

void NlpProblem::set_constraint_bounds(int row, double lower, double upper) {
  check_row(row);
  if (lower > upper) throw Error(ErrorCode::kConfigError, "constraint bounds are crossed");
  constraint_lower_(row) = lower;
  constraint_upper_(row) = upper;
}

void NlpProblem::build_structure() const {
  if (structure_ready_) return;
  jacobian_structure_.clear();
  hessian_structure_.clear();
  hessian_local_.assign(elements_.size(), {});
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const Element& el = elements_[e];
    for (int r : el.rows) {
      for (int v : el.variables) jacobian_structure_.push_back({r, v});
    }
    const int k = static_cast<int>(el.variables.size());
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (el.variables[a] >= el.variables[b]) {
          hessian_local_[e].emplace_back(a, b);
          hessian_structure_.push_back({el.variables[a], el.variables[b]});
        }
      }
    }
  }
  for (const LinearTerm& t : linear_) {
    if (t.row >= 0) jacobian_structure_.push_back({t.row, t.variable});
  }
  structure_ready_ = true;
}

const std::vector<Coordinate>& NlpProblem::jacobian_structure() const {
  build_structure();
  return jacobian_structure_;
}

const std::vector<Coordinate>& NlpProblem::hessian_structure() const {
  build_structure();
  return hessian_structure_;
}

namespace {

VectorXd gather(const VectorXd& x, const std::vector<int>& idx) {
  VectorXd local(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) local(i) = x(idx[i]);
  return local;
}

}  // namespace

double NlpProblem::objective(const VectorXd& x) const {
  double f = 0.0;
  VectorXd out;
  for (const Element& el : elements_) {
    if (!el.has_objective) continue;
    el.evaluate(gather(x, el.variables), out);
    f += out(0);
  }
  for (const LinearTerm& t : linear_) {
    if (t.row < 0) f += t.coefficient * x(t.variable);
  }
  return f;
}

VectorXd NlpProblem::constraints(const VectorXd& x) const {
  VectorXd c = VectorXd::Zero(num_constraints());
  VectorXd out;
  for (const Element& el : elements_) {
    if (el.rows.empty()) continue;
    el.evaluate(gather(x, el.variables), out);
    const int off = el.has_objective ? 1 : 0;
    for (std::size_t i = 0; i < el.rows.size(); ++i) c(el.rows[i]) += out(off + static_cast<int>(i));
  }
  for (const LinearTerm& t : linear_) {
    if (t.row >= 0) c(t.row) += t.coefficient * x(t.variable);
  }
  return c;
}

void NlpProblem::values(const VectorXd& x, double& f, VectorXd& c) const {
  f = 0.0;
  c.setZero(num_constraints());
  VectorXd out;
  for (const Element& el : elements_) {
    el.evaluate(gather(x, el.variables), out);
    int off = 0;
    if (el.has_objective) {
      f += out(0);
      off = 1;
    }
    for (std::size_t i = 0; i < el.rows.size(); ++i) c(el.rows[i]) += out(off + static_cast<int>(i));
  }
  for (const LinearTerm& t : linear_) {
    if (t.row < 0) {
      f += t.coefficient * x(t.variable);
    } else {
      c(t.row) += t.coefficient * x(t.variable);
    }
  }
}

void NlpProblem::first_order(const VectorXd& x, double& f, VectorXd& grad, VectorXd& c,
                             VectorXd& jac_values) const {
  build_structure();
  f = 0.0;
  grad.setZero(num_variables());
  c.setZero(num_constraints());
  jac_values.resize(static_cast<Eigen::Index>(jacobian_structure_.size()));
  VectorXd out;
  MatrixXd jac;
  Eigen::Index pos = 0;
  for (const Element& el : elements_) {
    el.jacobian(gather(x, el.variables), out, jac);
    const int k = static_cast<int>(el.variables.size());
    int off = 0;
    if (el.has_objective) {
      f += out(0);
      for (int a = 0; a < k; ++a) grad(el.variables[a]) += jac(0, a);
      off = 1;
    }
    for (std::size_t i = 0; i < el.rows.size(); ++i) {
      const int oi = off + static_cast<int>(i);
      c(el.rows[i]) += out(oi);
      for (int a = 0; a < k; ++a) jac_values(pos++) = jac(oi, a);
    }
  }
  for (const LinearTerm& t : linear_) {
    if (t.row < 0) {
      f += t.coefficient * x(t.variable);
      grad(t.variable) += t.coefficient;
    } else {
      c(t.row) += t.coefficient * x(t.variable);
      jac_values(pos++) = t.coefficient;
    }
  }
}

void NlpProblem::lagrangian_hessian(const VectorXd& x, double sigma, const VectorXd& y,
                                    VectorXd& hess_values) const {
  build_structure();
  hess_values.resize(static_cast<Eigen::Index>(hessian_structure_.size()));
  MatrixXd h;
  Eigen::Index pos = 0;
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const Element& el = elements_[e];
    VectorXd w(el.num_outputs());
    int off = 0;
    if (el.has_objective) {
      w(0) = sigma;
      off = 1;
    }
    for (std::size_t i = 0; i < el.rows.size(); ++i) w(off + static_cast<int>(i)) = y(el.rows[i]);
    const auto& pairs = hessian_local_[e];
    if (w.cwiseAbs().maxCoeff() == 0.0) {
      for (std::size_t p = 0; p < pairs.size(); ++p) hess_values(pos++) = 0.0;
      continue;
    }
    el.hessian(gather(x, el.variables), w, h);
    for (const auto& [a, b] : pairs) hess_values(pos++) = h(a, b);
  }
}

MatrixXd NlpProblem::dense_jacobian(const VectorXd& x) const {
  double f = 0.0;
  VectorXd g, c, vals;
  first_order(x, f, g, c, vals);
  MatrixXd jac = MatrixXd::Zero(num_constraints(), num_variables());
  const auto& s = jacobian_structure();
  for (std::size_t i = 0; i < s.size(); ++i) jac(s[i].row, s[i].col) += vals(static_cast<Eigen::Index>(i));
  return jac;
}

}  // namespace awes::nlp
