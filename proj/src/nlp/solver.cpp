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

#include "awes/nlp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "awes/errors.hpp"

namespace awes::nlp {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kSigmaSafeguard = 1e10;
constexpr double kScaleThreshold = 100.0;

struct Trial {
  VectorXd v;
  double objective = 0.0;
  VectorXd residual;
  double theta = 0.0;
  double phi = 0.0;
};

struct OptimalityErrors {
  double dual = 0.0;
  double primal = 0.0;
  double complementarity = 0.0;
  double total = 0.0;
};

class InteriorPoint {
 public:
  InteriorPoint(const NlpProblem& problem, const SolverOptions& options)
      : problem_(problem), options_(options) {}

  SolveResult run(const PrimalDualPoint& start);

 private:
  void classify();
  void build_pattern();
  void initialize(const PrimalDualPoint& start);

  VectorXd full_x(const VectorXd& v) const;
  bool evaluate_values(const VectorXd& v, double& f, VectorXd& residual) const;
  void evaluate_first_order();
  void evaluate_hessian();

  VectorXd jacobian_transpose_times(const VectorXd& y) const;
  VectorXd lower_distance(const VectorXd& v) const;
  VectorXd upper_distance(const VectorXd& v) const;
  double barrier_function(double f, const VectorXd& v) const;
  VectorXd barrier_gradient(const VectorXd& v) const;
  OptimalityErrors optimality(double mu) const;

  bool factorize(const VectorXd& diag_v, bool with_hessian, double dc);
  VectorXd solve(const VectorXd& rhs, double dc_factor, double dc_true) const;
  double max_step(const VectorXd& v, const VectorXd& dv, double tau) const;

  bool compute_direction(VectorXd& dv, VectorXd& dy, VectorXd& dzl, VectorXd& dzu, double& dw_used);
  bool line_search(const VectorXd& dv, const VectorXd& dy, const VectorXd& dzl, const VectorXd& dzu,
                   IterationLog& log);
  bool restoration(IterationLog& log);
  bool acceptable_to_filter(double theta, double phi) const;
  void augment_filter(double theta, double phi);
  void reset_filter();
  void safeguard_bound_multipliers();
  PrimalDualPoint export_point() const;

  const NlpProblem& problem_;
  const SolverOptions& options_;

  int n_ = 0, m_ = 0, nf_ = 0, ni_ = 0, nv_ = 0;
  std::vector<int> free_map_;   // variable -> internal index or -1
  std::vector<int> free_vars_;  // internal -> variable
  std::vector<int> row_slack_;  // row -> slack index or -1
  std::vector<int> slack_rows_;
  VectorXd x_base_;
  VectorXd lower_, upper_;
  std::vector<char> has_lower_, has_upper_;
  int num_bounds_ = 0;

  // KKT storage with precomputed value slots.
  SparseMatrix kkt_;
  std::vector<int> jac_col_;   // internal column per Jacobian entry, -1 if fixed
  std::vector<int> jac_slot_;  // -1 if fixed
  std::vector<int> hess_slot_;
  std::vector<int> diag_v_slot_, diag_y_slot_, slack_slot_;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool pattern_analyzed_ = false;

  // Iterate.
  VectorXd v_, y_, zl_, zu_;
  double mu_ = 0.0;
  double f_ = 0.0;
  VectorXd grad_full_, c_full_, residual_, jac_vals_, hess_vals_, grad_v_;

  std::vector<std::pair<double, double>> filter_;
  double theta_max_ = 0.0, theta_min_ = 0.0;
  double dw_last_ = 0.0;
  double dc_true_ = 0.0;
};

void InteriorPoint::classify() {
  n_ = problem_.num_variables();
  m_ = problem_.num_constraints();
  const VectorXd& xl = problem_.variable_lower();
  const VectorXd& xu = problem_.variable_upper();
  const VectorXd& cl = problem_.constraint_lower();
  const VectorXd& cu = problem_.constraint_upper();
  free_map_.assign(n_, -1);
  free_vars_.clear();
  for (int i = 0; i < n_; ++i) {
    if (xl(i) < xu(i)) {
      free_map_[i] = static_cast<int>(free_vars_.size());
      free_vars_.push_back(i);
    }
  }
  nf_ = static_cast<int>(free_vars_.size());
  row_slack_.assign(m_, -1);
  slack_rows_.clear();
  for (int r = 0; r < m_; ++r) {
    if (cl(r) < cu(r)) {
      row_slack_[r] = static_cast<int>(slack_rows_.size());
      slack_rows_.push_back(r);
    }
  }
  ni_ = static_cast<int>(slack_rows_.size());
  nv_ = nf_ + ni_;
  lower_.resize(nv_);
  upper_.resize(nv_);
  for (int k = 0; k < nf_; ++k) {
    lower_(k) = xl(free_vars_[k]);
    upper_(k) = xu(free_vars_[k]);
  }
  for (int k = 0; k < ni_; ++k) {
    lower_(nf_ + k) = cl(slack_rows_[k]);
    upper_(nf_ + k) = cu(slack_rows_[k]);
  }
  has_lower_.assign(nv_, 0);
  has_upper_.assign(nv_, 0);
  num_bounds_ = 0;
  for (int k = 0; k < nv_; ++k) {
    has_lower_[k] = std::isfinite(lower_(k));
    has_upper_[k] = std::isfinite(upper_(k));
    num_bounds_ += has_lower_[k] + has_upper_[k];
  }
}

void InteriorPoint::build_pattern() {
  const int dim = nv_ + m_;
  const auto& js = problem_.jacobian_structure();
  const auto& hs = problem_.hessian_structure();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(js.size() + hs.size() + static_cast<std::size_t>(dim + ni_));
  for (int i = 0; i < dim; ++i) trip.emplace_back(i, i, 0.0);
  for (const Coordinate& c : hs) {
    const int a = free_map_[c.row];
    const int b = free_map_[c.col];
    if (a >= 0 && b >= 0) trip.emplace_back(a, b, 0.0);
  }
  for (const Coordinate& c : js) {
    const int b = free_map_[c.col];
    if (b >= 0) trip.emplace_back(nv_ + c.row, b, 0.0);
  }
  for (int k = 0; k < ni_; ++k) trip.emplace_back(nv_ + slack_rows_[k], nf_ + k, 0.0);
  kkt_.resize(dim, dim);
  kkt_.setFromTriplets(trip.begin(), trip.end());
  kkt_.makeCompressed();

  auto slot = [this](int row, int col) {
    const int* inner = kkt_.innerIndexPtr();
    const int begin = kkt_.outerIndexPtr()[col];
    const int end = kkt_.outerIndexPtr()[col + 1];
    const int* it = std::lower_bound(inner + begin, inner + end, row);
    return static_cast<int>(it - inner);
  };
  diag_v_slot_.resize(nv_);
  for (int i = 0; i < nv_; ++i) diag_v_slot_[i] = slot(i, i);
  diag_y_slot_.resize(m_);
  for (int r = 0; r < m_; ++r) diag_y_slot_[r] = slot(nv_ + r, nv_ + r);
  slack_slot_.resize(ni_);
  for (int k = 0; k < ni_; ++k) slack_slot_[k] = slot(nv_ + slack_rows_[k], nf_ + k);
  hess_slot_.resize(hs.size());
  for (std::size_t e = 0; e < hs.size(); ++e) {
    const int a = free_map_[hs[e].row];
    const int b = free_map_[hs[e].col];
    hess_slot_[e] = (a >= 0 && b >= 0) ? slot(a, b) : -1;
  }
  jac_col_.resize(js.size());
  jac_slot_.resize(js.size());
  for (std::size_t e = 0; e < js.size(); ++e) {
    const int b = free_map_[js[e].col];
    jac_col_[e] = b;
    jac_slot_[e] = b >= 0 ? slot(nv_ + js[e].row, b) : -1;
  }
  pattern_analyzed_ = false;
}

VectorXd InteriorPoint::full_x(const VectorXd& v) const {
  VectorXd x = x_base_;
  for (int k = 0; k < nf_; ++k) x(free_vars_[k]) = v(k);
  return x;
}

bool InteriorPoint::evaluate_values(const VectorXd& v, double& f, VectorXd& residual) const {
  VectorXd c;
  try {
    problem_.values(full_x(v), f, c);
  } catch (const Error&) {
    return false;
  }
  if (!std::isfinite(f) || !c.allFinite()) return false;
  residual = c;
  for (int r = 0; r < m_; ++r) {
    const int k = row_slack_[r];
    residual(r) -= k >= 0 ? v(nf_ + k) : problem_.constraint_lower()(r);
  }
  return true;
}

void InteriorPoint::evaluate_first_order() {
  problem_.first_order(full_x(v_), f_, grad_full_, c_full_, jac_vals_);
  if (!std::isfinite(f_) || !c_full_.allFinite() || !grad_full_.allFinite() || !jac_vals_.allFinite()) {
    throw Error(ErrorCode::kLinearAlgebraFailure, "non-finite derivatives at the current iterate");
  }
  residual_ = c_full_;
  for (int r = 0; r < m_; ++r) {
    const int k = row_slack_[r];
    residual_(r) -= k >= 0 ? v_(nf_ + k) : problem_.constraint_lower()(r);
  }
  grad_v_ = VectorXd::Zero(nv_);
  for (int k = 0; k < nf_; ++k) grad_v_(k) = grad_full_(free_vars_[k]);
}

void InteriorPoint::evaluate_hessian() { problem_.lagrangian_hessian(full_x(v_), 1.0, y_, hess_vals_); }

VectorXd InteriorPoint::jacobian_transpose_times(const VectorXd& y) const {
  VectorXd out = VectorXd::Zero(nv_);
  const auto& js = problem_.jacobian_structure();
  for (std::size_t e = 0; e < js.size(); ++e) {
    if (jac_col_[e] >= 0) out(jac_col_[e]) += jac_vals_(static_cast<Eigen::Index>(e)) * y(js[e].row);
  }
  for (int k = 0; k < ni_; ++k) out(nf_ + k) -= y(slack_rows_[k]);
  return out;
}

VectorXd InteriorPoint::lower_distance(const VectorXd& v) const {
  VectorXd d = VectorXd::Ones(nv_);
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i]) d(i) = v(i) - lower_(i);
  }
  return d;
}

VectorXd InteriorPoint::upper_distance(const VectorXd& v) const {
  VectorXd d = VectorXd::Ones(nv_);
  for (int i = 0; i < nv_; ++i) {
    if (has_upper_[i]) d(i) = upper_(i) - v(i);
  }
  return d;
}

double InteriorPoint::barrier_function(double f, const VectorXd& v) const {
  double phi = f;
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i]) phi -= mu_ * std::log(v(i) - lower_(i));
    if (has_upper_[i]) phi -= mu_ * std::log(upper_(i) - v(i));
  }
  return phi;
}

VectorXd InteriorPoint::barrier_gradient(const VectorXd& v) const {
  VectorXd g = grad_v_;
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i]) g(i) -= mu_ / (v(i) - lower_(i));
    if (has_upper_[i]) g(i) += mu_ / (upper_(i) - v(i));
  }
  return g;
}

OptimalityErrors InteriorPoint::optimality(double mu) const {
  OptimalityErrors e;
  const VectorXd dual = grad_v_ + jacobian_transpose_times(y_) - zl_ + zu_;
  const double z_sum = zl_.lpNorm<1>() + zu_.lpNorm<1>();
  const double sd =
      std::max(kScaleThreshold, (y_.lpNorm<1>() + z_sum) / std::max(1, m_ + num_bounds_)) / kScaleThreshold;
  const double sc = std::max(kScaleThreshold, z_sum / std::max(1, num_bounds_)) / kScaleThreshold;
  e.dual = nv_ > 0 ? dual.lpNorm<Eigen::Infinity>() : 0.0;
  e.primal = m_ > 0 ? residual_.lpNorm<Eigen::Infinity>() : 0.0;
  double comp = 0.0;
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i]) comp = std::max(comp, std::abs(zl_(i) * (v_(i) - lower_(i)) - mu));
    if (has_upper_[i]) comp = std::max(comp, std::abs(zu_(i) * (upper_(i) - v_(i)) - mu));
  }
  e.complementarity = comp;
  e.total = std::max({e.dual / sd, e.primal, comp / sc});
  return e;
}

bool InteriorPoint::factorize(const VectorXd& diag_v, bool with_hessian, double dc) {
  double* val = kkt_.valuePtr();
  std::fill(val, val + kkt_.nonZeros(), 0.0);
  if (with_hessian) {
    for (std::size_t e = 0; e < hess_slot_.size(); ++e) {
      if (hess_slot_[e] >= 0) val[hess_slot_[e]] += hess_vals_(static_cast<Eigen::Index>(e));
    }
  }
  for (int i = 0; i < nv_; ++i) val[diag_v_slot_[i]] += diag_v(i);
  for (std::size_t e = 0; e < jac_slot_.size(); ++e) {
    if (jac_slot_[e] >= 0) val[jac_slot_[e]] += jac_vals_(static_cast<Eigen::Index>(e));
  }
  for (int k = 0; k < ni_; ++k) val[slack_slot_[k]] -= 1.0;
  for (int r = 0; r < m_; ++r) val[diag_y_slot_[r]] -= dc;
  if (!pattern_analyzed_) {
    ldlt_.analyzePattern(kkt_);
    pattern_analyzed_ = true;
  }
  ldlt_.factorize(kkt_);
  if (ldlt_.info() != Eigen::Success) return false;
  const VectorXd& d = ldlt_.vectorD();
  int pos = 0, neg = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d(i))) return false;
    if (d(i) > 0.0) ++pos;
    else if (d(i) < 0.0) ++neg;
  }
  return pos == nv_ && neg == m_;
}

VectorXd InteriorPoint::solve(const VectorXd& rhs, double dc_factor, double dc_true) const {
  VectorXd sol = ldlt_.solve(rhs);
  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < options_.refinement_steps; ++it) {
    VectorXd res = rhs - kkt_.selfadjointView<Eigen::Lower>() * sol;
    res.tail(m_) -= (dc_factor - dc_true) * sol.tail(m_);
    if (!res.allFinite() || res.lpNorm<Eigen::Infinity>() <= 1e-15 * scale) break;
    sol += ldlt_.solve(res);
  }
  return sol;
}

double InteriorPoint::max_step(const VectorXd& v, const VectorXd& dv, double tau) const {
  double alpha = 1.0;
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i] && dv(i) < 0.0) alpha = std::min(alpha, -tau * (v(i) - lower_(i)) / dv(i));
    if (has_upper_[i] && dv(i) > 0.0) alpha = std::min(alpha, tau * (upper_(i) - v(i)) / dv(i));
  }
  return alpha;
}

bool InteriorPoint::compute_direction(VectorXd& dv, VectorXd& dy, VectorXd& dzl, VectorXd& dzu,
                                      double& dw_used) {
  const VectorXd sl = lower_distance(v_);
  const VectorXd su = upper_distance(v_);
  VectorXd sigma = VectorXd::Zero(nv_);
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i]) sigma(i) += zl_(i) / sl(i);
    if (has_upper_[i]) sigma(i) += zu_(i) / su(i);
  }
  const double dc_min = options_.constraint_regularization;
  double dw = 0.0;
  double dc_true = dc_true_;
  bool ok = false;
  for (int attempt = 0; attempt < 80; ++attempt) {
    const double dc = std::max(dc_min, dc_true);
    ok = factorize((sigma.array() + dw).matrix(), true, dc);
    if (ok) break;
    if (ldlt_.info() != Eigen::Success && dc_true == 0.0) {
      dc_true = 1e-8 * std::pow(mu_, 0.25);
      continue;
    }
    if (dw == 0.0) {
      dw = dw_last_ == 0.0 ? 1e-4 : std::max(1e-20, dw_last_ / 3.0);
    } else {
      dw *= dw_last_ == 0.0 ? 100.0 : 8.0;
    }
    if (dw > 1e40) break;
  }
  if (!ok) return false;
  if (dw > 0.0) dw_last_ = dw;
  dw_used = dw;

  VectorXd rhs(nv_ + m_);
  rhs.head(nv_) = -(barrier_gradient(v_) + jacobian_transpose_times(y_));
  rhs.tail(m_) = -residual_;
  const VectorXd sol = solve(rhs, std::max(dc_min, dc_true), dc_true);
  dv = sol.head(nv_);
  dy = sol.tail(m_);
  dzl = VectorXd::Zero(nv_);
  dzu = VectorXd::Zero(nv_);
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i]) dzl(i) = mu_ / sl(i) - zl_(i) - zl_(i) / sl(i) * dv(i);
    if (has_upper_[i]) dzu(i) = mu_ / su(i) - zu_(i) + zu_(i) / su(i) * dv(i);
  }
  return dv.allFinite() && dy.allFinite();
}

bool InteriorPoint::acceptable_to_filter(double theta, double phi) const {
  if (theta > theta_max_) return false;
  for (const auto& [ft, fp] : filter_) {
    if (theta >= ft && phi >= fp) return false;
  }
  return true;
}

void InteriorPoint::augment_filter(double theta, double phi) {
  const double t = (1.0 - options_.filter_gamma_theta) * theta;
  const double p = phi - options_.filter_gamma_phi * theta;
  std::vector<std::pair<double, double>> kept;
  for (const auto& e : filter_) {
    if (!(e.first >= t && e.second >= p)) kept.push_back(e);
  }
  kept.emplace_back(t, p);
  filter_ = std::move(kept);
}

void InteriorPoint::reset_filter() { filter_.clear(); }

void InteriorPoint::safeguard_bound_multipliers() {
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i]) {
      const double s = v_(i) - lower_(i);
      zl_(i) = std::clamp(zl_(i), mu_ / (kSigmaSafeguard * s), kSigmaSafeguard * mu_ / s);
    }
    if (has_upper_[i]) {
      const double s = upper_(i) - v_(i);
      zu_(i) = std::clamp(zu_(i), mu_ / (kSigmaSafeguard * s), kSigmaSafeguard * mu_ / s);
    }
  }
}

bool InteriorPoint::line_search(const VectorXd& dv, const VectorXd& dy, const VectorXd& dzl,
                                const VectorXd& dzu, IterationLog& log) {
  const double tau = std::max(options_.fraction_to_boundary_min, 1.0 - mu_);
  const double alpha_max = max_step(v_, dv, tau);
  double alpha_z = 1.0;
  for (int i = 0; i < nv_; ++i) {
    if (has_lower_[i] && dzl(i) < 0.0) alpha_z = std::min(alpha_z, -tau * zl_(i) / dzl(i));
    if (has_upper_[i] && dzu(i) < 0.0) alpha_z = std::min(alpha_z, -tau * zu_(i) / dzu(i));
  }

  const double theta = residual_.lpNorm<1>();
  const double phi = barrier_function(f_, v_);
  const double grad_phi_d = barrier_gradient(v_).dot(dv);
  const double noise = 10.0 * kMachineEpsilon * std::abs(phi);

  // Tiny steps: accept without line search.
  double rel_step = 0.0;
  for (int i = 0; i < nv_; ++i) rel_step = std::max(rel_step, std::abs(dv(i)) / (1.0 + std::abs(v_(i))));
  const bool tiny = rel_step < 10.0 * kMachineEpsilon;

  auto accepts = [&](const Trial& t, double alpha, bool& f_type) {
    f_type = false;
    if (!acceptable_to_filter(t.theta, t.phi)) return false;
    const bool switching = grad_phi_d < 0.0 &&
                           alpha * std::pow(-grad_phi_d, options_.switching_s_phi) >
                               options_.switching_delta * std::pow(theta, options_.switching_s_theta);
    if (theta <= theta_min_ && switching) {
      f_type = true;
      return t.phi <= phi + options_.armijo * alpha * grad_phi_d + noise;
    }
    return t.theta <= (1.0 - options_.filter_gamma_theta) * theta ||
           t.phi <= phi - options_.filter_gamma_phi * theta + noise;
  };

  double alpha = alpha_max;
  Trial trial;
  bool accepted = false;
  bool f_type = false;
  int backtracks = 0;
  for (; backtracks <= options_.max_backtracks; ++backtracks, alpha *= 0.5) {
    trial.v = v_ + alpha * dv;
    if (!evaluate_values(trial.v, trial.objective, trial.residual)) continue;
    trial.theta = trial.residual.lpNorm<1>();
    trial.phi = barrier_function(trial.objective, trial.v);
    if (tiny) {
      accepted = true;
      break;
    }
    if (accepts(trial, alpha, f_type)) {
      accepted = true;
      break;
    }
    // Second-order correction on the first trial if infeasibility grew.
    if (backtracks == 0 && trial.theta >= theta && options_.max_second_order_corrections > 0) {
      VectorXd c_soc = alpha * residual_ + trial.residual;
      double theta_prev = theta;
      Trial soc_trial = trial;
      for (int p = 0; p < options_.max_second_order_corrections; ++p) {
        VectorXd rhs(nv_ + m_);
        rhs.head(nv_) = -(barrier_gradient(v_) + jacobian_transpose_times(y_));
        rhs.tail(m_) = -c_soc;
        const VectorXd sol = solve(rhs, std::max(options_.constraint_regularization, dc_true_), dc_true_);
        const VectorXd dv_soc = sol.head(nv_);
        const double alpha_soc = max_step(v_, dv_soc, tau);
        Trial t;
        t.v = v_ + alpha_soc * dv_soc;
        if (!evaluate_values(t.v, t.objective, t.residual)) break;
        t.theta = t.residual.lpNorm<1>();
        t.phi = barrier_function(t.objective, t.v);
        if (accepts(t, alpha, f_type)) {
          trial = t;
          accepted = true;
          break;
        }
        if (t.theta > 0.99 * theta_prev) break;
        theta_prev = t.theta;
        c_soc = alpha_soc * c_soc + t.residual;
      }
      if (accepted) break;
    }
  }
  log.backtracks = backtracks;
  if (!accepted) return false;

  if (!f_type) augment_filter(theta, phi);
  v_ = trial.v;
  y_ += alpha * dy;
  zl_ += alpha_z * dzl;
  zu_ += alpha_z * dzu;
  safeguard_bound_multipliers();
  log.step = alpha;
  log.kind = f_type ? 'f' : 'h';
  return true;
}

bool InteriorPoint::restoration(IterationLog& log) {
  const double theta0 = residual_.lpNorm<1>();
  augment_filter(theta0, barrier_function(f_, v_));
  const double tau = std::max(options_.fraction_to_boundary_min, 1.0 - mu_);
  const double rho = 1e-8;
  for (int it = 0; it < options_.max_restoration_iterations; ++it) {
    const VectorXd sl = lower_distance(v_);
    const VectorXd su = upper_distance(v_);
    const double zeta = std::sqrt(mu_);
    VectorXd diag = VectorXd::Constant(nv_, zeta);
    VectorXd grad = VectorXd::Zero(nv_);
    for (int i = 0; i < nv_; ++i) {
      if (has_lower_[i]) {
        diag(i) += mu_ / (sl(i) * sl(i));
        grad(i) -= mu_ / sl(i);
      }
      if (has_upper_[i]) {
        diag(i) += mu_ / (su(i) * su(i));
        grad(i) += mu_ / su(i);
      }
    }
    if (!factorize(diag, false, rho)) return false;
    VectorXd rhs(nv_ + m_);
    rhs.head(nv_) = -grad;
    rhs.tail(m_) = -residual_;
    const VectorXd sol = solve(rhs, rho, rho);
    const VectorXd dv = sol.head(nv_);
    const double theta = residual_.lpNorm<1>();
    double alpha = max_step(v_, dv, tau);
    bool moved = false;
    Trial t;
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      t.v = v_ + alpha * dv;
      if (!evaluate_values(t.v, t.objective, t.residual)) continue;
      t.theta = t.residual.lpNorm<1>();
      if (t.theta < theta) {
        moved = true;
        break;
      }
    }
    if (!moved) return false;
    v_ = t.v;
    evaluate_first_order();
    t.phi = barrier_function(t.objective, t.v);
    if (t.theta <= (1.0 - options_.filter_gamma_theta) * theta0 && acceptable_to_filter(t.theta, t.phi)) {
      const VectorXd sl2 = lower_distance(v_);
      const VectorXd su2 = upper_distance(v_);
      for (int i = 0; i < nv_; ++i) {
        if (has_lower_[i]) zl_(i) = mu_ / sl2(i);
        if (has_upper_[i]) zu_(i) = mu_ / su2(i);
      }
      log.kind = 'r';
      log.step = alpha;
      return true;
    }
  }
  return false;
}

void InteriorPoint::initialize(const PrimalDualPoint& start) {
  if (start.x.size() != n_) {
    throw Error(ErrorCode::kDimensionMismatch, "starting point has wrong length");
  }
  const bool warm = start.has_multipliers();
  if (warm && (start.y.size() != m_ || start.z_lower.size() != n_ || start.z_upper.size() != n_ ||
               start.constraint_z_lower.size() != m_ || start.constraint_z_upper.size() != m_)) {
    throw Error(ErrorCode::kDimensionMismatch, "warm-start multipliers have wrong length");
  }
  const double push = warm ? options_.warm_bound_push : options_.bound_push;
  const double init_mu = start.barrier > 0.0 ? start.barrier : options_.barrier_initial;
  mu_ = std::clamp(init_mu, options_.barrier_lower, options_.barrier_upper);

  x_base_ = start.x;
  const VectorXd& xl = problem_.variable_lower();
  for (int i = 0; i < n_; ++i) {
    if (free_map_[i] < 0) x_base_(i) = xl(i);
  }
  v_.resize(nv_);
  for (int k = 0; k < nf_; ++k) v_(k) = start.x(free_vars_[k]);
  if (ni_ > 0) {
    double f0 = 0.0;
    VectorXd c0;
    problem_.values(full_x(v_), f0, c0);
    for (int k = 0; k < ni_; ++k) v_(nf_ + k) = c0(slack_rows_[k]);
  }
  // Push strictly inside the bounds.
  for (int i = 0; i < nv_; ++i) {
    const double l = lower_(i);
    const double u = upper_(i);
    if (has_lower_[i] && has_upper_[i]) {
      const double width = u - l;
      const double pad_l = std::min(push * std::max(1.0, std::abs(l)), 0.5 * push * width);
      const double pad_u = std::min(push * std::max(1.0, std::abs(u)), 0.5 * push * width);
      v_(i) = std::clamp(v_(i), l + pad_l, u - pad_u);
    } else if (has_lower_[i]) {
      v_(i) = std::max(v_(i), l + push * std::max(1.0, std::abs(l)));
    } else if (has_upper_[i]) {
      v_(i) = std::min(v_(i), u - push * std::max(1.0, std::abs(u)));
    }
  }

  zl_ = VectorXd::Zero(nv_);
  zu_ = VectorXd::Zero(nv_);
  const VectorXd sl = lower_distance(v_);
  const VectorXd su = upper_distance(v_);
  for (int i = 0; i < nv_; ++i) {
    double given_l = 0.0, given_u = 0.0;
    if (warm) {
      if (i < nf_) {
        given_l = start.z_lower(free_vars_[i]);
        given_u = start.z_upper(free_vars_[i]);
      } else {
        given_l = start.constraint_z_lower(slack_rows_[i - nf_]);
        given_u = start.constraint_z_upper(slack_rows_[i - nf_]);
      }
    }
    if (has_lower_[i]) zl_(i) = warm ? (given_l > 0.0 ? given_l : mu_ / sl(i)) : 1.0;
    if (has_upper_[i]) zu_(i) = warm ? (given_u > 0.0 ? given_u : mu_ / su(i)) : 1.0;
  }
  safeguard_bound_multipliers();

  evaluate_first_order();
  if (warm) {
    y_ = start.y;
  } else {
    // Least-squares multiplier estimate.
    y_ = VectorXd::Zero(m_);
    if (m_ > 0) {
      if (factorize(VectorXd::Ones(nv_), false, options_.constraint_regularization)) {
        VectorXd rhs(nv_ + m_);
        rhs.head(nv_) = -(grad_v_ - zl_ + zu_);
        rhs.tail(m_).setZero();
        const VectorXd sol = solve(rhs, options_.constraint_regularization, 0.0);
        if (sol.allFinite() && sol.tail(m_).lpNorm<Eigen::Infinity>() <= 1e3) y_ = sol.tail(m_);
      }
    }
  }
  const double theta0 = residual_.lpNorm<1>();
  theta_max_ = 1e4 * std::max(1.0, theta0);
  theta_min_ = 1e-4 * std::max(1.0, theta0);
  reset_filter();
}

PrimalDualPoint InteriorPoint::export_point() const {
  PrimalDualPoint p;
  p.x = full_x(v_);
  p.y = y_;
  p.z_lower = VectorXd::Zero(n_);
  p.z_upper = VectorXd::Zero(n_);
  p.constraint_z_lower = VectorXd::Zero(m_);
  p.constraint_z_upper = VectorXd::Zero(m_);
  for (int k = 0; k < nf_; ++k) {
    p.z_lower(free_vars_[k]) = zl_(k);
    p.z_upper(free_vars_[k]) = zu_(k);
  }
  for (int k = 0; k < ni_; ++k) {
    p.constraint_z_lower(slack_rows_[k]) = zl_(nf_ + k);
    p.constraint_z_upper(slack_rows_[k]) = zu_(nf_ + k);
  }
  p.barrier = mu_;
  return p;
}

SolveResult InteriorPoint::run(const PrimalDualPoint& start) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(options_.barrier_lower > 0.0) || options_.barrier_lower > options_.barrier_upper) {
    throw Error(ErrorCode::kConfigError, "barrier bounds must satisfy 0 < lower <= upper");
  }
  classify();
  build_pattern();
  SolveResult result;
  SolveReport& rep = result.report;
  auto finish = [&](SolveStatus status, std::string message) {
    rep.status = status;
    rep.message = std::move(message);
    rep.barrier = mu_;
    rep.objective = f_;
    const OptimalityErrors e = optimality(options_.barrier_lower);
    rep.kkt_residual = e.total;
    rep.primal_infeasibility = e.primal;
    rep.dual_infeasibility = e.dual;
    rep.complementarity = e.complementarity;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.point = export_point();
    return result;
  };

  try {
    initialize(start);
  } catch (const Error& e) {
    if (v_.size() != nv_ || grad_v_.size() != nv_) {
      rep.status = SolveStatus::kError;
      rep.message = e.what();
      return result;
    }
    return finish(SolveStatus::kError, e.what());
  }

  for (int iter = 0;; ++iter) {
    rep.iterations = iter;
    const OptimalityErrors target = optimality(options_.barrier_lower);
    if (target.total <= options_.kkt_tolerance && target.primal <= options_.feasibility_tolerance) {
      return finish(SolveStatus::kOptimal, "converged");
    }
    if (iter >= options_.max_iterations) return finish(SolveStatus::kMaxIter, "iteration limit reached");

    // Monotone barrier update.
    while (mu_ > options_.barrier_lower &&
           optimality(mu_).total <= options_.barrier_progress * mu_) {
      mu_ = std::max(options_.barrier_lower, options_.barrier_reduction * mu_);
      reset_filter();
    }
    rep.barrier_trace.push_back(mu_);

    IterationLog log;
    log.iteration = iter;
    log.objective = f_;
    log.barrier = mu_;
    const OptimalityErrors cur = optimality(mu_);
    log.primal_infeasibility = cur.primal;
    log.dual_infeasibility = cur.dual;

    try {
      evaluate_hessian();
      VectorXd dv, dy, dzl, dzu;
      double dw = 0.0;
      if (!compute_direction(dv, dy, dzl, dzu, dw)) {
        return finish(SolveStatus::kError, "KKT system singular beyond regularization");
      }
      log.regularization = dw;
      if (!line_search(dv, dy, dzl, dzu, log)) {
        ++rep.restorations;
        if (!restoration(log)) return finish(SolveStatus::kInfeasible, "restoration failed");
      } else {
        evaluate_first_order();
      }
    } catch (const Error& e) {
      return finish(SolveStatus::kError, e.what());
    }
    if (options_.on_iteration) options_.on_iteration(log);
  }
}

}  // namespace

SolveResult solve_nlp(const NlpProblem& problem, const PrimalDualPoint& start, const SolverOptions& options) {
  InteriorPoint ip(problem, options);
  return ip.run(start);
}

}  // namespace awes::nlp
