// Copyright 2026 The ladmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LADMM_DIAGNOSTICS_HPP_
#define LADMM_DIAGNOSTICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ladmm/linalg.hpp"
#include "ladmm/solver.hpp"

// Numerical certificates for the convergence analysis of the relaxed
// adaptive scheme. All matrices act on v = (y, lambda) in R^{n2 + m}.
//
//   Q = [ tau r beta I    0       ]     M = [ sigma I          0       ]
//       [ -B              1/beta I ]         [ -sigma beta B    sigma I ]
//
//   H = (1/sigma) diag(tau r beta I, 1/beta I),   Q = H M,
//
//   G = Q^T + Q - M^T H M
//     = [ (2-sigma) tau r beta I - sigma beta B^T B    (sigma-1) B^T         ]
//       [ (sigma-1) B                                  (2-sigma)/beta I      ]
//
// One accepted iteration satisfies v^k - v^{k+1} = M (v^k - v_tilde^k).

namespace ladmm::diagnostics {

struct MatrixParams {
  double tau = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  double r = 0.0;
};

struct AnalysisMatrices {
  DenseMatrix Q;
  DenseMatrix M;
  DenseMatrix H;
  DenseMatrix G;
  MatrixParams params;
  DenseMatrix B;
};

/// Dense assembly is limited to n2 + m <= kMaxDenseDim; the check_* functions
/// below work in operator form and have no such limit.
inline constexpr std::size_t kMaxDenseDim = 2000;

inline AnalysisMatrices build_matrices(const DenseMatrix& B, double beta, double sigma, double tau,
                                       double r) {
  detail::require(beta > 0.0 && tau > 0.0 && r > 0.0, "build_matrices: beta, tau, r must be positive");
  detail::require(sigma > 0.0 && sigma < 2.0, "build_matrices: sigma must lie in (0, 2)");
  const std::size_t n2 = B.cols(), m = B.rows(), dim = n2 + m;
  detail::require(dim <= kMaxDenseDim, "build_matrices: too large for dense assembly");

  DenseMatrix Q(dim, dim), M(dim, dim), H(dim, dim), G(dim, dim);
  const double trb = tau * r * beta;
  for (std::size_t i = 0; i < n2; ++i) {
    Q(i, i) = trb;
    M(i, i) = sigma;
    H(i, i) = trb / sigma;
  }
  for (std::size_t i = 0; i < m; ++i) {
    Q(n2 + i, n2 + i) = 1.0 / beta;
    M(n2 + i, n2 + i) = sigma;
    H(n2 + i, n2 + i) = 1.0 / (sigma * beta);
    G(n2 + i, n2 + i) = (2.0 - sigma) / beta;
    for (std::size_t j = 0; j < n2; ++j) {
      Q(n2 + i, j) = -B(i, j);
      M(n2 + i, j) = -sigma * beta * B(i, j);
      G(n2 + i, j) = (sigma - 1.0) * B(i, j);
      G(j, n2 + i) = (sigma - 1.0) * B(i, j);
    }
  }
  // Upper-left block: (2 - sigma) tau r beta I - sigma beta B^T B.
  for (std::size_t a = 0; a < n2; ++a) {
    for (std::size_t c = 0; c < n2; ++c) {
      double btb = 0.0;
      for (std::size_t i = 0; i < m; ++i) btb += B(i, a) * B(i, c);
      G(a, c) = -sigma * beta * btb;
    }
    G(a, a) += (2.0 - sigma) * trb;
  }
  return {std::move(Q), std::move(M), std::move(H), std::move(G), {tau, beta, sigma, r}, B};
}

/// max |Q - H M| relative to max(1, max |Q|).
inline double hm_identity_residual(const AnalysisMatrices& mats) {
  const DenseMatrix hm = mats.H * mats.M;
  double worst = 0.0, scale = 1.0;
  const auto q = mats.Q.values(), p = hm.values();
  for (std::size_t i = 0; i < q.size(); ++i) {
    worst = std::max(worst, std::abs(q[i] - p[i]));
    scale = std::max(scale, std::abs(q[i]));
  }
  return worst / scale;
}

// ---------------------------------------------------------------------------
// Operator forms

/// M u for u = (u_y, u_lambda).
inline BasicVariables apply_m(const DenseMatrix& B, double sigma, double beta,
                              const BasicVariables& u) {
  Vector top = sigma * Vector(u.y);
  Vector bottom = sigma * Vector(u.lambda);
  axpy(-sigma * beta, B.apply(u.y), bottom);
  return {std::move(top), std::move(bottom)};
}

inline BasicVariables difference(const BasicVariables& a, const BasicVariables& b) {
  return {a.y - b.y, a.lambda - b.lambda};
}

inline double squared_norm(const BasicVariables& u) { return ladmm::squared_norm(u.y) + ladmm::squared_norm(u.lambda); }

/// |u|_H^2 with H = (1/sigma) diag(tau r beta I, 1/beta I).
inline double h_norm_sq(const BasicVariables& u, double tau, double r, double beta, double sigma) {
  return (tau * r * beta * ladmm::squared_norm(u.y) + ladmm::squared_norm(u.lambda) / beta) / sigma;
}

/// |(v - v_next) - M (v - v_tilde)| / max(1, |v - v_next|), with dense M.
inline double check_prediction_correction(const BasicVariables& v, const BasicVariables& v_next,
                                          const BasicVariables& v_tilde, const DenseMatrix& M) {
  const Vector step = concat(v.y - v_next.y, v.lambda - v_next.lambda);
  const Vector pred = M.apply(concat(v.y - v_tilde.y, v.lambda - v_tilde.lambda));
  return distance(step, pred) / std::max(1.0, norm(step));
}

/// Same residual with M applied in operator form.
inline double check_prediction_correction(const BasicVariables& v, const BasicVariables& v_next,
                                          const BasicVariables& v_tilde, const DenseMatrix& B,
                                          double sigma, double beta) {
  const BasicVariables step = difference(v, v_next);
  const BasicVariables pred = apply_m(B, sigma, beta, difference(v, v_tilde));
  return std::sqrt(squared_norm(difference(step, pred))) / std::max(1.0, std::sqrt(squared_norm(step)));
}

/// Largest prediction-correction residual over a recorded trajectory. The
/// relaxation factor is the one the run actually applied (1 for OLADMM).
inline double max_prediction_correction(const RunRecord& rec, const DenseMatrix& B) {
  const double sigma = rec.algorithm == Algorithm::kOladmm ? 1.0 : rec.config.sigma;
  double worst = 0.0;
  for (const auto& pt : rec.trajectory) {
    worst = std::max(worst, check_prediction_correction({pt.y, pt.lambda}, {pt.y_next, pt.lambda_next},
                                                        {pt.y_hat, pt.lambda_tilde}, B, sigma,
                                                        rec.config.beta));
  }
  return worst;
}

/// (a-b)^T H (c-d) - [ (|a-d|_H^2 - |a-c|_H^2)/2 + (|c-b|_H^2 - |d-b|_H^2)/2 ]
/// for diagonal H; zero up to roundoff.
inline double four_point_identity_gap(const Vector& a, const Vector& b, const Vector& c,
                                      const Vector& d, const Vector& h_diag) {
  auto hn = [&](const Vector& u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += h_diag[i] * u[i] * u[i];
    return acc;
  };
  const Vector ab = a - b, cd = c - d;
  double lhs = 0.0;
  for (std::size_t i = 0; i < ab.size(); ++i) lhs += ab[i] * h_diag[i] * cd[i];
  const double rhs = 0.5 * (hn(a - d) - hn(a - c)) + 0.5 * (hn(c - b) - hn(d - b));
  return lhs - rhs;
}

// ---------------------------------------------------------------------------
// Descent certificate

/// The sequence v^0, ..., v^K and the tau_k used to produce v^{k+1}.
struct DescentHistory {
  std::vector<BasicVariables> v;
  std::vector<double> tau;
};

inline DescentHistory history_from(const RunRecord& rec) {
  DescentHistory h;
  for (const auto& pt : rec.trajectory) {
    h.v.push_back({pt.y, pt.lambda});
    h.tau.push_back(pt.tau);
  }
  if (!rec.trajectory.empty()) h.v.push_back({rec.trajectory.back().y_next, rec.trajectory.back().lambda_next});
  return h;
}

struct DescentReport {
  int passed = 0;
  int total = 0;
  std::vector<double> margins;  // RHS + slack (1 + RHS) - LHS per step

  double pass_fraction() const { return total == 0 ? 1.0 : static_cast<double>(passed) / total; }
};

/// For each step k checks
///   |v^{k+1} - v*|^2_{H(tau_k)} <= (1 + xi_k) |v^k - v*|^2_{H(tau_{k-1})}
///       - (1/sigma^2) (beta |dy|^2_T + ((2 - sigma) - eps)/beta |dlambda|^2)
/// with T = (2 - sigma) tau_k r I - eps' B^T B (so delta = eps/2), eps = 1/eps',
/// xi_k = max(0, tau_k / tau_{k-1} - 1) and tau_{-1} = cfg.tau0. A step
/// passes when LHS <= RHS + slack (1 + RHS).
inline DescentReport check_descent(const DescentHistory& hist, const BasicVariables& v_star,
                                   const SolverConfig& cfg, const DenseMatrix& B, double r,
                                   double slack) {
  detail::require(hist.v.size() == hist.tau.size() + 1 || (hist.v.empty() && hist.tau.empty()),
                  "check_descent: history needs one more point than tau values");
  detail::require(slack >= 0.0, "check_descent: slack must be nonnegative");
  for (const auto& v : hist.v) {
    detail::require(v.y.size() == v_star.y.size() && v.lambda.size() == v_star.lambda.size(),
                    "check_descent: dimension mismatch");
  }
  const double sigma = cfg.sigma, beta = cfg.beta;
  const double eps = 1.0 / cfg.eps_prime;

  DescentReport rep;
  for (std::size_t k = 0; k < hist.tau.size(); ++k) {
    const double tau_k = hist.tau[k];
    const double tau_prev = k == 0 ? cfg.tau0 : hist.tau[k - 1];
    const double xi = std::max(0.0, tau_k / tau_prev - 1.0);

    const BasicVariables& vk = hist.v[k];
    const BasicVariables& vn = hist.v[k + 1];
    const double lhs = h_norm_sq(difference(vn, v_star), tau_k, r, beta, sigma);
    const double prev = h_norm_sq(difference(vk, v_star), tau_prev, r, beta, sigma);

    const Vector dy = vk.y - vn.y;
    const double t_norm = (2.0 - sigma) * tau_k * r * ladmm::squared_norm(dy) -
                          cfg.eps_prime * ladmm::squared_norm(B.apply(dy));
    const double dl = ladmm::squared_norm(vk.lambda - vn.lambda);
    const double rhs = (1.0 + xi) * prev - (beta * t_norm + ((2.0 - sigma) - eps) / beta * dl) / (sigma * sigma);

    const double margin = rhs + slack * (1.0 + rhs) - lhs;
    rep.margins.push_back(margin);
    ++rep.total;
    if (margin >= 0.0) ++rep.passed;
  }
  return rep;
}

/// Number of accepted steps of an adaptive run that were not already
/// stationary in y (|dy| > eq_tol max(1, |y|)) yet fail theta1 > theta2 as
/// recomputed by theta_values.
inline int count_step2_violations(const RunRecord& rec, const DenseMatrix& B) {
  int bad = 0;
  for (const auto& pt : rec.trajectory) {
    if (distance(pt.y_next, pt.y) <= rec.config.eq_tol * std::max(1.0, norm(pt.y))) continue;
    const Thetas th = theta_values(pt.y, pt.y_next, pt.tau, rec.r, rec.config.sigma,
                                   rec.config.eps_prime, B);
    if (!(th.theta1 > th.theta2)) ++bad;
  }
  return bad;
}

}  // namespace ladmm::diagnostics

#endif  // LADMM_DIAGNOSTICS_HPP_
