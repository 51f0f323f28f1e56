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

#ifndef LADMM_SOLVER_HPP_
#define LADMM_SOLVER_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ladmm/linalg.hpp"
#include "ladmm/problem.hpp"

namespace ladmm {

enum class Algorithm { kAdaptiveRelaxed, kOladmm };
enum class Status { kConverged, kMaxIter, kBacktrackFail };

inline std::string_view to_string(Algorithm a) {
  return a == Algorithm::kAdaptiveRelaxed ? "alg1" : "oladmm";
}

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::kConverged: return "Converged";
    case Status::kMaxIter: return "MaxIter";
    case Status::kBacktrackFail: return "BacktrackFail";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "alg1") return Algorithm::kAdaptiveRelaxed;
  if (s == "oladmm") return Algorithm::kOladmm;
  return std::nullopt;
}

inline std::optional<Status> parse_status(std::string_view s) {
  if (s == "Converged") return Status::kConverged;
  if (s == "MaxIter") return Status::kMaxIter;
  if (s == "BacktrackFail") return Status::kBacktrackFail;
  return std::nullopt;
}

/// eps' = 1/eps with eps = 1/(1/(2 - sigma) + 0.1), which lies in (0, 2 - sigma).
inline double default_eps_prime(double sigma) { return 1.0 / (2.0 - sigma) + 0.1; }

struct SolverConfig {
  double beta = 1.0;
  double sigma = 0.9;
  double tau0 = 0.75;
  double tau_min = 0.01;
  double gamma = 1.2;     // Step-2 backtracking inflation
  double rho = 3.0;       // Step-4 safeguard inflation
  double upsilon = 1.2;   // Step-3 decrease trigger
  double eps_prime = default_eps_prime(0.9);
  double eps_abs = 1e-4;
  double eps_rel = 1e-2;
  double p0 = 100.0;
  double d0 = 100.0;
  std::int64_t l = 0;     // offset of the eta/s sequences; callers set it to m
  int max_iter = 10000;
  int max_backtracks = 60;
  double tau_cap = 1e6;
  double eq_tol = 1e-14;  // "y^{k+1} = y^k" test, relative to max(1, |y^k|)
  bool keep_trajectory = false;

  /// Defaults for a problem with m constraint rows.
  static SolverConfig defaults(std::size_t m) {
    SolverConfig c;
    c.l = static_cast<std::int64_t>(m);
    return c;
  }

  /// Changes sigma and re-derives eps_prime from it.
  SolverConfig& set_sigma(double s) {
    sigma = s;
    eps_prime = default_eps_prime(s);
    return *this;
  }

  void validate() const {
    using detail::require;
    require(beta > 0.0, "SolverConfig: beta must be positive");
    require(sigma > 0.0 && sigma < 2.0, "SolverConfig: sigma must lie in (0, 2)");
    require(eps_prime > 1.0 / (2.0 - sigma), "SolverConfig: eps_prime must exceed 1/(2 - sigma)");
    require(tau_min > 0.0 && tau_min <= tau0 && tau0 <= tau_cap,
            "SolverConfig: need 0 < tau_min <= tau0 <= tau_cap");
    require(gamma > 1.0 && rho > 1.0 && upsilon > 1.0,
            "SolverConfig: gamma, rho and upsilon must exceed 1");
    require(eps_abs > 0.0 && eps_rel > 0.0, "SolverConfig: tolerances must be positive");
    require(p0 >= 0.0 && d0 >= 0.0, "SolverConfig: p0 and d0 must be nonnegative");
    require(l >= 0, "SolverConfig: l must be nonnegative");
    require(max_iter >= 1 && max_backtracks >= 0, "SolverConfig: bad iteration limits");
    require(eq_tol >= 0.0, "SolverConfig: eq_tol must be nonnegative");
  }

  bool operator==(const SolverConfig&) const = default;
};

/// Controller state carried between outer iterations.
struct AdaptiveState {
  int k = 0;
  double tau = 0.0;
  double p_prev = 0.0;
  double d_prev = 0.0;
  double t_next = 0.0;
  int inflation_count = 0;
};

struct IterationLog {
  int k = 0;            // 1-based accepted iteration
  double tau = 0.0;     // tau used by the accepted sweep
  double p = 0.0;
  double d = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  int backtracks = 0;
  double objective = 0.0;
  double elapsed_ms = 0.0;
  double eps_pri = 0.0;
  double eps_dual = 0.0;

  bool operator==(const IterationLog&) const = default;
};

/// (y, lambda) before and after one accepted iteration, plus the predictor
/// (y_hat, lambda_tilde).
struct TrajectoryPoint {
  Vector y;
  Vector lambda;
  Vector y_next;
  Vector lambda_next;
  Vector y_hat;
  Vector lambda_tilde;
  double tau = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

struct RunRecord {
  Algorithm algorithm = Algorithm::kAdaptiveRelaxed;
  SolverConfig config;
  double r = 0.0;
  Status status = Status::kMaxIter;
  std::vector<IterationLog> iterations;
  Iterate final_iterate;
  int inflation_count = 0;
  double time_s = 0.0;
  std::vector<TrajectoryPoint> trajectory;  // filled only if config.keep_trajectory

  int iter() const { return static_cast<int>(iterations.size()); }
  double final_p() const { return iterations.empty() ? 0.0 : iterations.back().p; }
  double final_d() const { return iterations.empty() ? 0.0 : iterations.back().d; }
  double final_objective() const {
    return iterations.empty() ? 0.0 : iterations.back().objective;
  }
};

// ---------------------------------------------------------------------------
// Step 1: subproblem sweep

inline Vector x_update(const SeparableProblem& p, const Vector& y, const Vector& lam, double beta) {
  detail::require(beta > 0.0, "x_update: beta must be positive");
  return p.x_oracle(y, lam, beta);
}

/// Linearized y-subproblem under the metric tau*r*beta*I - beta*B^T B:
///   q = B^T (lam - beta (A x_next + B y - b)),
///   y_hat = prox_g(y + q / c, c)  with c = tau * r * beta.
inline Vector y_hat_update(const SeparableProblem& p, const Vector& x_next, const Vector& y,
                           const Vector& lam, double beta, double tau, double r) {
  const double c = tau * r * beta;
  detail::require(c > 0.0, "y_hat_update: tau*r*beta must be positive");
  Vector shifted = lam;
  axpy(-beta, p.constraint_residual(x_next, y), shifted);
  Vector center = y;
  axpy(1.0 / c, p.B.apply_transpose(shifted), center);
  return p.g_prox(center, c);
}

struct MultiplierPair {
  Vector lambda_tilde;
  Vector lambda_hat;
};

inline MultiplierPair lambda_updates(const SeparableProblem& p, const Vector& x_next,
                                     const Vector& y, const Vector& y_hat, const Vector& lam,
                                     double beta) {
  detail::require(beta > 0.0, "lambda_updates: beta must be positive");
  Vector tilde = lam;
  axpy(-beta, p.constraint_residual(x_next, y), tilde);
  Vector hat = lam;
  axpy(-beta, p.constraint_residual(x_next, y_hat), hat);
  return {std::move(tilde), std::move(hat)};
}

/// Fills the tau-dependent part of a candidate (y_hat and both multiplier
/// predictions) around (y, lam) for the x_next it already holds.
inline void refresh_candidate(const SeparableProblem& p, const Vector& y, const Vector& lam,
                              double beta, double tau, double r, Candidate& cand) {
  cand.y_hat = y_hat_update(p, cand.x_next, y, lam, beta, tau, r);
  auto mult = lambda_updates(p, cand.x_next, y, cand.y_hat, lam, beta);
  cand.lambda_tilde = std::move(mult.lambda_tilde);
  cand.lambda_hat = std::move(mult.lambda_hat);
}

/// One full subproblem sweep from (y, lam).
inline Candidate sweep(const SeparableProblem& p, const Vector& y, const Vector& lam,
                       double beta, double tau, double r) {
  Candidate cand;
  cand.x_next = x_update(p, y, lam, beta);
  refresh_candidate(p, y, lam, beta, tau, r, cand);
  return cand;
}

struct BasicVariables {
  Vector y;
  Vector lambda;
};

/// v_next = v - sigma (v - v_hat), blockwise on (y, lambda).
inline BasicVariables relax(const BasicVariables& v, const BasicVariables& v_hat, double sigma) {
  detail::require(sigma > 0.0 && sigma < 2.0, "relax: sigma must lie in (0, 2)");
  auto step = [sigma](const Vector& a, const Vector& a_hat) {
    check_same_size(a, a_hat);
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - sigma * (a[i] - a_hat[i]);
    return out;
  };
  return {step(v.y, v_hat.y), step(v.lambda, v_hat.lambda)};
}

// ---------------------------------------------------------------------------
// Steps 2-4: acceptance and tau controllers

struct Thetas {
  double theta1;
  double theta2;
};

inline Thetas theta_values(const Vector& y, const Vector& y_next, double tau, double r,
                           double sigma, double eps_prime, const DenseMatrix& B) {
  const Vector dy = y - y_next;
  return {(2.0 - sigma) * tau * r * squared_norm(dy), eps_prime * squared_norm(B.apply(dy))};
}

inline bool step2_accept(double theta1, double theta2, const Vector& y, const Vector& y_next,
                         double eq_tol) {
  if (theta1 > theta2) return true;
  return distance(y_next, y) <= eq_tol * std::max(1.0, norm(y));
}

inline double step3_decrease(double tau, double theta1, double theta2, double upsilon,
                             double eta_next, double tau_min) {
  if (theta1 - theta2 >= upsilon * theta2) return std::max(tau / (1.0 + eta_next), tau_min);
  return tau;
}

inline bool step4_violated(double p_next, double d_next, double p_prev, double d_prev,
                           double s_k) {
  return p_next > (1.0 + s_k) * p_prev || d_next > (1.0 + s_k) * d_prev;
}

inline double step4_safeguard(double t_next, double p_next, double d_next, double p_prev,
                              double d_prev, double s_k, double rho, double tau_cap) {
  if (step4_violated(p_next, d_next, p_prev, d_prev, s_k)) return std::min(rho * t_next, tau_cap);
  return t_next;
}

// ---------------------------------------------------------------------------
// Residuals, tolerances and parameter sequences

struct Residuals {
  double primal;  // |A x_next + B y_next - b|
  double dual;    // |beta A^T B (y_next - y)|
};

inline Residuals residuals(const SeparableProblem& p, const Vector& x_next, const Vector& y_next,
                           const Vector& y, double beta) {
  detail::require(beta > 0.0, "residuals: beta must be positive");
  const Vector bdy = p.B.apply(y_next - y);
  return {norm(p.constraint_residual(x_next, y_next)), beta * norm(p.A.apply_transpose(bdy))};
}

struct Tolerances {
  double primal;
  double dual;
};

/// eps_pri  = sqrt(n) eps_abs + eps_rel max(|A x|, |B y|)
/// eps_dual = sqrt(n) eps_abs + eps_rel |y|
inline Tolerances stopping_tolerances(const Vector& x_next, const Vector& y_next,
                                      const DenseMatrix& A, const DenseMatrix& B,
                                      std::size_t n_dim, double eps_abs, double eps_rel) {
  detail::require(n_dim >= 1, "stopping_tolerances: n_dim must be >= 1");
  const double base = std::sqrt(static_cast<double>(n_dim)) * eps_abs;
  const double scale = std::max(norm(A.apply(x_next)), norm(B.apply(y_next)));
  return {base + eps_rel * scale, base + eps_rel * norm(y_next)};
}

namespace detail {
inline double sequence_tail(double coeff, std::int64_t k, std::int64_t l) {
  const double shift = static_cast<double>(std::max<std::int64_t>(1, k - l));
  return coeff * std::min(1.0, 1.0 / (shift * shift));
}
}  // namespace detail

inline double eta_seq(std::int64_t k, std::int64_t l) { return detail::sequence_tail(0.25, k, l); }
inline double s_seq(std::int64_t k, std::int64_t l) { return detail::sequence_tail(2.0, k, l); }

/// r = |B^T B|. Uses the cached value on the problem when present.
inline double gram_norm(const SeparableProblem& p) {
  if (p.gram_norm) return *p.gram_norm;
  return gram_norm_estimate(p.B);
}

// ---------------------------------------------------------------------------
// Drivers

namespace detail {

inline void check_start(const SeparableProblem& p, const Iterate& w0) {
  require(w0.y.size() == p.n2() && w0.lambda.size() == p.m(),
          "solve: starting point dimension mismatch");
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

inline RunRecord run(const SeparableProblem& p, const SolverConfig& cfg, const Iterate& w0,
                     Algorithm alg) {
  p.validate();
  cfg.validate();
  check_start(p, w0);

  RunRecord rec;
  rec.algorithm = alg;
  rec.config = cfg;
  rec.r = gram_norm(p);
  const double r = rec.r;
  const bool adaptive = alg == Algorithm::kAdaptiveRelaxed;

  Stopwatch clock;
  Vector y = w0.y;
  Vector lam = w0.lambda;
  Vector x = w0.x.size() == p.n1() ? w0.x : Vector(p.n1());

  AdaptiveState st;
  st.tau = cfg.tau0;
  st.p_prev = cfg.p0;
  st.d_prev = cfg.d0;

  auto finish = [&](Status status) {
    rec.status = status;
    rec.final_iterate = {x, y, lam};
    rec.inflation_count = st.inflation_count;
    rec.time_s = clock.elapsed_ms() / 1000.0;
    return rec;
  };

  for (st.k = 0; st.k < cfg.max_iter; ++st.k) {
    // The x-subproblem does not involve tau, so backtracking reuses x_next.
    Candidate cand;
    cand.x_next = x_update(p, y, lam, cfg.beta);

    BasicVariables next;
    Thetas th{};
    int backtracks = 0;
    for (;;) {
      refresh_candidate(p, y, lam, cfg.beta, st.tau, r, cand);
      if (adaptive) {
        next = relax({y, lam}, {cand.y_hat, cand.lambda_hat}, cfg.sigma);
        th = theta_values(y, next.y, st.tau, r, cfg.sigma, cfg.eps_prime, p.B);
        if (step2_accept(th.theta1, th.theta2, y, next.y, cfg.eq_tol)) break;
        if (backtracks == cfg.max_backtracks) return finish(Status::kBacktrackFail);
        st.tau = std::min(cfg.gamma * st.tau, cfg.tau_cap);
        ++backtracks;
      } else {
        next = {cand.y_hat, cand.lambda_hat};
        th = theta_values(y, next.y, st.tau, r, 1.0, cfg.eps_prime, p.B);
        break;
      }
    }

    const Residuals res = residuals(p, cand.x_next, next.y, y, cfg.beta);
    const double tau_used = st.tau;
    if (adaptive) {
      st.t_next = step3_decrease(st.tau, th.theta1, th.theta2, cfg.upsilon,
                                 eta_seq(st.k + 1, cfg.l), cfg.tau_min);
      const double s_k = s_seq(st.k, cfg.l);
      if (step4_violated(res.primal, res.dual, st.p_prev, st.d_prev, s_k)) ++st.inflation_count;
      st.tau = step4_safeguard(st.t_next, res.primal, res.dual, st.p_prev, st.d_prev, s_k,
                               cfg.rho, cfg.tau_cap);
      st.p_prev = res.primal;
      st.d_prev = res.dual;
    }

    const Tolerances tol =
        stopping_tolerances(cand.x_next, next.y, p.A, p.B, p.n2(), cfg.eps_abs, cfg.eps_rel);

    IterationLog entry;
    entry.k = st.k + 1;
    entry.tau = tau_used;
    entry.p = res.primal;
    entry.d = res.dual;
    entry.theta1 = th.theta1;
    entry.theta2 = th.theta2;
    entry.backtracks = backtracks;
    entry.objective = p.objective(cand.x_next, next.y);
    entry.eps_pri = tol.primal;
    entry.eps_dual = tol.dual;

    if (cfg.keep_trajectory) {
      rec.trajectory.push_back({y, lam, next.y, next.lambda, cand.y_hat, cand.lambda_tilde, tau_used,
                                th.theta1, th.theta2});
    }

    x = std::move(cand.x_next);
    y = std::move(next.y);
    lam = std::move(next.lambda);
    entry.elapsed_ms = clock.elapsed_ms();
    rec.iterations.push_back(entry);

    if (res.primal <= tol.primal && res.dual <= tol.dual) return finish(Status::kConverged);
  }
  return finish(Status::kMaxIter);
}

}  // namespace detail

/// Adaptive linearized ADMM with relaxation on (y, lambda) and
/// backtracking/decrease/safeguard control of the proximal factor tau.
inline RunRecord solve_alg1(const SeparableProblem& p, const SolverConfig& cfg,
                            const Iterate& w0) {
  return detail::run(p, cfg, w0, Algorithm::kAdaptiveRelaxed);
}

/// Linearized ADMM with the fixed proximal factor cfg.tau0 and no
/// relaxation. cfg.sigma and the controller constants are ignored.
inline RunRecord solve_oladmm(const SeparableProblem& p, const SolverConfig& cfg,
                              const Iterate& w0) {
  return detail::run(p, cfg, w0, Algorithm::kOladmm);
}

inline RunRecord solve(const SeparableProblem& p, const SolverConfig& cfg, const Iterate& w0,
                       Algorithm alg) {
  return detail::run(p, cfg, w0, alg);
}

}  // namespace ladmm

#endif  // LADMM_SOLVER_HPP_
