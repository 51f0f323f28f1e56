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

#ifndef LADMM_PROBLEM_HPP_
#define LADMM_PROBLEM_HPP_

#include <functional>
#include <optional>
#include <utility>

#include "ladmm/linalg.hpp"

namespace ladmm {

/// min f(x) + g(y) subject to A x + B y = b, with x and y unconstrained.
///
/// The solver only touches f and g through two exact oracles:
///   x_oracle(y, lambda, beta) = argmin_x f(x) - lambda^T A x + beta/2 |A x + B y - b|^2
///   g_prox(z, c)              = argmin_y g(y) + c/2 |y - z|^2,  c > 0
/// Column rank of A is not checked; convergence of the x iterates relies on it.
struct SeparableProblem {
  using XOracle = std::function<Vector(const Vector& y, const Vector& lambda, double beta)>;
  using GProx = std::function<Vector(const Vector& z, double c)>;
  using Value = std::function<double(const Vector&)>;

  DenseMatrix A;
  DenseMatrix B;
  Vector b;
  XOracle x_oracle;
  GProx g_prox;
  Value f_value;
  Value g_value;
  /// |B^T B| if already known; the solver computes it otherwise.
  std::optional<double> gram_norm;

  std::size_t n1() const noexcept { return A.cols(); }
  std::size_t n2() const noexcept { return B.cols(); }
  std::size_t m() const noexcept { return A.rows(); }

  /// Throws InvalidArgument unless A, B and b agree and every oracle is set.
  void validate() const {
    detail::require(A.rows() == B.rows(), "SeparableProblem: A and B row counts differ");
    detail::require(b.size() == A.rows(), "SeparableProblem: b length != constraint rows");
    detail::require(static_cast<bool>(x_oracle) && static_cast<bool>(g_prox),
                    "SeparableProblem: missing oracle");
    detail::require(static_cast<bool>(f_value) && static_cast<bool>(g_value),
                    "SeparableProblem: missing objective evaluator");
  }

  /// A x + B y - b
  Vector constraint_residual(const Vector& x, const Vector& y) const {
    Vector r = A.apply(x);
    axpy(1.0, B.apply(y), r);
    axpy(-1.0, b, r);
    return r;
  }

  double objective(const Vector& x, const Vector& y) const { return f_value(x) + g_value(y); }
};

/// Full point w = (x, y, lambda). The pair (y, lambda) is the part the
/// iteration actually carries forward.
struct Iterate {
  Vector x;
  Vector y;
  Vector lambda;

  static Iterate zeros(const SeparableProblem& p) {
    return {Vector(p.n1()), Vector(p.n2()), Vector(p.m())};
  }

  bool operator==(const Iterate&) const = default;
};

/// Intermediate quantities of one subproblem sweep. lambda_tilde is the
/// multiplier predicted from the old y; lambda_hat the one from y_hat.
struct Candidate {
  Vector x_next;
  Vector y_hat;
  Vector lambda_tilde;
  Vector lambda_hat;
};

struct KktResiduals {
  double stationarity_x;  // |xi_f - A^T lambda|
  double stationarity_y;  // |xi_g - B^T lambda|
  double feasibility;     // |A x + B y - b|
};

/// Optimality residuals of w given caller-supplied subgradient witnesses
/// xi_f in df(x) and xi_g in dg(y).
inline KktResiduals kkt_residuals(const SeparableProblem& p, const Iterate& w,
                                  const Vector& subgrad_f_witness,
                                  const Vector& subgrad_g_witness) {
  detail::require(w.x.size() == p.n1() && w.y.size() == p.n2() && w.lambda.size() == p.m(),
                  "kkt_residuals: iterate dimension mismatch");
  detail::require(subgrad_f_witness.size() == p.n1() && subgrad_g_witness.size() == p.n2(),
                  "kkt_residuals: witness dimension mismatch");
  return {distance(subgrad_f_witness, p.A.apply_transpose(w.lambda)),
          distance(subgrad_g_witness, p.B.apply_transpose(w.lambda)),
          norm(p.constraint_residual(w.x, w.y))};
}

}  // namespace ladmm

#endif  // LADMM_PROBLEM_HPP_
