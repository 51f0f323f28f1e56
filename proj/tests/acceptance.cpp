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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `--full-size` runs the slow 1000x1500
// benchmark check instead.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ladmm/bench.hpp"
#include "ladmm/diagnostics.hpp"
#include "ladmm/lasso.hpp"
#include "ladmm/solver.hpp"

namespace {

using namespace ladmm;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every adaptive run made by any criterion is funneled through here so the
// Step-2 guarantee can be asserted over all of them.
struct Step2Tally {
  long runs = 0;
  long steps = 0;
  long violations = 0;
} g_step2;

void tally(const RunRecord& rec, const DenseMatrix& B) {
  if (rec.algorithm != Algorithm::kAdaptiveRelaxed || rec.trajectory.empty()) return;
  ++g_step2.runs;
  g_step2.steps += static_cast<long>(rec.trajectory.size());
  g_step2.violations += diagnostics::count_step2_violations(rec, B);
}

RunRecord traced(const SeparableProblem& p, SolverConfig cfg, Algorithm alg) {
  cfg.keep_trajectory = true;
  RunRecord rec = solve(p, cfg, Iterate::zeros(p), alg);
  tally(rec, p.B);
  return rec;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome benchmark_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  bench::BenchSpec spec;
  spec.sizes = {{200, 300}, {500, 750}};
  spec.seeds = bench::parse_seeds("1..10");
  spec.algorithms = {Algorithm::kAdaptiveRelaxed, Algorithm::kOladmm};
  const auto res = bench::run(spec);
  const double secs = elapsed_s(t0);

  bool medians_ok = true;
  std::string meds;
  for (const auto& size : spec.sizes) {
    double a = 0, o = 0;
    for (const auto& row : res.rows) {
      if (!(row.size == size)) continue;
      if (row.failed) medians_ok = false;
      (row.algorithm == Algorithm::kAdaptiveRelaxed ? a : o) = row.iter;
    }
    medians_ok = medians_ok && a < o;
    meds += fmt("%zux%zu median %g vs %g; ", size.m, size.n, a, o);
  }
  int wins = 0, cells = 0;
  for (const auto& size : spec.sizes) {
    for (auto seed : spec.seeds) {
      int a = -1, o = -1;
      for (const auto& c : res.cells) {
        if (!(c.size == size) || c.seed != seed || !c.ok()) continue;
        (c.algorithm == Algorithm::kAdaptiveRelaxed ? a : o) = c.record->iter();
      }
      ++cells;
      if (a >= 0 && o >= 0 && a < o) ++wins;
    }
  }
  const bool frac_ok = wins * 10 >= cells * 9;
  return {medians_ok && frac_ok && secs < 60.0,
          meds + fmt("alg1 < oladmm in %d/%d size-seed cells; %.1f s", wins, cells, secs)};
}

Outcome termination_correctness() {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> dim(5, 300);
  int converged = 0, bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t m = dim(gen), n = dim(gen);
    const auto inst = lasso::generate_instance(m, n, 1000 + i);
    const auto p = lasso::to_separable(inst);
    for (Algorithm alg : {Algorithm::kAdaptiveRelaxed, Algorithm::kOladmm}) {
      const auto rec = traced(p, SolverConfig::defaults(m), alg);
      if (rec.status != Status::kConverged) continue;
      ++converged;
      // Recompute p and the tolerances from the final iterate directly.
      const auto& w = rec.final_iterate;
      const double prim = norm(w.x - inst.A.apply(w.y));
      const double base = std::sqrt(static_cast<double>(n)) * 1e-4;
      const double eps_pri = base + 1e-2 * std::max(norm(w.x), norm(inst.A.apply(w.y)));
      const double eps_dual = base + 1e-2 * norm(w.y);
      const double d = rec.final_d();
      if (!(prim <= eps_pri && d <= eps_dual)) ++bad;
      worst = std::max({worst, prim / eps_pri, d / eps_dual});
    }
  }
  return {converged > 0 && bad == 0,
          fmt("%d converged runs on 50 instances, %d violate the stopping rule, max ratio %.3f", converged, bad, worst)};
}

Outcome prediction_correction() {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::size_t> dim(10, 120);
  std::uniform_real_distribution<double> sig(0.5, 1.5);
  double worst = 0.0;
  long steps = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t m = dim(gen), n = dim(gen);
    const auto p = lasso::to_separable(lasso::generate_instance(m, n, 500 + i));
    auto cfg = SolverConfig::defaults(m);
    cfg.set_sigma(sig(gen));
    const auto rec = traced(p, cfg, Algorithm::kAdaptiveRelaxed);
    worst = std::max(worst, diagnostics::max_prediction_correction(rec, p.B));
    steps += static_cast<long>(rec.trajectory.size());
  }
  return {worst <= 1e-10, fmt("max residual %.3e over %ld iterations of 20 runs", worst, steps)};
}

Outcome matrix_identity() {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = dim(gen), n2 = dim(gen);
    std::vector<double> vals(m * n2);
    for (auto& v : vals) v = 3.0 * unit(gen);
    const DenseMatrix B(m, n2, vals);
    const double beta = std::exp(2.0 * unit(gen));
    const double sigma = 1.0 + 0.99 * unit(gen);
    const double tau = std::exp(3.0 * unit(gen));
    const double r = std::exp(2.0 * unit(gen));
    const auto mats = diagnostics::build_matrices(B, beta, sigma, tau, r);

    // Oracle: assemble Q, H, M independently in Eigen.
    const std::size_t d = m + n2;
    Eigen::MatrixXd Bm(m, n2), Q = Eigen::MatrixXd::Zero(d, d), M = Eigen::MatrixXd::Zero(d, d),
                    H = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n2; ++j) Bm(i, j) = B(i, j);
    Q.topLeftCorner(n2, n2) = tau * r * beta * Eigen::MatrixXd::Identity(n2, n2);
    Q.bottomLeftCorner(m, n2) = -Bm;
    Q.bottomRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m) / beta;
    M.topLeftCorner(n2, n2) = sigma * Eigen::MatrixXd::Identity(n2, n2);
    M.bottomLeftCorner(m, n2) = -sigma * beta * Bm;
    M.bottomRightCorner(m, m) = sigma * Eigen::MatrixXd::Identity(m, m);
    H.topLeftCorner(n2, n2) = tau * r * beta / sigma * Eigen::MatrixXd::Identity(n2, n2);
    H.bottomRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m) / (sigma * beta);

    double lib_gap = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        lib_gap = std::max({lib_gap, std::abs(mats.Q(i, j) - Q(i, j)), std::abs(mats.H(i, j) - H(i, j)),
                            std::abs(mats.M(i, j) - M(i, j))});
    const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    const double oracle = (Q - H * M).cwiseAbs().maxCoeff() / scale;
    worst = std::max({worst, oracle, diagnostics::hm_identity_residual(mats), lib_gap / scale});
  }
  return {worst <= 1e-12, fmt("max relative |Q - HM| %.3e over 100 tuples", worst)};
}

Outcome descent_certificate() {
  int passed = 0, total = 0, ctrl_passed = 0, ctrl_total = 0;
  std::mt19937_64 shuffle_gen(99);
  for (int i = 0; i < 10; ++i) {
    const auto p = lasso::to_separable(lasso::generate_instance(50, 80, 300 + i));
    auto ref_cfg = SolverConfig::defaults(50);
    ref_cfg.eps_abs = ref_cfg.eps_rel = 1e-10;
    ref_cfg.max_iter = 100000;
    const auto ref = solve_oladmm(p, ref_cfg, Iterate::zeros(p));
    if (ref.status != Status::kConverged) return {false, fmt("reference run %d did not converge", i)};
    const BasicVariables v_star{ref.final_iterate.y, ref.final_iterate.lambda};

    const auto cfg = SolverConfig::defaults(50);
    const auto rec = traced(p, cfg, Algorithm::kAdaptiveRelaxed);
    auto hist = diagnostics::history_from(rec);
    const auto rep = diagnostics::check_descent(hist, v_star, cfg, p.B, rec.r, 1e-8);
    passed += rep.passed;
    total += rep.total;

    std::shuffle(hist.v.begin(), hist.v.end(), shuffle_gen);
    const auto ctrl = diagnostics::check_descent(hist, v_star, cfg, p.B, rec.r, 1e-8);
    ctrl_passed += ctrl.passed;
    ctrl_total += ctrl.total;
  }
  const double frac = total ? static_cast<double>(passed) / total : 0.0;
  const double ctrl_frac = ctrl_total ? static_cast<double>(ctrl_passed) / ctrl_total : 1.0;
  return {frac >= 0.99 && ctrl_frac < 0.9,
          fmt("pass fraction %.4f (%d/%d); shuffled control %.4f (%d/%d)", frac, passed, total, ctrl_frac,
              ctrl_passed, ctrl_total)};
}

// min 1/2 x'Px + p'x + 1/2 y'Ry + r'y  s.t.  Ax + By = b, all blocks 2x2.
Outcome kkt_oracle() {
  Eigen::Matrix2d P, R, A, B;
  P << 3.0, 0.5, 0.5, 2.0;
  R << 1.5, -0.3, -0.3, 1.0;
  A << 1.0, 0.4, -0.2, 1.3;
  B << 0.7, -0.5, 0.6, 1.1;
  const Eigen::Vector2d pv(1.0, -2.0), rv(-0.5, 0.8), bv(1.2, -0.7);
  auto to_vec = [](const Eigen::Vector2d& e) { return Vector{e(0), e(1)}; };
  auto to_eig = [](const Vector& v) { return Eigen::Vector2d(v[0], v[1]); };
  auto to_mat = [](const Eigen::Matrix2d& e) { return DenseMatrix(2, 2, {e(0, 0), e(0, 1), e(1, 0), e(1, 1)}); };

  SeparableProblem prob{to_mat(A), to_mat(B), to_vec(bv),
                        [=](const Vector& y, const Vector& lam, double beta) {
                          const Eigen::Matrix2d lhs = P + beta * A.transpose() * A;
                          const Eigen::Vector2d rhs =
                              A.transpose() * to_eig(lam) - pv - beta * A.transpose() * (B * to_eig(y) - bv);
                          return to_vec(lhs.ldlt().solve(rhs));
                        },
                        [=](const Vector& z, double c) {
                          const Eigen::Matrix2d lhs = R + c * Eigen::Matrix2d::Identity();
                          return to_vec(lhs.ldlt().solve(c * to_eig(z) - rv));
                        },
                        [=](const Vector& x) { return 0.5 * to_eig(x).dot(P * to_eig(x)) + pv.dot(to_eig(x)); },
                        [=](const Vector& y) { return 0.5 * to_eig(y).dot(R * to_eig(y)) + rv.dot(to_eig(y)); },
                        std::nullopt};

  Eigen::Matrix<double, 6, 6> K = Eigen::Matrix<double, 6, 6>::Zero();
  K.block<2, 2>(0, 0) = P;
  K.block<2, 2>(0, 4) = -A.transpose();
  K.block<2, 2>(2, 2) = R;
  K.block<2, 2>(2, 4) = -B.transpose();
  K.block<2, 2>(4, 0) = A;
  K.block<2, 2>(4, 2) = B;
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << -pv, -rv, bv;
  const Eigen::Matrix<double, 6, 1> sol = K.fullPivLu().solve(rhs);

  auto cfg = SolverConfig::defaults(2);
  cfg.eps_abs = cfg.eps_rel = 1e-12;
  cfg.max_iter = 100000;
  const auto rec = traced(prob, cfg, Algorithm::kAdaptiveRelaxed);
  const auto& w = rec.final_iterate;
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    err = std::max({err, std::abs(w.x[i] - sol(i)), std::abs(w.y[i] - sol(2 + i)),
                    std::abs(w.lambda[i] - sol(4 + i))});
  }
  return {rec.status == Status::kConverged && err <= 1e-4,
          fmt("%s after %d iterations, max |w - w_kkt| %.3e", std::string(to_string(rec.status)).c_str(), rec.iter(), err)};
}

Outcome soft_threshold_exactness() {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> zd(-5.0, 5.0), td(0.0, 2.0);
  constexpr double h = 1e-4, lo = -6.0;
  constexpr int points = 120001;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double z = zd(gen), t = td(gen);
    double best_u = lo, best = INFINITY;
    for (int k = 0; k < points; ++k) {
      const double u = lo + k * h;
      const double val = 0.5 * (u - z) * (u - z) + t * std::abs(u);
      if (val < best) best = val, best_u = u;
    }
    const double got = lasso::soft_threshold(Vector{z}, t)[0];
    worst = std::max(worst, std::abs(got - best_u));
  }
  return {worst <= h, fmt("max |prox - grid argmin| %.3e on 1000 scalars (grid %.0e)", worst, h)};
}

Outcome sigma_band() {
  int ok = 0, total = 0;
  std::string iters;
  for (double sigma : {0.6, 0.9, 1.4}) {
    iters += fmt("sigma %.1f:", sigma);
    for (int i = 0; i < 5; ++i) {
      const auto p = lasso::to_separable(lasso::generate_instance(100, 150, 700 + i));
      auto cfg = SolverConfig::defaults(100);
      cfg.set_sigma(sigma);
      const auto rec = traced(p, cfg, Algorithm::kAdaptiveRelaxed);
      ++total;
      if (rec.status == Status::kConverged) ++ok;
      iters += fmt(" %d", rec.iter());
    }
    iters += "; ";
  }
  return {ok == total, fmt("%d/%d converged; ", ok, total) + iters};
}

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

bool same_logs(const RunRecord& a, const RunRecord& b) {
  if (a.iterations.size() != b.iterations.size()) return false;
  for (std::size_t i = 0; i < a.iterations.size(); ++i) {
    const auto &x = a.iterations[i], &y = b.iterations[i];
    if (x.k != y.k || x.backtracks != y.backtracks) return false;
    for (auto f : {&IterationLog::tau, &IterationLog::p, &IterationLog::d, &IterationLog::theta1,
                   &IterationLog::theta2, &IterationLog::objective, &IterationLog::eps_pri, &IterationLog::eps_dual})
      if (bits(x.*f) != bits(y.*f)) return false;
  }
  return true;
}

Outcome determinism() {
  int same = 0;
  const int runs = 4;
  for (int i = 0; i < runs; ++i) {
    const auto inst = lasso::generate_instance(120, 180, 900 + i);
    const auto again = lasso::generate_instance(120, 180, 900 + i);
    const auto alg = i % 2 ? Algorithm::kOladmm : Algorithm::kAdaptiveRelaxed;
    const auto a = traced(lasso::to_separable(inst), SolverConfig::defaults(120), alg);
    const auto b = traced(lasso::to_separable(again), SolverConfig::defaults(120), alg);
    bool eq = inst == again && same_logs(a, b) && a.final_iterate == b.final_iterate &&
              a.trajectory.size() == b.trajectory.size();
    for (std::size_t k = 0; eq && k < a.trajectory.size(); ++k) {
      const auto &s = a.trajectory[k], &t = b.trajectory[k];
      eq = s.y == t.y && s.lambda == t.lambda && s.y_next == t.y_next && s.lambda_next == t.lambda_next &&
           s.y_hat == t.y_hat && s.lambda_tilde == t.lambda_tilde &&
           bits(s.tau) == bits(t.tau);
    }
    if (eq) ++same;
  }
  return {same == runs, fmt("%d/%d repeated runs bitwise identical", same, runs)};
}

Outcome step2_guarantee() {
  return {g_step2.runs > 0 && g_step2.violations == 0,
          fmt("%ld violations over %ld accepted steps in %ld adaptive runs", g_step2.violations, g_step2.steps,
              g_step2.runs)};
}

Outcome full_size_benchmark() {
  bench::BenchSpec spec;
  spec.sizes = {{1000, 1500}};
  spec.seeds = bench::parse_seeds("1..10");
  spec.algorithms = {Algorithm::kAdaptiveRelaxed, Algorithm::kOladmm};
  const auto res = bench::run(spec);
  bool in_band = true;
  for (const auto& c : res.cells) {
    if (!c.ok()) {
      in_band = false;
      continue;
    }
    const int it = c.record->iter();
    in_band = in_band && (c.algorithm == Algorithm::kAdaptiveRelaxed ? (it >= 5 && it <= 40) : (it >= 8 && it <= 50));
  }
  double a = 0, o = 0;
  for (const auto& row : res.rows) (row.algorithm == Algorithm::kAdaptiveRelaxed ? a : o) = row.iter;
  return {in_band && a < o, fmt("median iterations alg1 %g, oladmm %g; all runs in band: %s", a, o, in_band ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<const char*, std::function<Outcome()>>> criteria;
  if (argc > 1 && std::strcmp(argv[1], "--full-size") == 0) {
    criteria = {{"benchmark_full_size", full_size_benchmark}};
  } else {
    criteria = {{"benchmark_ordering", benchmark_ordering},
                {"termination_correctness", termination_correctness},
                {"prediction_correction", prediction_correction},
                {"matrix_identity", matrix_identity},
                {"descent_certificate", descent_certificate},
                {"kkt_oracle", kkt_oracle},
                {"soft_threshold_exactness", soft_threshold_exactness},
                {"sigma_band", sigma_band},
                {"determinism", determinism},
                {"step2_guarantee", step2_guarantee}};
  }
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome out{false, ""};
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failed;
    std::printf("%s %s: %s\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
