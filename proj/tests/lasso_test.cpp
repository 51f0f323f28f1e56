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


#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "ladmm/lasso.hpp"
#include "ladmm/solver.hpp"
#include "test_support.hpp"

namespace ladmm::lasso {
namespace {

TEST(GenerateInstanceTest, Deterministic) {
  EXPECT_EQ(generate_instance(12, 20, 5), generate_instance(12, 20, 5));
  EXPECT_NE(generate_instance(12, 20, 5), generate_instance(12, 20, 6));
}

TEST(GenerateInstanceTest, FollowsDocumentedDrawOrder) {
  const std::size_t m = 6, n = 4;
  const auto inst = generate_instance(m, n, 42);
  Rng64 rng(42);
  const Vector x0 = sparse_gauss_vector(rng, n, 0.25);
  const DenseMatrix A = gauss_matrix(rng, m, n);
  Vector b = A.apply(x0);
  axpy(std::sqrt(0.001), gauss_vector(rng, m), b);
  EXPECT_EQ(inst.A, A);
  EXPECT_EQ(inst.b, b);
  EXPECT_EQ(inst.seed, 42u);
}

TEST(GenerateInstanceTest, IotaRecomputed) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto inst = generate_instance(50, 80, seed);
    const Eigen::VectorXd atb = testing::to_eigen(inst.A).transpose() * testing::to_eigen(inst.b);
    const double expected = 0.1 * atb.cwiseAbs().maxCoeff();
    EXPECT_NEAR(inst.iota, expected, 1e-15 * expected);
  }
}

TEST(GenerateInstanceTest, RejectsEmptyDims) {
  EXPECT_THROW(generate_instance(0, 3, 1), InvalidArgument);
}

TEST(ToSeparableTest, Shapes) {
  const auto p = to_separable(generate_instance(7, 11, 1));
  EXPECT_EQ(p.n1(), 7u);
  EXPECT_EQ(p.n2(), 11u);
  EXPECT_EQ(p.m(), 7u);
}

TEST(ToSeparableTest, ConstraintVanishesOnGraph) {
  const auto inst = generate_instance(7, 11, 1);
  const auto p = to_separable(inst);
  const Vector y = testing::random_vector(3, 11);
  EXPECT_EQ(norm(p.constraint_residual(inst.A.apply(y), y)), 0.0);
}

TEST(ToSeparableTest, GramNormUnaffectedBySign) {
  const auto inst = generate_instance(30, 40, 2);
  const auto p = to_separable(inst);
  const double direct = spectral_norm_gram(inst.A);
  EXPECT_NEAR(spectral_norm_gram(p.B), direct, 1e-12 * direct);
  ASSERT_TRUE(p.gram_norm.has_value());
  EXPECT_NEAR(*p.gram_norm, direct, 1e-12 * direct);
}

TEST(LassoXUpdateTest, Examples) {
  const auto zero = testing::zero_instance(3, 3);
  EXPECT_EQ(lasso_x_update(zero, Vector(3), Vector(3), 1.0), Vector(3));

  const LassoInstance inst{DenseMatrix::identity(2), Vector{2.0, 0.0}, 0.1, 0};
  EXPECT_EQ(lasso_x_update(inst, Vector{0.0, 2.0}, Vector(2), 1.0), (Vector{1.0, 1.0}));
}

TEST(LassoXUpdateTest, GradientVanishes) {
  const auto inst = generate_instance(15, 25, 3);
  const Vector y = testing::random_vector(1, 25), lam = testing::random_vector(2, 15);
  const double beta = 0.6;
  const Vector x = lasso_x_update(inst, y, lam, beta);
  // d/dx [1/2 |x - b|^2 - lam^T x + beta/2 |x - A y|^2]
  const Vector grad = (x - inst.b) - lam + beta * (x - inst.A.apply(y));
  EXPECT_LE(norm_inf(grad), 1e-12);
}

TEST(SoftThresholdTest, Examples) {
  EXPECT_EQ(soft_threshold(Vector{3.0}, 1.0), Vector{2.0});
  EXPECT_EQ(soft_threshold(Vector{-0.5, 0.2}, 0.5), (Vector{0.0, 0.0}));
  EXPECT_EQ(soft_threshold(Vector{-3.0}, 1.0), Vector{-2.0});
  EXPECT_THROW(soft_threshold(Vector{1.0}, -0.1), InvalidArgument);
}

TEST(SoftThresholdTest, GridArgmin) {
  const double t = 0.7, h = 1e-4;
  for (int k = 0; k <= 60; ++k) {
    const double z = -3.0 + 0.1 * k;
    double best = INFINITY, arg = 0.0;
    for (int i = -40000; i <= 40000; ++i) {
      const double u = i * h;
      const double v = t * std::abs(u) + 0.5 * (u - z) * (u - z);
      if (v < best) best = v, arg = u;
    }
    EXPECT_NEAR(soft_threshold(Vector{z}, t)[0], arg, h) << "z = " << z;
  }
}

TEST(LassoObjectiveTest, Examples) {
  const auto inst = generate_instance(8, 10, 4);
  EXPECT_EQ(lasso_objective(inst, inst.b, Vector(10)), 0.0);
  EXPECT_DOUBLE_EQ(lasso_objective(inst, Vector(8), Vector(10)), 0.5 * squared_norm(inst.b));
  const Vector x = testing::random_vector(1, 8), y = testing::random_vector(2, 10);
  const double expected = 0.5 * (testing::to_eigen(x) - testing::to_eigen(inst.b)).squaredNorm() +
                          inst.iota * testing::to_eigen(y).lpNorm<1>();
  EXPECT_NEAR(lasso_objective(inst, x, y), expected, 1e-14 * expected);
}

TEST(KktWitnessTest, ZeroInstanceOptimum) {
  const auto inst = testing::zero_instance(4, 6);
  const Iterate w{Vector(4), Vector(6), Vector(4)};
  EXPECT_EQ(lasso_kkt_witnesses(inst, w).violation, 0.0);
}

TEST(KktWitnessTest, ViolationOutsideTheBall) {
  const LassoInstance inst{DenseMatrix::identity(3), Vector{1.0, 1.0, 1.0}, 0.5, 0};
  // A^T lam = lam, so |A^T lam|_inf = 2 iota.
  const Iterate w{Vector(3), Vector(3), Vector{1.0, -0.2, 0.3}};
  EXPECT_DOUBLE_EQ(lasso_kkt_witnesses(inst, w).violation, 0.5);
}

TEST(KktWitnessTest, HighAccuracySolve) {
  const auto inst = generate_instance(20, 30, 7);
  const auto p = to_separable(inst);
  auto cfg = SolverConfig::defaults(20);
  cfg.eps_abs = cfg.eps_rel = 1e-12;
  cfg.max_iter = 100000;
  const auto rec = solve_alg1(p, cfg, Iterate::zeros(p));
  ASSERT_EQ(rec.status, Status::kConverged);
  const auto wit = lasso_kkt_witnesses(inst, rec.final_iterate, 1e-12 * norm(rec.final_iterate.y));
  EXPECT_LE(wit.violation, 1e-4 * inst.iota);
}

TEST(InstanceFormatTest, RoundTrip) {
  const auto inst = generate_instance(10, 20, 1);
  const std::string text = format_instance(inst);
  EXPECT_EQ(text.rfind("ADMM-LASSO-V1\n10 20 1 ", 0), 0u);
  EXPECT_EQ(parse_instance(text), inst);
  EXPECT_EQ(format_instance(parse_instance(text)), text);
}

TEST(InstanceFormatTest, AcceptsCrlf) {
  const LassoInstance inst{DenseMatrix(1, 2, std::vector<double>{1.5, -2.0}), Vector{0.25}, 0.1, 9};
  EXPECT_EQ(parse_instance("ADMM-LASSO-V1\r\n1 2 9 0.1\r\n1.5 -2\r\n0.25\r\n"), inst);
}

TEST(InstanceFormatTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_instance(""), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V2\n1 1 0 0\n1\n1\n"), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V1\n1 1 0\n1\n1\n"), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V1\n0 1 0 0\n\n"), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V1\n1 2 0 0\n1\n1\n"), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V1\n1 1 0 0\n1x\n1\n"), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V1\n1 1 0 0\n1\n1\n2\n"), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V1\n1 1 0 0\nnan\n1\n"), ParseError);
  EXPECT_THROW(parse_instance("ADMM-LASSO-V1\n2 1 0 0\n1\n"), ParseError);
}

}  // namespace
}  // namespace ladmm::lasso
