// Copyright 2026 The aiik Authors
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

#include "aiik/pinv.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "aiik/errors.hpp"
#include "test_support.hpp"

namespace aiik {
namespace {

using testing::kPropertyInstances;
using testing::Rng;

double rel(const MatrixXd& a, const MatrixXd& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

// Minimum-norm solution of J q = V under the metric M from the KKT system
// [M J^T; J 0] [q; mu] = [0; V].
VectorXd kkt_solve(const MatrixXd& j, const MatrixXd& m, const VectorXd& v) {
  const Eigen::Index n = j.cols(), r = j.rows();
  MatrixXd k = MatrixXd::Zero(n + r, n + r);
  k.topLeftCorner(n, n) = m;
  k.topRightCorner(n, r) = j.transpose();
  k.bottomLeftCorner(r, n) = j;
  VectorXd rhs = VectorXd::Zero(n + r);
  rhs.tail(r) = v;
  return k.fullPivLu().solve(rhs).head(n);
}

TEST(Pseudoinverse, MoorePenroseConditions) {
  Rng rng(21);
  for (int k = 0; k < kPropertyInstances; ++k) {
    const int m = rng.integer(1, 6), n = rng.integer(1, 8);
    const int r = rng.integer(1, std::min(m, n));
    const MatrixXd j = rng.low_rank(m, n, r);
    const MatrixXd p = pseudoinverse(j);
    EXPECT_LE(rel(j * p * j, j), 1e-8);
    EXPECT_LE(rel(p * j * p, p), 1e-8);
    EXPECT_LE(rel((j * p).transpose(), j * p), 1e-8);
    EXPECT_LE(rel((p * j).transpose(), p * j), 1e-8);
  }
}

TEST(Pseudoinverse, FullRowRankIsRightInverse) {
  Rng rng(22);
  for (int k = 0; k < kPropertyInstances; ++k) {
    const MatrixXd j = rng.matrix(6, 7);
    const MatrixXd oracle = j.transpose() * (j * j.transpose()).inverse();
    EXPECT_LE(rel(pseudoinverse(j), oracle), 1e-10);
  }
}

TEST(Pseudoinverse, ZeroMatrix) {
  EXPECT_EQ(pseudoinverse(MatrixXd::Zero(3, 4)), MatrixXd::Zero(4, 3));
}

TEST(Pseudoinverse, SingularArmExample) {
  const double l2 = 0.7, l3 = 1.3;
  MatrixXd j = MatrixXd::Zero(3, 3);
  j(0, 1) = l2 + l3;
  j(0, 2) = l3;
  const double d = l3 * l3 + (l2 + l3) * (l2 + l3);
  MatrixXd expected = MatrixXd::Zero(3, 3);
  expected(1, 0) = (l2 + l3) / d;
  expected(2, 0) = l3 / d;
  EXPECT_LE((pseudoinverse(j) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Pseudoinverse, RejectsNonPositiveTolerance) {
  EXPECT_THROW(pseudoinverse(MatrixXd::Identity(2, 2), 0.0), ConfigError);
}

TEST(DampedPseudoinverse, MatchesNormalEquations) {
  Rng rng(23);
  for (int k = 0; k < kPropertyInstances; ++k) {
    const MatrixXd j = rng.matrix(6, 7);
    const double lambda = rng.uniform(1e-3, 1.0);
    const MatrixXd oracle =
        j.transpose() * (j * j.transpose() + lambda * lambda * MatrixXd::Identity(6, 6)).inverse();
    EXPECT_LE(rel(damped_pseudoinverse(j, lambda), oracle), 1e-10);
  }
}

TEST(DampedPseudoinverse, ConvergesQuadraticallyToPseudoinverse) {
  Rng rng(24);
  for (int k = 0; k < kPropertyInstances; ++k) {
    const int m = rng.integer(2, 6), n = rng.integer(2, 7);
    const MatrixXd j = rng.low_rank(m, n, rng.integer(1, std::min(m, n)));
    const MatrixXd p = pseudoinverse(j);
    const double e1 = (damped_pseudoinverse(j, 1e-3) - p).norm();
    const double e2 = (damped_pseudoinverse(j, 1e-4) - p).norm();
    // Halving lambda ten times over: error ratio ~ 100.
    EXPECT_GE(e1 / e2, 90.0);
    EXPECT_LE(e1 / e2, 110.0);
  }
}

TEST(DampedPseudoinverse, AnnihilatesLeftKernel) {
  Rng rng(25);
  for (int k = 0; k < kPropertyInstances; ++k) {
    const MatrixXd j = rng.low_rank(6, 7, 3);
    const MatrixXd kernel = kernel_basis(j);
    ASSERT_EQ(kernel.cols(), 3);
    for (double lambda : {1e-12, 1e-3, 1e-2, 1.0}) {
      EXPECT_LE((damped_pseudoinverse(j, lambda) * kernel).cwiseAbs().maxCoeff(), 1e-15);
    }
    EXPECT_LE((pseudoinverse(j) * kernel).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DampedPseudoinverse, UndampedCases) {
  const MatrixXd j = MatrixXd::Identity(2, 3);
  EXPECT_LE((damped_pseudoinverse(j, 0.0) - pseudoinverse(j)).norm(), 1e-15);
  MatrixXd deficient = MatrixXd::Zero(2, 3);
  deficient(0, 0) = 1.0;
  EXPECT_THROW(damped_pseudoinverse(deficient, 0.0), SingularUndamped);
  EXPECT_THROW(damped_pseudoinverse(j, -1.0), ConfigError);
}

TEST(WeightedRightPseudoinverse, TwoJointExample) {
  MatrixXd j(1, 2);
  j << 1, 1;
  const MatrixXd m = Eigen::Vector2d(1, 4).asDiagonal();
  const MatrixXd w = weighted_right_pseudoinverse(j, m);
  EXPECT_NEAR(w(0, 0), 0.8, 1e-15);
  EXPECT_NEAR(w(1, 0), 0.2, 1e-15);
}

TEST(WeightedRightPseudoinverse, MatchesKktSolution) {
  Rng rng(26);
  for (int k = 0; k < kPropertyInstances; ++k) {
    const MatrixXd j = rng.matrix(rng.integer(1, 6), 7);
    const MatrixXd a = rng.matrix(7, 7);
    const MatrixXd m = a * a.transpose() + 0.1 * MatrixXd::Identity(7, 7);
    const VectorXd v = rng.vector(j.rows());
    const VectorXd q = weighted_right_pseudoinverse(j, m) * v;
    EXPECT_LE((q - kkt_solve(j, m, v)).norm() / std::max(1.0, q.norm()), 1e-8);
    EXPECT_LE((j * q - v).norm(), 1e-9);
  }
}

TEST(WeightedRightPseudoinverse, IdentityMetricIsPseudoinverse) {
  Rng rng(27);
  const MatrixXd j = rng.matrix(4, 7);
  EXPECT_LE(rel(weighted_right_pseudoinverse(j, MatrixXd::Identity(7, 7)), pseudoinverse(j)),
            1e-12);
}

TEST(WeightedRightPseudoinverse, Errors) {
  const MatrixXd j = MatrixXd::Identity(2, 3);
  EXPECT_THROW(weighted_right_pseudoinverse(j, MatrixXd::Identity(2, 2)), DimensionMismatch);
  MatrixXd asym = MatrixXd::Identity(3, 3);
  asym(0, 1) = 0.5;
  EXPECT_THROW(weighted_right_pseudoinverse(j, asym), NotSPD);
  MatrixXd indefinite = MatrixXd::Identity(3, 3);
  indefinite(2, 2) = -1.0;
  EXPECT_THROW(weighted_right_pseudoinverse(j, indefinite), NotSPD);
  MatrixXd deficient = MatrixXd::Zero(2, 3);
  deficient(0, 0) = 1.0;
  EXPECT_THROW(weighted_right_pseudoinverse(deficient, MatrixXd::Identity(3, 3)), RankDeficient);
}

TEST(KernelBasis, OrthonormalLeftKernel) {
  Rng rng(28);
  for (int k = 0; k < kPropertyInstances; ++k) {
    const int m = rng.integer(1, 6), n = rng.integer(1, 8);
    const int r = rng.integer(1, std::min(m, n));
    const MatrixXd j = rng.low_rank(m, n, r);
    const MatrixXd kb = kernel_basis(j);
    ASSERT_EQ(kb.rows(), m);
    EXPECT_EQ(kb.cols(), m - r);
    EXPECT_LE((kb.transpose() * j).norm(), 1e-12 * std::max(1.0, j.norm()));
    EXPECT_LE((kb.transpose() * kb - MatrixXd::Identity(m - r, m - r)).norm(), 1e-12);
  }
}

TEST(KernelBasis, FullRowRankIsEmpty) {
  const MatrixXd kb = kernel_basis(MatrixXd::Identity(3, 5));
  EXPECT_EQ(kb.rows(), 3);
  EXPECT_EQ(kb.cols(), 0);
}

TEST(SvdFactors, RankUsesRelativeCutoff) {
  MatrixXd j = MatrixXd::Zero(3, 3);
  j(0, 0) = 1e6;
  j(1, 1) = 1e-1;
  j(2, 2) = 1e-4;
  EXPECT_EQ(svd_factors(j).rank(1e-8), 2);
  EXPECT_EQ(svd_factors(j).rank(1e-12), 3);
  EXPECT_EQ(svd_factors(MatrixXd::Zero(2, 2)).rank(1e-8), 0);
}

TEST(InverseKind, DispatchesToEachInverse) {
  Rng rng(29);
  const MatrixXd j = rng.matrix(3, 5);
  EXPECT_EQ(apply_inverse(PseudoInverse{}, j), pseudoinverse(j));
  EXPECT_EQ(apply_inverse(Damped::FromLambdaSquared(1e-4), j), damped_pseudoinverse(j, 1e-2));
  const MatrixXd m = MatrixXd::Identity(5, 5) * 2.0;
  EXPECT_EQ(apply_inverse(WeightedRight{m}, j), weighted_right_pseudoinverse(j, m));
  EXPECT_THROW(Damped::FromLambdaSquared(-1e-4), ConfigError);
}

}  // namespace
}  // namespace aiik
