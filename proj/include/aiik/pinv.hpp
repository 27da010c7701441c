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

// SVD-based inverses of (possibly rank-deficient) Jacobians.

#ifndef AIIK_PINV_HPP_
#define AIIK_PINV_HPP_

#include <algorithm>
#include <cmath>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SVD>

#include "aiik/errors.hpp"

namespace aiik {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;

/// Default relative singular-value cut-off.
inline constexpr double kDefaultRankTol = 1e-8;

/// J = U diag(singular_values) V^T with full square U and V.
template <typename Scalar>
struct SvdFactors {
  MatrixX<Scalar> U;
  VectorX<Scalar> singular_values;  // descending, min(m, n) entries
  MatrixX<Scalar> V;

  /// Number of singular values above tol * sigma_max.
  Eigen::Index rank(Scalar tol) const {
    if (singular_values.size() == 0) return 0;
    const Scalar cut = tol * singular_values(0);
    Eigen::Index r = 0;
    while (r < singular_values.size() && singular_values(r) > cut) ++r;
    return r;
  }
};

template <typename Derived>
SvdFactors<typename Derived::Scalar> svd_factors(const Eigen::MatrixBase<Derived>& j) {
  using Scalar = typename Derived::Scalar;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(j.derived(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

namespace detail {

// V diag(g(sigma_i)) U^T over the first `rank` singular triplets.
template <typename Scalar, typename Gain>
MatrixX<Scalar> svd_inverse(const SvdFactors<Scalar>& f, Eigen::Index rank, Gain gain) {
  const Eigen::Index m = f.U.rows();
  const Eigen::Index n = f.V.rows();
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(n, m);
  for (Eigen::Index i = 0; i < rank; ++i) {
    out.noalias() += gain(f.singular_values(i)) * f.V.col(i) * f.U.col(i).transpose();
  }
  return out;
}

}  // namespace detail

/// Moore-Penrose inverse V S^+ U^T; singular values at or below
/// tol * sigma_max are treated as zero.
template <typename Derived>
MatrixX<typename Derived::Scalar> pseudoinverse(const Eigen::MatrixBase<Derived>& j,
                                                typename Derived::Scalar tol = kDefaultRankTol) {
  using Scalar = typename Derived::Scalar;
  if (!(tol > Scalar(0))) throw ConfigError("pseudoinverse: tol must be positive");
  const auto f = svd_factors(j);
  return detail::svd_inverse(f, f.rank(tol), [](Scalar s) { return Scalar(1) / s; });
}

/// Damped pseudoinverse J^T (J J^T + lambda^2 I)^-1, evaluated in the SVD
/// form V diag(s / (s^2 + lambda^2)) U^T. Singular values at or below
/// tol * sigma_max are dropped, so left-kernel directions map to zero
/// exactly for every lambda. lambda = 0 requires full row rank.
template <typename Derived>
MatrixX<typename Derived::Scalar> damped_pseudoinverse(
    const Eigen::MatrixBase<Derived>& j, typename Derived::Scalar lambda,
    typename Derived::Scalar tol = kDefaultRankTol) {
  using Scalar = typename Derived::Scalar;
  if (!(lambda >= Scalar(0))) throw ConfigError("damped_pseudoinverse: lambda must be >= 0");
  const auto f = svd_factors(j);
  const Eigen::Index r = f.rank(tol);
  if (lambda == Scalar(0) && r < j.rows()) {
    throw SingularUndamped("damped_pseudoinverse: lambda = 0 on a row-rank-deficient matrix");
  }
  const Scalar l2 = lambda * lambda;
  return detail::svd_inverse(f, r, [l2](Scalar s) { return s / (s * s + l2); });
}

/// M^-1 J^T (J M^-1 J^T)^-1: the joint velocity of least M-weighted norm
/// among all solutions of J qdot = V.
template <typename DerivedJ, typename DerivedM>
MatrixX<typename DerivedJ::Scalar> weighted_right_pseudoinverse(
    const Eigen::MatrixBase<DerivedJ>& j, const Eigen::MatrixBase<DerivedM>& weight,
    typename DerivedJ::Scalar tol = kDefaultRankTol) {
  using Scalar = typename DerivedJ::Scalar;
  if (weight.rows() != j.cols() || weight.cols() != j.cols()) {
    throw DimensionMismatch("weighted_right_pseudoinverse: weight must be n x n");
  }
  const Scalar scale = std::max(weight.cwiseAbs().maxCoeff(), Scalar(1));
  if ((weight - weight.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale) {
    throw NotSPD("weighted_right_pseudoinverse: weight is not symmetric");
  }
  const Eigen::LLT<MatrixX<Scalar>> llt(weight);
  if (llt.info() != Eigen::Success) {
    throw NotSPD("weighted_right_pseudoinverse: weight is not positive definite");
  }
  if (svd_factors(j).rank(tol) < j.rows()) {
    throw RankDeficient("weighted_right_pseudoinverse: J is not of full row rank");
  }
  const MatrixX<Scalar> minv_jt = llt.solve(j.transpose());
  const MatrixX<Scalar> gram = j * minv_jt;
  return minv_jt * gram.llt().solve(MatrixX<Scalar>::Identity(j.rows(), j.rows()));
}

/// Orthonormal basis (as columns) of the left null space of J: the twists
/// that no joint velocity can produce. Empty (m x 0) for full row rank.
template <typename Derived>
MatrixX<typename Derived::Scalar> kernel_basis(const Eigen::MatrixBase<Derived>& j,
                                               typename Derived::Scalar tol = kDefaultRankTol) {
  const auto f = svd_factors(j);
  const Eigen::Index r = f.rank(tol);
  return f.U.rightCols(j.rows() - r);
}

struct PseudoInverse {
  double tol = kDefaultRankTol;
};
struct Damped {
  double lambda = 0.0;
  static Damped FromLambdaSquared(double lambda_sq);
};
struct WeightedRight {
  MatrixXd weight;
};

inline Damped Damped::FromLambdaSquared(double lambda_sq) {
  if (!(lambda_sq >= 0.0)) throw ConfigError("lambda^2 must be >= 0");
  return Damped{std::sqrt(lambda_sq)};
}

using InverseKind = std::variant<PseudoInverse, Damped, WeightedRight>;

template <typename Derived>
MatrixXd apply_inverse(const InverseKind& kind, const Eigen::MatrixBase<Derived>& j) {
  struct Visitor {
    const Eigen::MatrixBase<Derived>& j;
    MatrixXd operator()(const PseudoInverse& k) const { return pseudoinverse(j, k.tol); }
    MatrixXd operator()(const Damped& k) const { return damped_pseudoinverse(j, k.lambda); }
    MatrixXd operator()(const WeightedRight& k) const {
      return weighted_right_pseudoinverse(j, k.weight);
    }
  };
  return std::visit(Visitor{j}, kind);
}

}  // namespace aiik

#endif  // AIIK_PINV_HPP_
