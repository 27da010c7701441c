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

// Singular-motion bases, transversal perturbations and Lie-bracket
// expansions of the Jacobian around a singular configuration.

#ifndef AIIK_TANGENT_HPP_
#define AIIK_TANGENT_HPP_

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "aiik/errors.hpp"
#include "aiik/kinematics.hpp"
#include "aiik/lie_group.hpp"
#include "aiik/pinv.hpp"

namespace aiik {

/// Orthonormal basis S of the joint-space directions that stay singular
/// through a given configuration, i.e. the intersection of the tangent
/// cone's component spaces.
template <typename Scalar>
struct SingularBasis {
  std::string name;
  JointVector<Scalar> config;
  MatrixX<Scalar> basis;                         // n x s, orthonormal columns
  std::vector<MatrixX<Scalar>> component_spaces;  // each n x k_i, orthonormal columns
};

using SingularBasisd = SingularBasis<double>;

template <typename Scalar>
struct Perturbation {
  JointVector<Scalar> epsilon;
  JointVector<Scalar> x;
};

namespace detail {

template <typename Derived>
bool has_orthonormal_columns(const Eigen::MatrixBase<Derived>& s, double tol) {
  if (s.cols() == 0) return true;
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> gram = s.transpose() * s;
  return (gram - MatrixX<Scalar>::Identity(s.cols(), s.cols())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

/// P = I - S S^T, the orthogonal projector onto the complement of span S.
template <typename Derived>
MatrixX<typename Derived::Scalar> transversal_projector(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  if (!detail::has_orthonormal_columns(s, 1e-10)) {
    throw NotOrthonormal("transversal_projector: basis columns are not orthonormal");
  }
  const Eigen::Index n = s.rows();
  MatrixX<Scalar> p = MatrixX<Scalar>::Identity(n, n);
  if (s.cols() > 0) p.noalias() -= s * s.transpose();
  return p;
}

template <typename DerivedS, typename DerivedE>
Perturbation<typename DerivedS::Scalar> regularizing_perturbation(
    const Eigen::MatrixBase<DerivedS>& s, const Eigen::MatrixBase<DerivedE>& epsilon) {
  if (epsilon.size() != s.rows()) {
    throw DimensionMismatch("regularizing_perturbation: epsilon has " +
                            std::to_string(epsilon.size()) + " entries, basis has " +
                            std::to_string(s.rows()) + " rows");
  }
  Perturbation<typename DerivedS::Scalar> out;
  out.epsilon = epsilon;
  out.x = transversal_projector(s) * epsilon;
  if (out.x.norm() < 1e-12 && epsilon.norm() > 0) {
    throw DegeneratePerturbation(
        "regularizing_perturbation: epsilon lies inside the singular-motion span");
  }
  return out;
}

/// Dimension of the intersection of subspaces given by orthonormal bases.
template <typename Scalar>
Eigen::Index intersection_dimension(const std::vector<MatrixX<Scalar>>& spaces, Eigen::Index n,
                                    Scalar tol = Scalar(1e-10)) {
  if (spaces.empty()) return n;
  // x is in every space iff sum_i x^T (I - P_i) x = 0.
  MatrixX<Scalar> defect = MatrixX<Scalar>::Zero(n, n);
  for (const auto& k : spaces) {
    defect += MatrixX<Scalar>::Identity(n, n) - k * k.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(defect);
  return (eig.eigenvalues().array() < tol).count();
}

/// Checks the structural invariants of a singular basis against a model.
/// Throws NotOrthonormal / InvalidBasis / DimensionMismatch.
template <typename Scalar>
void validate_singular_basis(const RobotModel<Scalar>& model, const SingularBasis<Scalar>& b) {
  const Eigen::Index n = model.dof();
  const std::string where = "singularity '" + b.name + "': ";
  model.check_config(b.config);
  if (b.basis.rows() != n) throw DimensionMismatch(where + "basis vectors must have n entries");
  if (b.basis.cols() >= n) throw InvalidBasis(where + "basis must have fewer than n vectors");
  if (!detail::has_orthonormal_columns(b.basis, 1e-10)) {
    throw NotOrthonormal(where + "basis vectors are not orthonormal");
  }
  for (std::size_t i = 0; i < b.component_spaces.size(); ++i) {
    const auto& k = b.component_spaces[i];
    const std::string which = where + "component " + std::to_string(i + 1) + ": ";
    if (k.rows() != n) throw DimensionMismatch(which + "vectors must have n entries");
    if (!detail::has_orthonormal_columns(k, 1e-10)) {
      throw NotOrthonormal(which + "vectors are not orthonormal");
    }
    for (Eigen::Index c = 0; c < b.basis.cols(); ++c) {
      const VectorX<Scalar> s = b.basis.col(c);
      if ((s - k * (k.transpose() * s)).norm() > Scalar(1e-10)) {
        throw InvalidBasis(which + "basis vector " + std::to_string(c + 1) +
                           " is not contained in the component space");
      }
    }
  }
  if (!b.component_spaces.empty() &&
      intersection_dimension(b.component_spaces, n) != b.basis.cols()) {
    throw InvalidBasis(where + "basis does not span the intersection of the component spaces");
  }
}

/// Frame convention for the Jacobian expansion around q0.
enum class DifferentialFrame {
  // Screws in the fixed frame that coincides with the end-effector frame
  // at q0. Column i depends on x_j for j < i:  dJ_i = sum_{j<i} x_j [J_j, J_i].
  kReference,
  // Screws in the moving end-effector frame (the solver's Jacobian).
  // Column i depends on x_j for j > i:  dJ_i = sum_{j>i} x_j [J_i, J_j].
  kEndEffector,
};

namespace detail {

template <typename Scalar, typename Derived>
void check_expansion_args(const RobotModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != model.dof()) {
    throw DimensionMismatch("perturbation has " + std::to_string(x.size()) + " entries, model has " +
                            std::to_string(model.dof()) + " joints");
  }
}

}  // namespace detail

/// First differential dJ(q0, x) of the full 6 x n Jacobian.
template <typename Scalar, typename DerivedQ, typename DerivedX>
MatrixX<Scalar> jacobian_first_differential(const RobotModel<Scalar>& model,
                                            const Eigen::MatrixBase<DerivedQ>& q0,
                                            const Eigen::MatrixBase<DerivedX>& x,
                                            DifferentialFrame frame = DifferentialFrame::kReference) {
  detail::check_expansion_args(model, x);
  const MatrixX<Scalar> j0 = geometric_jacobian(model, q0, JacobianRows::kFull);
  const Eigen::Index n = model.dof();
  MatrixX<Scalar> dj = MatrixX<Scalar>::Zero(6, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (frame == DifferentialFrame::kReference) {
      for (Eigen::Index j = 0; j < i; ++j) dj.col(i) += x(j) * lie_bracket(j0.col(j), j0.col(i));
    } else {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        dj.col(i) += x(j) * lie_bracket(j0.col(i), j0.col(j));
      }
    }
  }
  return dj;
}

/// Second differential d^2J(q0, x); a quadratic form in x built from nested
/// brackets. The Taylor term is d^2J / 2.
template <typename Scalar, typename DerivedQ, typename DerivedX>
MatrixX<Scalar> jacobian_second_differential(
    const RobotModel<Scalar>& model, const Eigen::MatrixBase<DerivedQ>& q0,
    const Eigen::MatrixBase<DerivedX>& x, DifferentialFrame frame = DifferentialFrame::kReference) {
  detail::check_expansion_args(model, x);
  const MatrixX<Scalar> j0 = geometric_jacobian(model, q0, JacobianRows::kFull);
  const Eigen::Index n = model.dof();
  MatrixX<Scalar> d2 = MatrixX<Scalar>::Zero(6, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Twist<Scalar> ji = j0.col(i);
    Twist<Scalar> half = Twist<Scalar>::Zero();
    if (frame == DifferentialFrame::kReference) {
      // exp(x_1 ad_1) ... exp(x_{i-1} ad_{i-1}) J_i
      for (Eigen::Index j = 0; j < i; ++j) {
        const Twist<Scalar> inner = lie_bracket(j0.col(j), ji);
        half += Scalar(0.5) * x(j) * x(j) * lie_bracket(j0.col(j), inner);
        for (Eigen::Index k = j + 1; k < i; ++k) {
          half += x(j) * x(k) * lie_bracket(j0.col(j), lie_bracket(j0.col(k), ji));
        }
      }
    } else {
      // exp(-x_n ad_n) ... exp(-x_{i+1} ad_{i+1}) J_i
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const Twist<Scalar> inner = lie_bracket(j0.col(j), ji);
        half += Scalar(0.5) * x(j) * x(j) * lie_bracket(j0.col(j), inner);
        for (Eigen::Index k = j + 1; k < n; ++k) {
          half += x(j) * x(k) * lie_bracket(j0.col(k), inner);
        }
      }
    }
    d2.col(i) = Scalar(2) * half;
  }
  return d2;
}

/// J(q0) + dJ + d^2J/2 + ..., truncated after `order` (0, 1 or 2). 6 x n.
template <typename Scalar, typename DerivedQ, typename DerivedX>
MatrixX<Scalar> prolonged_jacobian(const RobotModel<Scalar>& model,
                                   const Eigen::MatrixBase<DerivedQ>& q0,
                                   const Eigen::MatrixBase<DerivedX>& x, int order,
                                   DifferentialFrame frame = DifferentialFrame::kReference) {
  if (order < 0 || order > 2) {
    throw UnsupportedOrder("prolonged_jacobian: order " + std::to_string(order) +
                           " not supported (0, 1 or 2)");
  }
  detail::check_expansion_args(model, x);
  MatrixX<Scalar> j = geometric_jacobian(model, q0, JacobianRows::kFull);
  if (order >= 1) j += jacobian_first_differential(model, q0, x, frame);
  if (order >= 2) j += Scalar(0.5) * jacobian_second_differential(model, q0, x, frame);
  return j;
}

struct ClosureResult {
  int order = 0;
  std::vector<int> dims;  // task-space span dimension per bracket level
  bool converged = true;  // false if still growing at max_order
};

/// Bracket level at which span(J_i, [J_i, J_j], [J_i, [J_j, J_k]], ...)
/// stops growing or fills the task space. Brackets are taken between full
/// twists; dims count the span after projection onto the task rows.
template <typename Scalar, typename Derived>
ClosureResult closure_order(const RobotModel<Scalar>& model, const Eigen::MatrixBase<Derived>& q0,
                            int max_order, Scalar tol = Scalar(kDefaultRankTol)) {
  if (max_order < 1) throw ConfigError("closure_order: max_order must be >= 1");
  const MatrixX<Scalar> j0 = geometric_jacobian(model, q0, JacobianRows::kFull);
  const Eigen::Index n = model.dof();
  const Eigen::Index m = model.task_dim();

  auto rank_of = [tol](const MatrixX<Scalar>& vectors) {
    if (vectors.cols() == 0) return Eigen::Index{0};
    const Scalar scale = std::max(vectors.cwiseAbs().maxCoeff(), Scalar(1));
    Eigen::JacobiSVD<MatrixX<Scalar>> svd(vectors);
    return (svd.singularValues().array() > tol * scale).count();
  };

  MatrixX<Scalar> all = j0;
  MatrixX<Scalar> frontier = j0;
  ClosureResult result;
  result.dims.push_back(static_cast<int>(rank_of(model.select_task_rows(all))));
  Eigen::Index full_dim = rank_of(all);
  if (result.dims.back() == m) return result;

  for (int level = 1; level <= max_order; ++level) {
    MatrixX<Scalar> next(6, n * frontier.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < frontier.cols(); ++c) {
        next.col(i * frontier.cols() + c) = lie_bracket(j0.col(i), frontier.col(c));
      }
    }
    MatrixX<Scalar> grown(6, all.cols() + next.cols());
    grown << all, next;
    const Eigen::Index grown_full = rank_of(grown);
    const int task_dim = static_cast<int>(rank_of(model.select_task_rows(grown)));
    if (grown_full == full_dim) {
      // Closed under bracketing: nothing new can appear at later levels.
      result.order = level - 1;
      return result;
    }
    result.dims.push_back(task_dim);
    result.order = level;
    if (task_dim == m) return result;
    all = std::move(grown);
    frontier = std::move(next);
    full_dim = grown_full;
  }
  result.converged = false;
  return result;
}

/// True iff the task Jacobian stays rank deficient at q0 + t * direction for
/// every t in steps.
template <typename Scalar, typename DerivedQ, typename DerivedD>
bool verify_singular_direction(const RobotModel<Scalar>& model,
                               const Eigen::MatrixBase<DerivedQ>& q0,
                               const Eigen::MatrixBase<DerivedD>& direction,
                               const std::vector<Scalar>& steps,
                               Scalar tol = Scalar(kDefaultRankTol)) {
  model.check_config(q0);
  model.check_config(direction);
  if (direction.norm() == Scalar(0)) {
    throw ConfigError("verify_singular_direction: direction must be nonzero");
  }
  for (const Scalar t : steps) {
    const JointVector<Scalar> q = q0 + t * direction;
    if (rank_at(model, q, tol) >= model.task_dim()) return false;
  }
  return true;
}

}  // namespace aiik

#endif  // AIIK_TANGENT_HPP_
