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

// Serial-chain model, product-of-exponentials forward kinematics and
// Jacobians.
//
// A model is given by the joint screws S_i in the base frame at q = 0 and
// the end-effector pose M at q = 0:
//
//   f(q) = exp(S_1 q_1) ... exp(S_n q_n) M
//
// The geometric Jacobian is expressed in the end-effector frame, so that
// J(q) dq matches the error twist log(f(q)^-1 C_d) to first order.

#ifndef AIIK_KINEMATICS_HPP_
#define AIIK_KINEMATICS_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "aiik/errors.hpp"
#include "aiik/lie_group.hpp"
#include "aiik/pinv.hpp"

namespace aiik {

template <typename Scalar>
using JointVector = VectorX<Scalar>;

enum class JointType { kRevolute, kPrismatic };

template <typename Scalar>
class RobotModel {
 public:
  RobotModel() = default;

  RobotModel(std::string name, std::vector<Twist<Scalar>> screws, Pose<Scalar> home_pose,
             std::vector<int> task_selector, std::vector<std::string> joint_names = {})
      : name_(std::move(name)),
        screws_(std::move(screws)),
        home_pose_(std::move(home_pose)),
        task_selector_(std::move(task_selector)),
        joint_names_(std::move(joint_names)) {
    if (screws_.empty()) throw InvalidModel("robot model needs at least one joint");
    if (joint_names_.empty()) {
      for (std::size_t i = 0; i < screws_.size(); ++i) {
        joint_names_.push_back("j" + std::to_string(i + 1));
      }
    }
    if (joint_names_.size() != screws_.size()) {
      throw InvalidModel("joint_names has " + std::to_string(joint_names_.size()) +
                         " entries for " + std::to_string(screws_.size()) + " joints");
    }
    if (task_selector_.empty() || task_selector_.size() > 6) {
      throw InvalidModel("task selector must have between 1 and 6 rows");
    }
    for (std::size_t k = 0; k < task_selector_.size(); ++k) {
      if (task_selector_[k] < 0 || task_selector_[k] > 5 ||
          (k > 0 && task_selector_[k] <= task_selector_[k - 1])) {
        throw InvalidModel("task selector indices must be unique, ascending and in [0, 5]");
      }
    }
    for (std::size_t i = 0; i < screws_.size(); ++i) {
      const Scalar wn = screws_[i].template head<3>().norm();
      const Scalar vn = screws_[i].template tail<3>().norm();
      const bool revolute = std::abs(wn - Scalar(1)) <= Scalar(1e-10);
      const bool prismatic = wn <= Scalar(1e-10) && std::abs(vn - Scalar(1)) <= Scalar(1e-10);
      if (!revolute && !prismatic) {
        throw InvalidModel("joint " + joint_names_[i] +
                           ": screw needs a unit angular part (revolute) or zero angular and "
                           "unit linear part (prismatic)");
      }
    }
    const Matrix3<Scalar>& r = home_pose_.rotation;
    if ((r.transpose() * r - Matrix3<Scalar>::Identity()).cwiseAbs().maxCoeff() > Scalar(1e-10) ||
        std::abs(r.determinant() - Scalar(1)) > Scalar(1e-10)) {
      throw InvalidModel("home pose rotation is not a proper rotation");
    }
  }

  const std::string& name() const { return name_; }
  Eigen::Index dof() const { return static_cast<Eigen::Index>(screws_.size()); }
  Eigen::Index task_dim() const { return static_cast<Eigen::Index>(task_selector_.size()); }
  const std::vector<Twist<Scalar>>& screws() const { return screws_; }
  const Twist<Scalar>& screw(Eigen::Index i) const { return screws_[static_cast<std::size_t>(i)]; }
  const Pose<Scalar>& home_pose() const { return home_pose_; }
  const std::vector<int>& task_selector() const { return task_selector_; }
  const std::vector<std::string>& joint_names() const { return joint_names_; }

  JointType joint_type(Eigen::Index i) const {
    return screw(i).template head<3>().norm() > Scalar(0.5) ? JointType::kRevolute
                                                            : JointType::kPrismatic;
  }

  template <typename Derived>
  void check_config(const Eigen::MatrixBase<Derived>& q) const {
    if (q.size() != dof()) {
      throw DimensionMismatch("joint vector has " + std::to_string(q.size()) +
                              " entries, model " + name_ + " has " + std::to_string(dof()) +
                              " joints");
    }
  }

  /// Rows of a 6 x k twist matrix picked by the task selector.
  template <typename Derived>
  MatrixX<Scalar> select_task_rows(const Eigen::MatrixBase<Derived>& full) const {
    MatrixX<Scalar> out(task_dim(), full.cols());
    for (Eigen::Index k = 0; k < task_dim(); ++k) {
      out.row(k) = full.row(task_selector_[static_cast<std::size_t>(k)]);
    }
    return out;
  }

 private:
  std::string name_;
  std::vector<Twist<Scalar>> screws_;
  Pose<Scalar> home_pose_;
  std::vector<int> task_selector_;
  std::vector<std::string> joint_names_;
};

using RobotModeld = RobotModel<double>;

template <typename Scalar, typename Derived>
Pose<Scalar> forward_kinematics(const RobotModel<Scalar>& model,
                                const Eigen::MatrixBase<Derived>& q) {
  model.check_config(q);
  Pose<Scalar> pose;
  for (Eigen::Index i = 0; i < model.dof(); ++i) {
    pose = pose * aiik::exp((model.screw(i) * q(i)).eval());
  }
  return pose * model.home_pose();
}

/// Jacobian in the base frame: column i is exp(S_1 q_1)...exp(S_{i-1} q_{i-1})
/// acting on S_i.
template <typename Scalar, typename Derived>
MatrixX<Scalar> spatial_jacobian(const RobotModel<Scalar>& model,
                                 const Eigen::MatrixBase<Derived>& q) {
  model.check_config(q);
  MatrixX<Scalar> j(6, model.dof());
  Pose<Scalar> prefix;
  for (Eigen::Index i = 0; i < model.dof(); ++i) {
    j.col(i) = adjoint(prefix) * model.screw(i);
    prefix = prefix * aiik::exp((model.screw(i) * q(i)).eval());
  }
  return j;
}

enum class JacobianRows {
  kTask,  // rows picked by the model's task selector (m x n)
  kFull,  // all six twist rows (6 x n)
};

/// Geometric Jacobian with joint screws expressed in the current
/// end-effector frame.
template <typename Scalar, typename Derived>
MatrixX<Scalar> geometric_jacobian(const RobotModel<Scalar>& model,
                                   const Eigen::MatrixBase<Derived>& q,
                                   JacobianRows rows = JacobianRows::kTask) {
  const MatrixX<Scalar> full =
      adjoint(forward_kinematics(model, q).inverse()) * spatial_jacobian(model, q);
  return rows == JacobianRows::kFull ? full : model.select_task_rows(full);
}

/// Jacobian at q with screws expressed in the fixed frame that coincides
/// with the end-effector frame at q_ref (6 x n). Equal to the geometric
/// Jacobian when q == q_ref.
template <typename Scalar, typename DerivedQ, typename DerivedR>
MatrixX<Scalar> reference_frame_jacobian(const RobotModel<Scalar>& model,
                                         const Eigen::MatrixBase<DerivedQ>& q,
                                         const Eigen::MatrixBase<DerivedR>& q_ref) {
  return adjoint(forward_kinematics(model, q_ref).inverse()) * spatial_jacobian(model, q);
}

/// Number of singular values of the task Jacobian above tol * sigma_max.
template <typename Scalar, typename Derived>
int rank_at(const RobotModel<Scalar>& model, const Eigen::MatrixBase<Derived>& q,
            Scalar tol = Scalar(kDefaultRankTol)) {
  if (!(tol > Scalar(0))) throw ConfigError("rank_at: tol must be positive");
  const auto f = svd_factors(geometric_jacobian(model, q));
  return static_cast<int>(f.rank(tol));
}

}  // namespace aiik

#endif  // AIIK_KINEMATICS_HPP_
