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

// SE(3) / se(3) numerics.
//
// Twists are 6-vectors ordered (angular; linear). The same ordering is used
// for Jacobian rows, error twists and the model file format.
//
//            [  0  -wz   wy  vx ]
//   hat(t) = [  wz   0  -wx  vy ]
//            [ -wy  wx    0  vz ]
//            [  0    0    0   0 ]

#ifndef AIIK_LIE_GROUP_HPP_
#define AIIK_LIE_GROUP_HPP_

#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "aiik/errors.hpp"

namespace aiik {

template <typename Scalar>
using Twist = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

using Twistd = Twist<double>;

/// Rigid transformation (R, r) acting as x -> R x + r.
template <typename Scalar>
struct Pose {
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();

  static Pose Identity() { return Pose{}; }

  static Pose FromMatrix(const Matrix4<Scalar>& m) {
    return Pose{m.template topLeftCorner<3, 3>(), m.template topRightCorner<3, 1>()};
  }

  Matrix4<Scalar> matrix() const {
    Matrix4<Scalar> m = Matrix4<Scalar>::Identity();
    m.template topLeftCorner<3, 3>() = rotation;
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }

  Pose inverse() const {
    Pose inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
  }

  Pose operator*(const Pose& other) const {
    return Pose{rotation * other.rotation, rotation * other.translation + translation};
  }

  Vector3<Scalar> operator*(const Vector3<Scalar>& point) const {
    return rotation * point + translation;
  }

  template <typename NewScalar>
  Pose<NewScalar> cast() const {
    return Pose<NewScalar>{rotation.template cast<NewScalar>(),
                           translation.template cast<NewScalar>()};
  }
};

using Posed = Pose<double>;

enum class ErrorMode {
  kFirstOrder,  // vee(dC - I) with the rotation block skew-projected
  kLog,         // exact SE(3) logarithm of dC
};

template <typename Derived>
Matrix3<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& w) {
  using Scalar = typename Derived::Scalar;
  Matrix3<Scalar> s;
  // clang-format off
  s << Scalar(0), -w(2),      w(1),
       w(2),      Scalar(0), -w(0),
      -w(1),      w(0),       Scalar(0);
  // clang-format on
  return s;
}

template <typename Derived>
Matrix4<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& t) {
  using Scalar = typename Derived::Scalar;
  Matrix4<Scalar> m = Matrix4<Scalar>::Zero();
  m.template topLeftCorner<3, 3>() = skew(t.template head<3>());
  m.template topRightCorner<3, 1>() = t.template tail<3>();
  return m;
}

/// Inverse of hat. The rotation block must be skew-symmetric to within
/// `tol` (max-abs of A + A^T); only its skew part is read.
template <typename Derived>
Twist<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& a,
                                   typename Derived::Scalar tol = 1e-8) {
  using Scalar = typename Derived::Scalar;
  const Matrix3<Scalar> block = a.template topLeftCorner<3, 3>();
  const Scalar asym = (block + block.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= tol)) {
    throw NotSkew("vee: rotation block is not skew-symmetric (|A + A^T| = " +
                  std::to_string(static_cast<double>(asym)) + ")");
  }
  Twist<Scalar> t;
  t << Scalar(0.5) * (block(2, 1) - block(1, 2)), Scalar(0.5) * (block(0, 2) - block(2, 0)),
      Scalar(0.5) * (block(1, 0) - block(0, 1)), a.template topRightCorner<3, 1>();
  return t;
}

namespace detail {

// Below this rotation angle the trigonometric coefficients switch to their
// Taylor series.
inline constexpr double kSmallAngle = 1e-4;

// sin(t)/t, (1 - cos t)/t^2, (t - sin t)/t^3
template <typename Scalar>
void rodrigues_coefficients(Scalar theta, Scalar& a, Scalar& b, Scalar& c) {
  using std::sin;
  const Scalar t2 = theta * theta;
  if (theta < Scalar(kSmallAngle)) {
    a = Scalar(1) - t2 / Scalar(6) + t2 * t2 / Scalar(120);
    b = Scalar(0.5) - t2 / Scalar(24) + t2 * t2 / Scalar(720);
    c = Scalar(1) / Scalar(6) - t2 / Scalar(120) + t2 * t2 / Scalar(5040);
  } else {
    const Scalar s = sin(theta);
    const Scalar half = sin(Scalar(0.5) * theta) / theta;
    a = s / theta;
    b = Scalar(2) * half * half;
    c = (theta - s) / (t2 * theta);
  }
}

}  // namespace detail

template <typename Derived>
Matrix3<typename Derived::Scalar> so3_exp(const Eigen::MatrixBase<Derived>& w) {
  using Scalar = typename Derived::Scalar;
  const Scalar theta = w.norm();
  Scalar a, b, c;
  detail::rodrigues_coefficients(theta, a, b, c);
  const Matrix3<Scalar> k = skew(w);
  return Matrix3<Scalar>::Identity() + a * k + b * k * k;
}

template <typename Derived>
Pose<typename Derived::Scalar> exp(const Eigen::MatrixBase<Derived>& t) {
  using Scalar = typename Derived::Scalar;
  const Vector3<Scalar> w = t.template head<3>();
  const Vector3<Scalar> v = t.template tail<3>();
  const Scalar theta = w.norm();
  Scalar a, b, c;
  detail::rodrigues_coefficients(theta, a, b, c);
  const Matrix3<Scalar> k = skew(w);
  const Matrix3<Scalar> k2 = k * k;
  Pose<Scalar> pose;
  pose.rotation = Matrix3<Scalar>::Identity() + a * k + b * k2;
  pose.translation = (Matrix3<Scalar>::Identity() + b * k + c * k2) * v;
  return pose;
}

/// Rotation vector of R. Throws AngleAtPi when the angle is within 1e-9 of pi.
template <typename Scalar>
Vector3<Scalar> so3_log(const Matrix3<Scalar>& r) {
  using std::atan2;
  using std::sqrt;
  const Vector3<Scalar> axial{Scalar(0.5) * (r(2, 1) - r(1, 2)), Scalar(0.5) * (r(0, 2) - r(2, 0)),
                              Scalar(0.5) * (r(1, 0) - r(0, 1))};
  const Scalar sin_theta = axial.norm();
  const Scalar cos_theta = Scalar(0.5) * (r.trace() - Scalar(1));
  const Scalar theta = atan2(sin_theta, cos_theta);
  constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
  if (kPi - theta < Scalar(1e-9)) {
    throw AngleAtPi("log: rotation angle is within 1e-9 of pi");
  }
  if (theta < Scalar(detail::kSmallAngle)) {
    const Scalar t2 = theta * theta;
    return (Scalar(1) + t2 / Scalar(6) + Scalar(7) * t2 * t2 / Scalar(360)) * axial;
  }
  if (theta < Scalar(3)) return (theta / sin_theta) * axial;

  // Close to pi the antisymmetric part vanishes; read the axis from the
  // symmetric part (1 - cos t) u u^T instead.
  const Matrix3<Scalar> uu =
      (Scalar(0.5) * (r + r.transpose()) - cos_theta * Matrix3<Scalar>::Identity()) /
      (Scalar(1) - cos_theta);
  Eigen::Index k;
  uu.diagonal().maxCoeff(&k);
  Vector3<Scalar> u = uu.col(k) / sqrt(uu(k, k));
  if (u.dot(axial) < Scalar(0)) u = -u;
  return theta * u;
}

template <typename Scalar>
Twist<Scalar> log(const Pose<Scalar>& pose) {
  using std::cos;
  using std::sin;
  const Vector3<Scalar> w = so3_log(pose.rotation);
  const Scalar theta = w.norm();
  // V^-1 = I - K/2 + d K^2
  Scalar d;
  if (theta < Scalar(detail::kSmallAngle)) {
    const Scalar t2 = theta * theta;
    d = Scalar(1) / Scalar(12) + t2 / Scalar(720) + t2 * t2 / Scalar(30240);
  } else {
    const Scalar half = Scalar(0.5) * theta;
    d = (Scalar(1) - half * cos(half) / sin(half)) / (theta * theta);
  }
  const Matrix3<Scalar> k = skew(w);
  Twist<Scalar> t;
  t.template head<3>() = w;
  t.template tail<3>() =
      (Matrix3<Scalar>::Identity() - Scalar(0.5) * k + d * k * k) * pose.translation;
  return t;
}

/// Adjoint of a pose acting on twists in (angular; linear) order.
template <typename Scalar>
Matrix6<Scalar> adjoint(const Pose<Scalar>& pose) {
  Matrix6<Scalar> ad = Matrix6<Scalar>::Zero();
  ad.template topLeftCorner<3, 3>() = pose.rotation;
  ad.template bottomRightCorner<3, 3>() = pose.rotation;
  ad.template bottomLeftCorner<3, 3>() = skew(pose.translation) * pose.rotation;
  return ad;
}

/// se(3) bracket, equal to vee(hat(a) hat(b) - hat(b) hat(a)).
template <typename DerivedA, typename DerivedB>
Twist<typename DerivedA::Scalar> lie_bracket(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Vector3<Scalar> wa = a.template head<3>(), va = a.template tail<3>();
  const Vector3<Scalar> wb = b.template head<3>(), vb = b.template tail<3>();
  Twist<Scalar> t;
  t << wa.cross(wb), wa.cross(vb) - wb.cross(va);
  return t;
}

/// C^-1 * C_d.
template <typename Scalar>
Pose<Scalar> delta_pose(const Pose<Scalar>& current, const Pose<Scalar>& desired) {
  return current.inverse() * desired;
}

template <typename Scalar>
Twist<Scalar> pose_error(const Pose<Scalar>& current, const Pose<Scalar>& desired,
                         ErrorMode mode) {
  const Pose<Scalar> delta = delta_pose(current, desired);
  if (mode == ErrorMode::kLog) return log(delta);
  const Matrix3<Scalar> m = delta.rotation - Matrix3<Scalar>::Identity();
  const Matrix3<Scalar> skew_part = Scalar(0.5) * (m - m.transpose());
  Twist<Scalar> t;
  t << skew_part(2, 1), skew_part(0, 2), skew_part(1, 0), delta.translation;
  return t;
}

}  // namespace aiik

#endif  // AIIK_LIE_GROUP_HPP_
