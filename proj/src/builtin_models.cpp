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

#include "aiik/builtin_models.hpp"

#include <string>
#include <vector>

#include "aiik/errors.hpp"

namespace aiik {
namespace {

Twistd screw(double wx, double wy, double wz, double vx, double vy, double vz) {
  Twistd t;
  t << wx, wy, wz, vx, vy, vz;
  return t;
}

// Columns e_i (1-based) of the n x n identity.
MatrixXd unit_columns(Eigen::Index n, const std::vector<Eigen::Index>& indices) {
  MatrixXd out = MatrixXd::Zero(n, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) out(indices[k] - 1, static_cast<Eigen::Index>(k)) = 1.0;
  return out;
}

}  // namespace

RobotDefinition make_iiwa14(double a, double b, double c) {
  if (!(a > 0 && b > 0 && c > 0)) throw InvalidModel("iiwa14: link lengths must be positive");
  std::vector<Twistd> screws{
      screw(0, 0, 1, 0, 0, 0),      screw(1, 0, 0, 0, 0, 0), screw(0, 0, 1, 0, 0, 0),
      screw(1, 0, 0, 0, a, 0),      screw(0, 0, 1, 0, 0, 0), screw(1, 0, 0, 0, a + b, 0),
      screw(0, 0, 1, 0, 0, 0),
  };
  Posed home;
  home.translation << 0, 0, a + b + c;

  RobotDefinition def;
  def.model = RobotModeld("iiwa14", std::move(screws), home, {0, 1, 2, 3, 4, 5},
                          {"A1", "A2", "A3", "A4", "A5", "A6", "A7"});
  def.parameters = {{"a", a}, {"b", b}, {"c", c}};

  SingularBasisd stretched;
  stretched.name = "stretched";
  stretched.config = VectorXd::Zero(7);
  stretched.basis = unit_columns(7, {1, 3, 5, 7});
  stretched.component_spaces = {unit_columns(7, {1, 2, 3, 5, 6, 7}),  // x4 = 0
                                unit_columns(7, {1, 3, 4, 5, 7})};    // x2 = x6 = 0
  validate_singular_basis(def.model, stretched);
  def.singularities.push_back(std::move(stretched));
  return def;
}

RobotDefinition make_planar3r(double l1, double l2, double l3) {
  if (!(l1 > 0 && l2 > 0 && l3 > 0)) throw InvalidModel("planar3r: link lengths must be positive");
  std::vector<Twistd> screws{
      screw(0, 0, 1, 0, 0, 0),
      screw(0, 1, 0, -l1, 0, 0),
      screw(0, 1, 0, -(l1 + l2), 0, 0),
  };
  Posed home;
  home.translation << 0, 0, l1 + l2 + l3;

  RobotDefinition def;
  def.model = RobotModeld("planar3r", std::move(screws), home, {3, 4, 5}, {"q1", "q2", "q3"});
  def.parameters = {{"L1", l1}, {"L2", l2}, {"L3", l3}};

  SingularBasisd upright;
  upright.name = "upright";
  upright.config = VectorXd::Zero(3);
  upright.basis = unit_columns(3, {1});
  MatrixXd elbow_line(3, 2);  // end effector stays on the base axis
  elbow_line.col(0) << 1, 0, 0;
  elbow_line.col(1) = Eigen::Vector3d(0, l3, -(l2 + l3)).normalized();
  upright.component_spaces = {unit_columns(3, {1, 2}),  // x3 = 0, elbow stays straight
                              elbow_line};
  validate_singular_basis(def.model, upright);
  def.singularities.push_back(std::move(upright));
  return def;
}

std::vector<std::string> builtin_model_names() { return {"iiwa14", "planar3r"}; }

RobotDefinition builtin_model(std::string_view name) {
  if (name == "iiwa14") return make_iiwa14();
  if (name == "planar3r") return make_planar3r();
  throw ModelLoadError("unknown built-in model '" + std::string(name) +
                       "' (available: iiwa14, planar3r)");
}

}  // namespace aiik
