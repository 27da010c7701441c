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

// Text format for robot models and their catalogued singularities.
//
//   # comment
//   format = aiik-robot/1
//   name = iiwa14
//   joints = 7
//   parameter.a = 0.42                        (informational, any number)
//   joint.1.name = A1
//   joint.1.screw = [wx, wy, wz, vx, vy, vz]  (base frame, q = 0)
//   home.rotation = [r11, r12, ..., r33]      (row-major)
//   home.translation = [x, y, z]
//   task = [0, 1, 2, 3, 4, 5]                 (twist rows, ascending)
//   singularities = 1
//   singularity.1.name = stretched
//   singularity.1.q = [...]
//   singularity.1.basis_size = 4
//   singularity.1.basis.1 = [...]
//   singularity.1.components = 2
//   singularity.1.component.1.size = 6
//   singularity.1.component.1.vector.1 = [...]
//
// Indices are 1-based. Numbers are written with 17 significant digits.

#ifndef AIIK_MODEL_IO_HPP_
#define AIIK_MODEL_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aiik/kinematics.hpp"
#include "aiik/tangent.hpp"

namespace aiik {

struct RobotDefinition {
  RobotModeld model;
  std::vector<SingularBasisd> singularities;
  std::vector<std::pair<std::string, double>> parameters;

  /// Throws ModelLoadError if no singularity has this name.
  const SingularBasisd& singularity(std::string_view name) const;
};

/// Parses and validates a model. Throws ModelLoadError with `source` and the
/// offending line in the message.
RobotDefinition read_model(std::istream& in, std::string_view source = "<stream>");
RobotDefinition load_model_file(const std::filesystem::path& path);

void write_model(std::ostream& out, const RobotDefinition& definition);
std::string to_model_text(const RobotDefinition& definition);

}  // namespace aiik

#endif  // AIIK_MODEL_IO_HPP_
