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

#ifndef AIIK_BUILTIN_MODELS_HPP_
#define AIIK_BUILTIN_MODELS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "aiik/model_io.hpp"

namespace aiik {

/// Kuka LBR iiwa 14 R820 in its stretched configuration q = 0. Link lengths:
/// shoulder-elbow a, elbow-wrist b, wrist-flange c (m). The base frame sits
/// on the shoulder (joint 2 axis) with z along the arm; the end-effector
/// frame at q = 0 is the base frame shifted by a + b + c along z. Joints
/// 1, 3, 5, 7 rotate about z, joints 2, 4, 6 about x.
///
/// Carries the singularity "stretched" at q = 0 with basis e1, e3, e5, e7
/// and tangent-cone components {x4 = 0} and {x2 = x6 = 0}.
RobotDefinition make_iiwa14(double a = 0.42, double b = 0.4, double c = 0.126);

/// Three-joint regional arm: a vertical base joint, then two parallel
/// horizontal (y) axes at heights l1 and l1 + l2. The end effector sits at
/// height l1 + l2 + l3. Only the position rows form the task.
///
/// Carries the singularity "upright" at q = 0 (arm along the base axis)
/// with basis e1 and components {x3 = 0} and {(l2 + l3) x2 + l3 x3 = 0}.
RobotDefinition make_planar3r(double l1 = 1.0, double l2 = 1.0, double l3 = 1.0);

std::vector<std::string> builtin_model_names();

/// "iiwa14" or "planar3r" with default dimensions. Throws ModelLoadError.
RobotDefinition builtin_model(std::string_view name);

}  // namespace aiik

#endif  // AIIK_BUILTIN_MODELS_HPP_
