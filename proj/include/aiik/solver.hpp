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

// Newton-type inverse kinematics on SE(3) and its analytically informed
// variant that starts from a transversal perturbation of a singularity.

#ifndef AIIK_SOLVER_HPP_
#define AIIK_SOLVER_HPP_

#include <functional>
#include <string_view>
#include <vector>

#include "aiik/kinematics.hpp"
#include "aiik/lie_group.hpp"
#include "aiik/pinv.hpp"
#include "aiik/tangent.hpp"

namespace aiik {

struct SolverConfig {
  InverseKind inverse = PseudoInverse{};
  ErrorMode error_mode = ErrorMode::kLog;
  double tol = 1e-10;  // on the 2-norm of the task error twist
  int max_iters = 100;
  double step_scale = 1.0;
  // A run is LockedUp once `lockup_window` consecutive steps are shorter
  // than lockup_step_tol while the error is still above tol.
  double lockup_step_tol = 1e-14;
  int lockup_window = 2;
  double rank_tol = kDefaultRankTol;  // rank reported in traces
  // Gradient of a secondary objective, projected onto the Jacobian null
  // space and added to every step.
  std::function<VectorXd(const VectorXd&)> nullspace_gradient;
  // When > 0, the first step after a perturbation uses the Lie-bracket
  // expansion of the end-effector Jacobian around the singularity (this
  // order) instead of the exact Jacobian.
  int prolonged_order = 0;

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double error_norm = 0;
  double step_norm = 0;  // |q_k - q_{k-1}|, 0 for iteration 0
  int jacobian_rank = 0;
  double sigma_min = 0;
  VectorXd q;
};

using ConvergenceTrace = std::vector<IterationRecord>;

enum class SolveStatus { kConverged, kMaxIters, kLockedUp, kNumericalFailure };

std::string_view to_string(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::kMaxIters;
  VectorXd q_final;
  ConvergenceTrace trace;
};

struct StepResult {
  VectorXd dq;
  Twistd error;  // full error twist; the step uses its task rows
};

/// One update dq = step_scale * J^+(q) e(q) (+ null-space term).
StepResult ik_step(const RobotModeld& model, const VectorXd& q, const Posed& target,
                   const SolverConfig& config);

/// Same step with a caller-supplied 6 x n end-effector Jacobian.
StepResult ik_step_with_jacobian(const RobotModeld& model, const VectorXd& q,
                                 const Posed& target, const MatrixXd& full_jacobian,
                                 const SolverConfig& config);

SolveOutcome solve(const RobotModeld& model, const VectorXd& q0, const Posed& target,
                   const SolverConfig& config);

/// Starts at the catalogued singularity basis.config, replaces the first
/// step by the transversal increment x = (I - S S^T) epsilon, then iterates.
/// Trace: iteration 0 at q0, iteration 1 at q0 + x.
SolveOutcome solve_ai_ik(const RobotModeld& model, const VectorXd& q0, const Posed& target,
                         const SingularBasisd& basis, const VectorXd& epsilon,
                         const SolverConfig& config);

/// Baseline: first step is the raw perturbation epsilon.
/// Trace: iteration 0 at q0, iteration 1 at q0 + epsilon.
SolveOutcome solve_perturbed(const RobotModeld& model, const VectorXd& q0, const Posed& target,
                             const VectorXd& epsilon, const SolverConfig& config);

}  // namespace aiik

#endif  // AIIK_SOLVER_HPP_
