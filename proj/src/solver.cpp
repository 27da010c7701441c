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

#include "aiik/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "aiik/errors.hpp"

namespace aiik {
namespace {

struct Evaluation {
  double error_norm = std::numeric_limits<double>::quiet_NaN();
  MatrixXd jacobian;  // 6 x n, end-effector frame
  int rank = 0;
  double sigma_min = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
};

Evaluation evaluate(const RobotModeld& model, const VectorXd& q, const Posed& target,
                    const SolverConfig& config) {
  Evaluation ev;
  if (!q.allFinite()) return ev;
  try {
    const Twistd error = pose_error(forward_kinematics(model, q), target, config.error_mode);
    ev.error_norm = model.select_task_rows(error).norm();
  } catch (const AngleAtPi&) {
    return ev;
  }
  ev.jacobian = geometric_jacobian(model, q, JacobianRows::kFull);
  const auto svd = svd_factors(model.select_task_rows(ev.jacobian));
  ev.rank = static_cast<int>(svd.rank(config.rank_tol));
  ev.sigma_min = svd.singular_values.size() > 0 ? svd.singular_values.minCoeff() : 0.0;
  ev.ok = std::isfinite(ev.error_norm) && ev.jacobian.allFinite();
  return ev;
}

// Continues an iteration whose state is q at index `iter`, reached by a step
// of length `step_norm` after `stall` consecutive negligible steps.
SolveOutcome iterate(const RobotModeld& model, VectorXd q, const Posed& target,
                     const SolverConfig& config, ConvergenceTrace trace, int iter,
                     double step_norm, int stall,
                     std::optional<MatrixXd> first_jacobian = std::nullopt) {
  SolveOutcome out;
  while (true) {
    const Evaluation ev = evaluate(model, q, target, config);
    trace.push_back({iter, ev.error_norm, step_norm, ev.rank, ev.sigma_min, q});
    out.q_final = q;
    if (!ev.ok) {
      out.status = SolveStatus::kNumericalFailure;
      break;
    }
    if (ev.error_norm <= config.tol) {
      out.status = SolveStatus::kConverged;
      break;
    }
    if (stall >= config.lockup_window) {
      out.status = SolveStatus::kLockedUp;
      break;
    }
    if (iter >= config.max_iters) {
      out.status = SolveStatus::kMaxIters;
      break;
    }
    StepResult step;
    try {
      step = ik_step_with_jacobian(model, q, target,
                                   first_jacobian ? *first_jacobian : ev.jacobian, config);
    } catch (const AngleAtPi&) {
      out.status = SolveStatus::kNumericalFailure;
      break;
    }
    first_jacobian.reset();
    if (!step.dq.allFinite()) {
      out.status = SolveStatus::kNumericalFailure;
      break;
    }
    step_norm = step.dq.norm();
    stall = step_norm < config.lockup_step_tol ? stall + 1 : 0;
    q += step.dq;
    ++iter;
  }
  out.trace = std::move(trace);
  return out;
}

// Iteration 0 at q0 followed by a prescribed first step.
SolveOutcome solve_from_increment(const RobotModeld& model, const VectorXd& q0,
                                  const Posed& target, const VectorXd& increment,
                                  const SolverConfig& config,
                                  std::optional<MatrixXd> first_jacobian) {
  const Evaluation ev = evaluate(model, q0, target, config);
  ConvergenceTrace trace{{0, ev.error_norm, 0.0, ev.rank, ev.sigma_min, q0}};
  if (!ev.ok || ev.error_norm <= config.tol) {
    SolveOutcome out;
    out.status = ev.ok ? SolveStatus::kConverged : SolveStatus::kNumericalFailure;
    out.q_final = q0;
    out.trace = std::move(trace);
    return out;
  }
  const double norm = increment.norm();
  return iterate(model, q0 + increment, target, config, std::move(trace), 1, norm,
                 norm < config.lockup_step_tol ? 1 : 0, std::move(first_jacobian));
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol > 0)) throw ConfigError("solver tol must be positive");
  if (max_iters < 1) throw ConfigError("solver max_iters must be >= 1");
  if (!(step_scale > 0 && step_scale <= 1)) throw ConfigError("step_scale must lie in (0, 1]");
  if (lockup_window < 1) throw ConfigError("lockup_window must be >= 1");
  if (!(rank_tol > 0)) throw ConfigError("rank_tol must be positive");
  if (prolonged_order < 0 || prolonged_order > 2) {
    throw UnsupportedOrder("prolonged_order must be 0, 1 or 2");
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "Converged";
    case SolveStatus::kMaxIters:
      return "MaxIters";
    case SolveStatus::kLockedUp:
      return "LockedUp";
    case SolveStatus::kNumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

StepResult ik_step_with_jacobian(const RobotModeld& model, const VectorXd& q,
                                 const Posed& target, const MatrixXd& full_jacobian,
                                 const SolverConfig& config) {
  model.check_config(q);
  if (full_jacobian.rows() != 6 || full_jacobian.cols() != model.dof()) {
    throw DimensionMismatch("ik_step: Jacobian must be 6 x n");
  }
  StepResult out;
  out.error = pose_error(forward_kinematics(model, q), target, config.error_mode);
  const MatrixXd j = model.select_task_rows(full_jacobian);
  out.dq = config.step_scale * (apply_inverse(config.inverse, j) * model.select_task_rows(out.error));
  if (config.nullspace_gradient) {
    const VectorXd g = config.nullspace_gradient(q);
    if (g.size() != model.dof()) throw DimensionMismatch("null-space gradient must have n entries");
    const MatrixXd projector =
        MatrixXd::Identity(model.dof(), model.dof()) - pseudoinverse(j, config.rank_tol) * j;
    out.dq += projector * g;
  }
  return out;
}

StepResult ik_step(const RobotModeld& model, const VectorXd& q, const Posed& target,
                   const SolverConfig& config) {
  model.check_config(q);
  return ik_step_with_jacobian(model, q, target, geometric_jacobian(model, q, JacobianRows::kFull),
                               config);
}

SolveOutcome solve(const RobotModeld& model, const VectorXd& q0, const Posed& target,
                   const SolverConfig& config) {
  config.validate();
  model.check_config(q0);
  return iterate(model, q0, target, config, {}, 0, 0.0, 0);
}

SolveOutcome solve_ai_ik(const RobotModeld& model, const VectorXd& q0, const Posed& target,
                         const SingularBasisd& basis, const VectorXd& epsilon,
                         const SolverConfig& config) {
  config.validate();
  model.check_config(q0);
  model.check_config(basis.config);
  if ((q0 - basis.config).cwiseAbs().maxCoeff() > 1e-9) {
    throw StartNotSingular("solve_ai_ik: start configuration is not the singularity '" +
                           basis.name + "'");
  }
  const Perturbation<double> p = regularizing_perturbation(basis.basis, epsilon);
  if (p.x.norm() < 1e-12) {
    throw DegeneratePerturbation("solve_ai_ik: the regularizing increment is zero");
  }
  std::optional<MatrixXd> first_jacobian;
  if (config.prolonged_order > 0) {
    first_jacobian = prolonged_jacobian(model, q0, p.x, config.prolonged_order,
                                        DifferentialFrame::kEndEffector);
  }
  return solve_from_increment(model, q0, target, p.x, config, std::move(first_jacobian));
}

SolveOutcome solve_perturbed(const RobotModeld& model, const VectorXd& q0, const Posed& target,
                             const VectorXd& epsilon, const SolverConfig& config) {
  config.validate();
  model.check_config(q0);
  model.check_config(epsilon);
  return solve_from_increment(model, q0, target, epsilon, config, std::nullopt);
}

}  // namespace aiik
