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

// Experiment scenarios, seeded perturbation sweeps and CSV trace output.

#ifndef AIIK_EXPERIMENTS_HPP_
#define AIIK_EXPERIMENTS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aiik/builtin_models.hpp"
#include "aiik/solver.hpp"

namespace aiik {

enum class MethodKind {
  kFromStart,           // plain iteration from the singular start
  kAiIk,                // transversal increment, then iteration
  kRandomPerturbation,  // raw random increment, then iteration
};

struct Method {
  std::string label;
  MethodKind kind = MethodKind::kFromStart;
  InverseKind inverse;
  bool all_samples = false;  // random methods: every sample, or only the first
};

/// C_d = f(start) * offset, i.e. the offset is expressed in the start
/// end-effector frame.
struct RelativeTarget {
  Posed offset;
};
/// C_d = f(start + delta).
struct JointTarget {
  VectorXd delta;
};
using TargetSpec = std::variant<RelativeTarget, JointTarget>;

struct SeedSpec {
  std::uint64_t seed = 12345;
  int count = 20;
  double magnitude = 1e-3;
};

struct Scenario {
  std::string id;
  std::string description;
  std::string robot;        // built-in model name
  std::string singularity;  // name of the start singularity in the model
  VectorXd start;
  TargetSpec target;
  std::vector<Method> methods;
  int iterations = 15;  // reporting horizon; lock-up is declared only after it
  int budget = 5000;    // solver iteration limit
  VectorXd epsilon;     // AI-IK seed vector
  std::optional<SeedSpec> seeds;
  ErrorMode error_mode = ErrorMode::kLog;
  int prolonged_order = 0;
  double tol = 1e-10;

  void validate() const;
  SolverConfig solver_config(const InverseKind& inverse) const;
};

/// Method grid: ai-ik+pi, then dpi / ai-ik+dpi / random+dpi per damping
/// value, then random+pi. Labels carry lambda^2, e.g. "ai-ik+dpi@1e-04".
std::vector<Method> standard_methods(const std::vector<double>& lambda_sq);

std::string method_label(std::string_view family, std::optional<double> lambda_sq);

/// "3r-lockup", "iiwa-xz", "iiwa-general".
std::vector<Scenario> builtin_scenarios();
Scenario builtin_scenario(std::string_view id);

struct ScenarioOverrides {
  std::optional<int> iterations;
  std::optional<int> budget;
  std::vector<double> lambda_sq;  // replaces the damping grid when non-empty
  std::optional<double> epsilon;  // AI-IK epsilon, applied to every joint
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds_count;
  std::optional<ErrorMode> error_mode;
  std::optional<int> prolonged_order;
};

Scenario apply_overrides(Scenario scenario, const ScenarioOverrides& overrides);

Posed scenario_target(const Scenario& scenario, const RobotDefinition& robot);

/// `count` vectors of n entries uniform in [0, magnitude), drawn from
/// std::mt19937_64 seeded with `seed`. Each 64-bit output x becomes
/// (x >> 11) * 2^-53 * magnitude, so the stream is identical on every
/// platform.
std::vector<VectorXd> random_perturbations(std::uint64_t seed, int count, Eigen::Index n,
                                           double magnitude);

struct RunRecord {
  std::string scenario_id;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::optional<int> sample;
  SolveOutcome outcome;
  double wall_seconds = 0;

  /// "" for deterministic methods, "<seed>/<sample>" otherwise.
  std::string seed_label() const;
};

/// Every (method, sample) combination, in method order then sample order.
/// Individual lock-ups and failures are recorded, never thrown.
std::vector<RunRecord> run_scenario(const Scenario& scenario);
std::vector<RunRecord> run_scenario(const Scenario& scenario, const RobotDefinition& robot);

struct EmittedFiles {
  std::filesystem::path traces;   // <dir>/<id>_traces.csv
  std::filesystem::path summary;  // <dir>/<id>_summary.csv
};

/// Writes the trace CSV (method,seed,iter,error_norm,step_norm,rank,sigma_min)
/// and the summary CSV (scenario,method,seed,status,final_error,iters).
/// Numbers use 17 significant digits. Throws IoError.
EmittedFiles emit_traces(const std::vector<RunRecord>& records, const std::filesystem::path& dir,
                         std::string_view scenario_id);

struct TraceRow {
  std::string method;
  std::string seed;
  int iter = 0;
  double error_norm = 0;
  double step_norm = 0;
  int rank = 0;
  double sigma_min = 0;
};

struct SummaryRow {
  std::string scenario;
  std::string method;
  std::string seed;
  std::string status;
  double final_error = 0;
  int iters = 0;
};

struct VerificationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SingularityReport {
  std::string singularity;
  std::vector<VerificationCheck> checks;
  bool passed() const;
};

/// Numerical checks for a catalogued singularity: rank deficiency at the
/// configuration, every basis vector staying singular along steps
/// {0.05, 0.1, 0.2}, the transversal perturbation with epsilon_i =
/// `epsilon` restoring full rank, and the bracket closure order.
SingularityReport verify_singularity(const RobotModeld& model, const SingularBasisd& basis,
                                     double epsilon = 1e-3);

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

}  // namespace aiik

#endif  // AIIK_EXPERIMENTS_HPP_
