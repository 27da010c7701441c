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

#include "aiik/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "aiik/errors.hpp"

namespace aiik {
namespace {

constexpr std::string_view kTraceHeader = "method,seed,iter,error_norm,step_norm,rank,sigma_min";
constexpr std::string_view kSummaryHeader = "scenario,method,seed,status,final_error,iters";

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(path.string() + ": bad number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::filesystem::path& path) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError(path.string() + ": bad integer '" + s + "'");
  }
  return v;
}

// Reads a CSV with the given header; returns data rows split into fields.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               std::string_view header, std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError(path.string() + ": unexpected header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns) {
      throw IoError(path.string() + ": expected " + std::to_string(columns) + " fields in '" +
                    line + "'");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

Posed translation(double x, double y, double z) {
  Posed p;
  p.translation << x, y, z;
  return p;
}

}  // namespace

std::string method_label(std::string_view family, std::optional<double> lambda_sq) {
  std::string label(family);
  if (lambda_sq) {
    // Shortest exponent form that parses back to the same value.
    char buf[32];
    for (int digits = 0; digits <= 16; ++digits) {
      std::snprintf(buf, sizeof(buf), "@%.*e", digits, *lambda_sq);
      if (std::strtod(buf + 1, nullptr) == *lambda_sq) break;
    }
    label += buf;
  }
  return label;
}

std::vector<Method> standard_methods(const std::vector<double>& lambda_sq) {
  std::vector<Method> methods;
  methods.push_back({method_label("ai-ik+pi", std::nullopt), MethodKind::kAiIk, PseudoInverse{}});
  for (const double l2 : lambda_sq) {
    const Damped damped = Damped::FromLambdaSquared(l2);
    methods.push_back({method_label("dpi", l2), MethodKind::kFromStart, damped});
    methods.push_back({method_label("ai-ik+dpi", l2), MethodKind::kAiIk, damped});
    methods.push_back({method_label("random+dpi", l2), MethodKind::kRandomPerturbation, damped, true});
  }
  methods.push_back(
      {method_label("random+pi", std::nullopt), MethodKind::kRandomPerturbation, PseudoInverse{}});
  return methods;
}

void Scenario::validate() const {
  if (iterations < 1) throw ConfigError("scenario " + id + ": iterations must be >= 1");
  if (budget < iterations) throw ConfigError("scenario " + id + ": budget must be >= iterations");
  if (seeds && !(seeds->magnitude > 0)) {
    throw ConfigError("scenario " + id + ": perturbation magnitude must be positive");
  }
  if (seeds && seeds->count < 1) throw ConfigError("scenario " + id + ": seeds count must be >= 1");
  if (methods.empty()) throw ConfigError("scenario " + id + ": no methods configured");
  for (const Method& m : methods) {
    if (m.kind == MethodKind::kRandomPerturbation && !seeds) {
      throw ConfigError("scenario " + id + ": method " + m.label + " needs seeds");
    }
  }
}

SolverConfig Scenario::solver_config(const InverseKind& inverse) const {
  SolverConfig config;
  config.inverse = inverse;
  config.error_mode = error_mode;
  config.tol = tol;
  config.max_iters = budget;
  config.lockup_window = iterations;
  config.prolonged_order = prolonged_order;
  return config;
}

std::vector<Scenario> builtin_scenarios() {
  const std::vector<double> damping{1e-4, 1e-6};
  std::vector<Scenario> out;

  Scenario lockup;
  lockup.id = "3r-lockup";
  lockup.description = "regional 3R arm upright; end effector commanded down in the y-z plane";
  lockup.robot = "planar3r";
  lockup.singularity = "upright";
  lockup.start = VectorXd::Zero(3);
  lockup.target = RelativeTarget{translation(0.0, 0.01, -0.01)};
  lockup.epsilon = VectorXd::Constant(3, 1e-3);
  lockup.seeds = SeedSpec{};
  lockup.methods = standard_methods(damping);
  out.push_back(std::move(lockup));

  Scenario xz;
  xz.id = "iiwa-xz";
  xz.description = "iiwa stretched; R = I, r = (0.01, 0, -0.01) m in the start EE frame";
  xz.robot = "iiwa14";
  xz.singularity = "stretched";
  xz.start = VectorXd::Zero(7);
  xz.target = RelativeTarget{translation(0.01, 0.0, -0.01)};
  xz.epsilon = VectorXd::Constant(7, 1e-3);
  xz.seeds = SeedSpec{};
  xz.methods = standard_methods(damping);
  out.push_back(std::move(xz));

  Scenario general;
  general.id = "iiwa-general";
  general.description = "iiwa stretched; C_d = f(q0 + dq_d)";
  general.robot = "iiwa14";
  general.singularity = "stretched";
  general.start = VectorXd::Zero(7);
  VectorXd delta(7);
  delta << 0.01, 0.01, 0.05, 0.01, 0.01, 0.01, 0.05;
  general.target = JointTarget{delta};
  general.epsilon = VectorXd::Constant(7, 1e-3);
  general.seeds = SeedSpec{};
  general.methods = standard_methods(damping);
  out.push_back(std::move(general));
  return out;
}

Scenario builtin_scenario(std::string_view id) {
  for (Scenario& s : builtin_scenarios()) {
    if (s.id == id) return std::move(s);
  }
  throw ConfigError("unknown scenario '" + std::string(id) +
                    "' (available: 3r-lockup, iiwa-xz, iiwa-general)");
}

Scenario apply_overrides(Scenario s, const ScenarioOverrides& o) {
  if (o.iterations) {
    s.iterations = *o.iterations;
    if (!o.budget && s.budget < s.iterations) s.budget = s.iterations;
  }
  if (o.budget) s.budget = *o.budget;
  if (!o.lambda_sq.empty()) s.methods = standard_methods(o.lambda_sq);
  if (o.epsilon) s.epsilon = VectorXd::Constant(s.epsilon.size(), *o.epsilon);
  if (o.seed || o.seeds_count) {
    if (!s.seeds) s.seeds = SeedSpec{};
    if (o.seed) s.seeds->seed = *o.seed;
    if (o.seeds_count) s.seeds->count = *o.seeds_count;
  }
  if (o.error_mode) s.error_mode = *o.error_mode;
  if (o.prolonged_order) s.prolonged_order = *o.prolonged_order;
  s.validate();
  return s;
}

Posed scenario_target(const Scenario& s, const RobotDefinition& robot) {
  if (const auto* rel = std::get_if<RelativeTarget>(&s.target)) {
    return forward_kinematics(robot.model, s.start) * rel->offset;
  }
  const auto& joint = std::get<JointTarget>(s.target);
  return forward_kinematics(robot.model, (s.start + joint.delta).eval());
}

std::vector<VectorXd> random_perturbations(std::uint64_t seed, int count, Eigen::Index n,
                                           double magnitude) {
  if (count < 1) throw ConfigError("random_perturbations: count must be >= 1");
  if (!(magnitude > 0)) throw ConfigError("random_perturbations: magnitude must be positive");
  std::mt19937_64 engine(seed);
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = static_cast<double>(engine() >> 11) * 0x1.0p-53 * magnitude;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::string RunRecord::seed_label() const {
  if (!seed) return {};
  return std::to_string(*seed) + "/" + std::to_string(sample.value_or(0));
}

std::vector<RunRecord> run_scenario(const Scenario& scenario) {
  return run_scenario(scenario, builtin_model(scenario.robot));
}

std::vector<RunRecord> run_scenario(const Scenario& s, const RobotDefinition& robot) {
  s.validate();
  const RobotModeld& model = robot.model;
  model.check_config(s.start);
  const Posed target = scenario_target(s, robot);
  std::vector<VectorXd> samples;
  if (s.seeds) samples = random_perturbations(s.seeds->seed, s.seeds->count, model.dof(), s.seeds->magnitude);

  std::vector<RunRecord> records;
  for (const Method& method : s.methods) {
    const SolverConfig config = s.solver_config(method.inverse);
    auto timed = [&](auto&& run) {
      const auto t0 = std::chrono::steady_clock::now();
      RunRecord r;
      r.scenario_id = s.id;
      r.method = method.label;
      r.outcome = run();
      r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return r;
    };
    switch (method.kind) {
      case MethodKind::kFromStart:
        records.push_back(timed([&] { return solve(model, s.start, target, config); }));
        break;
      case MethodKind::kAiIk: {
        const SingularBasisd& basis = robot.singularity(s.singularity);
        records.push_back(
            timed([&] { return solve_ai_ik(model, s.start, target, basis, s.epsilon, config); }));
        break;
      }
      case MethodKind::kRandomPerturbation: {
        const std::size_t used = method.all_samples ? samples.size() : std::min<std::size_t>(1, samples.size());
        for (std::size_t k = 0; k < used; ++k) {
          RunRecord r = timed([&] { return solve_perturbed(model, s.start, target, samples[k], config); });
          r.seed = s.seeds->seed;
          r.sample = static_cast<int>(k);
          records.push_back(std::move(r));
        }
        break;
      }
    }
  }
  return records;
}

EmittedFiles emit_traces(const std::vector<RunRecord>& records, const std::filesystem::path& dir,
                         std::string_view scenario_id) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  EmittedFiles files{dir / (std::string(scenario_id) + "_traces.csv"),
                     dir / (std::string(scenario_id) + "_summary.csv")};

  std::ofstream traces(files.traces, std::ios::binary);
  std::ofstream summary(files.summary, std::ios::binary);
  if (!traces) throw IoError("cannot write " + files.traces.string());
  if (!summary) throw IoError("cannot write " + files.summary.string());
  traces << kTraceHeader << '\n';
  summary << kSummaryHeader << '\n';
  for (const RunRecord& r : records) {
    if (r.method.find(',') != std::string::npos) {
      throw IoError("method label '" + r.method + "' contains a comma");
    }
    const std::string seed = r.seed_label();
    for (const IterationRecord& it : r.outcome.trace) {
      traces << r.method << ',' << seed << ',' << it.iter << ',' << format_number(it.error_norm)
             << ',' << format_number(it.step_norm) << ',' << it.jacobian_rank << ','
             << format_number(it.sigma_min) << '\n';
    }
    const IterationRecord* last = r.outcome.trace.empty() ? nullptr : &r.outcome.trace.back();
    summary << r.scenario_id << ',' << r.method << ',' << seed << ','
            << to_string(r.outcome.status) << ','
            << format_number(last ? last->error_norm : std::nan("")) << ','
            << (last ? last->iter : 0) << '\n';
  }
  traces.flush();
  summary.flush();
  if (!traces) throw IoError("write failed for " + files.traces.string());
  if (!summary) throw IoError("write failed for " + files.summary.string());
  return files;
}

bool SingularityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

SingularityReport verify_singularity(const RobotModeld& model, const SingularBasisd& basis,
                                     double epsilon) {
  SingularityReport report;
  report.singularity = basis.name;
  auto add = [&report](std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };
  try {
    validate_singular_basis(model, basis);
    add("structure", true,
        "orthonormal basis of size " + std::to_string(basis.basis.cols()) + " spanning " +
            std::to_string(basis.component_spaces.size()) + " component intersection");
  } catch (const Error& e) {
    add("structure", false, e.what());
    return report;
  }

  const int m = static_cast<int>(model.task_dim());
  const int rank0 = rank_at(model, basis.config);
  add("rank-deficient", rank0 < m, "rank " + std::to_string(rank0) + " of " + std::to_string(m));

  const std::vector<double> steps{0.05, 0.1, 0.2};
  for (Eigen::Index k = 0; k < basis.basis.cols(); ++k) {
    const bool ok = verify_singular_direction(model, basis.config, basis.basis.col(k), steps);
    add("singular-direction s" + std::to_string(k + 1), ok,
        ok ? "rank stays below task dimension" : "rank recovers along this direction");
  }

  const VectorXd eps = VectorXd::Constant(model.dof(), epsilon);
  try {
    const auto p = regularizing_perturbation(basis.basis, eps);
    const int rank_x = rank_at(model, (basis.config + p.x).eval());
    add("transversal-regularizes", rank_x == m,
        "rank " + std::to_string(rank_x) + " at q0 + x with epsilon_i = " + format_number(epsilon));
  } catch (const Error& e) {
    add("transversal-regularizes", false, e.what());
  }

  const ClosureResult closure = closure_order(model, basis.config, 4);
  std::string dims;
  for (const int d : closure.dims) dims += (dims.empty() ? "" : ",") + std::to_string(d);
  add("closure-order", closure.converged,
      "order " + std::to_string(closure.order) + ", dims [" + dims + "]");
  return report;
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::vector<TraceRow> rows;
  for (auto& f : read_csv(path, kTraceHeader, 7)) {
    rows.push_back({std::move(f[0]), std::move(f[1]), parse_int(f[2], path),
                    parse_double(f[3], path), parse_double(f[4], path), parse_int(f[5], path),
                    parse_double(f[6], path)});
  }
  return rows;
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  std::vector<SummaryRow> rows;
  for (auto& f : read_csv(path, kSummaryHeader, 6)) {
    rows.push_back({std::move(f[0]), std::move(f[1]), std::move(f[2]), std::move(f[3]),
                    parse_double(f[4], path), parse_int(f[5], path)});
  }
  return rows;
}

}  // namespace aiik
