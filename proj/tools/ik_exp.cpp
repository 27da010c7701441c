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

// ik-exp: experiment driver.
//
//   ik-exp list
//   ik-exp run <scenario-id> [--iters N] [--lambda-sq X]... [--epsilon X] [--seed S]
//              [--seeds-count K] [--out DIR] [--error-mode log|first-order]
//              [--prolonged-jacobian] [--budget N]
//   ik-exp verify <model-file>
//   ik-exp export-model <name> [--out FILE]

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "aiik/builtin_models.hpp"
#include "aiik/errors.hpp"
#include "aiik/experiments.hpp"
#include "aiik/model_io.hpp"

namespace {

int cmd_list() {
  for (const aiik::Scenario& s : aiik::builtin_scenarios()) {
    std::printf("%-14s robot=%-9s start=%-10s %s\n", s.id.c_str(), s.robot.c_str(),
                s.singularity.c_str(), s.description.c_str());
    std::printf("%-14s methods:", "");
    for (const auto& m : s.methods) std::printf(" %s", m.label.c_str());
    std::printf("\n");
  }
  return 0;
}

int cmd_run(const std::string& id, const aiik::ScenarioOverrides& overrides,
            const std::string& out_dir) {
  const aiik::Scenario scenario = aiik::apply_overrides(aiik::builtin_scenario(id), overrides);
  const auto records = aiik::run_scenario(scenario);
  const auto files = aiik::emit_traces(records, out_dir, scenario.id);

  // One line per method; random sweeps are aggregated.
  struct Tally {
    int runs = 0;
    std::map<std::string, int> status;
    double worst_error = 0;
    int max_iters = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Tally> tallies;
  for (const auto& r : records) {
    if (!tallies.count(r.method)) order.push_back(r.method);
    Tally& t = tallies[r.method];
    ++t.runs;
    ++t.status[std::string(aiik::to_string(r.outcome.status))];
    const auto& last = r.outcome.trace.back();
    t.worst_error = std::max(t.worst_error, last.error_norm);
    t.max_iters = std::max(t.max_iters, last.iter);
  }
  std::printf("%s: %zu runs\n", scenario.id.c_str(), records.size());
  for (const auto& label : order) {
    const Tally& t = tallies[label];
    std::string status;
    for (const auto& [name, count] : t.status) {
      status += (status.empty() ? "" : " ") + name + (t.runs > 1 ? "x" + std::to_string(count) : "");
    }
    std::printf("  %-18s %-28s final_error<=%.3e iters<=%d\n", label.c_str(), status.c_str(),
                t.worst_error, t.max_iters);
  }
  std::printf("traces:  %s\nsummary: %s\n", files.traces.string().c_str(),
              files.summary.string().c_str());
  return 0;
}

int cmd_verify(const std::string& path) {
  const aiik::RobotDefinition def = aiik::load_model_file(path);
  std::printf("model %s: %ld joints, task dimension %ld, %zu singularities\n",
              def.model.name().c_str(), static_cast<long>(def.model.dof()),
              static_cast<long>(def.model.task_dim()), def.singularities.size());
  bool ok = true;
  for (const auto& s : def.singularities) {
    const aiik::SingularityReport report = aiik::verify_singularity(def.model, s);
    std::printf("singularity %s\n", s.name.c_str());
    for (const auto& c : report.checks) {
      std::printf("  [%s] %-24s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    }
    ok = ok && report.passed();
  }
  return ok ? 0 : 1;
}

int cmd_export(const std::string& name, const std::string& out) {
  const aiik::RobotDefinition def = aiik::builtin_model(name);
  if (out.empty()) {
    aiik::write_model(std::cout, def);
    return 0;
  }
  std::ofstream file(out);
  if (!file) throw aiik::IoError("cannot write " + out);
  aiik::write_model(file, def);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse kinematics experiments at kinematic singularities"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List built-in scenarios");

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV traces");
  std::string scenario_id;
  std::string out_dir = ".";
  aiik::ScenarioOverrides overrides;
  int iters = 0;
  int budget = 0;
  double epsilon = 0;
  std::uint64_t seed = 0;
  int seeds_count = 0;
  std::string error_mode;
  bool prolonged = false;
  run->add_option("scenario", scenario_id, "Scenario id (see list)")->required();
  auto* iters_opt = run->add_option("--iters", iters, "Reporting horizon in iterations")
                        ->check(CLI::PositiveNumber);
  auto* budget_opt =
      run->add_option("--budget", budget, "Solver iteration limit")->check(CLI::PositiveNumber);
  run->add_option("--lambda-sq", overrides.lambda_sq,
                  "Damping lambda^2 for the DPI methods (repeatable)")
      ->check(CLI::NonNegativeNumber);
  auto* eps_opt = run->add_option("--epsilon", epsilon, "AI-IK epsilon per joint")
                      ->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Seed of the random perturbation stream");
  auto* count_opt = run->add_option("--seeds-count", seeds_count, "Number of random perturbations")
                        ->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  auto* mode_opt = run->add_option("--error-mode", error_mode, "Pose error: log or first-order")
                       ->check(CLI::IsMember({"log", "first-order"}));
  run->add_flag("--prolonged-jacobian", prolonged,
                "Use the first-order Lie-bracket Jacobian for the first AI-IK step");

  auto* verify = app.add_subcommand("verify", "Verify the singular-motion bases of a model file");
  std::string model_path;
  verify->add_option("model-file", model_path, "Robot model file")->required();

  auto* exp = app.add_subcommand("export-model", "Print a built-in model in the model file format");
  std::string model_name;
  std::string export_out;
  exp->add_option("name", model_name, "iiwa14 or planar3r")->required();
  exp->add_option("--out", export_out, "Write to this file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) return cmd_list();
    if (*run) {
      if (*iters_opt) overrides.iterations = iters;
      if (*budget_opt) overrides.budget = budget;
      if (*eps_opt) overrides.epsilon = epsilon;
      if (*seed_opt) overrides.seed = seed;
      if (*count_opt) overrides.seeds_count = seeds_count;
      if (*mode_opt) {
        overrides.error_mode =
            error_mode == "log" ? aiik::ErrorMode::kLog : aiik::ErrorMode::kFirstOrder;
      }
      if (prolonged) overrides.prolonged_order = 1;
      return cmd_run(scenario_id, overrides, out_dir);
    }
    if (*verify) return cmd_verify(model_path);
    if (*exp) return cmd_export(model_name, export_out);
  } catch (const aiik::Error& e) {
    std::fprintf(stderr, "ik-exp: %s\n", e.what());
    return 2;
  }
  return 0;
}
