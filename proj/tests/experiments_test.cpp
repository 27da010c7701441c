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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "aiik/builtin_models.hpp"
#include "aiik/errors.hpp"

namespace aiik {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("aiik_experiments_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

const RunRecord& find(const std::vector<RunRecord>& records, const std::string& method) {
  for (const auto& r : records) {
    if (r.method == method) return r;
  }
  throw std::runtime_error("no record for " + method);
}

TEST(Scenarios, BuiltinIds) {
  const auto scenarios = builtin_scenarios();
  ASSERT_EQ(scenarios.size(), 3u);
  EXPECT_EQ(scenarios[0].id, "3r-lockup");
  EXPECT_EQ(scenarios[1].id, "iiwa-xz");
  EXPECT_EQ(scenarios[2].id, "iiwa-general");
  for (const auto& s : scenarios) {
    EXPECT_NO_THROW(s.validate());
    EXPECT_EQ(s.iterations, 15);
    ASSERT_TRUE(s.seeds.has_value());
    EXPECT_EQ(s.seeds->count, 20);
    EXPECT_EQ(s.seeds->magnitude, 1e-3);
  }
  EXPECT_THROW(builtin_scenario("iiwa-yz"), ConfigError);
}

TEST(Scenarios, MethodGrid) {
  const auto methods = standard_methods({1e-4, 1e-6});
  std::vector<std::string> labels;
  for (const auto& m : methods) labels.push_back(m.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"ai-ik+pi", "dpi@1e-04", "ai-ik+dpi@1e-04",
                                              "random+dpi@1e-04", "dpi@1e-06", "ai-ik+dpi@1e-06",
                                              "random+dpi@1e-06", "random+pi"}));
  EXPECT_TRUE(methods[3].all_samples);
  EXPECT_FALSE(methods.back().all_samples);
  EXPECT_EQ(std::get<Damped>(methods[1].inverse).lambda, 1e-2);
  EXPECT_EQ(method_label("dpi", 2.5e-3), "dpi@2.5e-03");
  EXPECT_EQ(method_label("ai-ik+pi", std::nullopt), "ai-ik+pi");
}

TEST(Scenarios, XzTarget) {
  const Scenario s = builtin_scenario("iiwa-xz");
  const RobotDefinition robot = make_iiwa14();
  const Posed target = scenario_target(s, robot);
  EXPECT_EQ(target.rotation, Matrix3<double>::Identity());
  EXPECT_LE((target.translation - Eigen::Vector3d(0.01, 0, 0.946 - 0.01)).norm(), 1e-15);
  const auto p = regularizing_perturbation(robot.singularity(s.singularity).basis, s.epsilon);
  VectorXd x = VectorXd::Zero(7);
  x << 0, 1e-3, 0, 1e-3, 0, 1e-3, 0;
  EXPECT_EQ(p.x, x);
}

TEST(Scenarios, GeneralTargetFromJointDisplacement) {
  const Scenario s = builtin_scenario("iiwa-general");
  const RobotDefinition robot = make_iiwa14();
  VectorXd dq(7);
  dq << 0.01, 0.01, 0.05, 0.01, 0.01, 0.01, 0.05;
  EXPECT_EQ(scenario_target(s, robot).matrix(), forward_kinematics(robot.model, dq).matrix());
}

TEST(Scenarios, UprightTargetIsInstantaneouslyInfeasible) {
  const Scenario s = builtin_scenario("3r-lockup");
  const RobotDefinition robot = make_planar3r();
  const Posed target = scenario_target(s, robot);
  const Twistd error = pose_error(forward_kinematics(robot.model, s.start), target, ErrorMode::kLog);
  const VectorXd v = robot.model.select_task_rows(error);
  EXPECT_EQ(v(0), 0.0);
  EXPECT_GT(v(1), 0.0);
  EXPECT_LT(v(2), 0.0);
  const MatrixXd kernel = kernel_basis(geometric_jacobian(robot.model, s.start));
  EXPECT_LE((v - kernel * (kernel.transpose() * v)).norm(), 1e-15);
  // Reachable: the end effector stays within the arm's workspace.
  const Eigen::Vector3d shoulder(0, 0, 1);
  EXPECT_LT((target.translation - shoulder).norm(), 2.0);
}

TEST(Scenarios, Overrides) {
  ScenarioOverrides o;
  o.iterations = 30;
  o.budget = 100;
  o.lambda_sq = {1e-2};
  o.epsilon = 2e-3;
  o.seed = 7;
  o.seeds_count = 3;
  o.error_mode = ErrorMode::kFirstOrder;
  o.prolonged_order = 1;
  const Scenario s = apply_overrides(builtin_scenario("iiwa-xz"), o);
  EXPECT_EQ(s.iterations, 30);
  EXPECT_EQ(s.budget, 100);
  EXPECT_EQ(s.methods.size(), 5u);
  EXPECT_EQ(s.methods[1].label, "dpi@1e-02");
  EXPECT_EQ(s.epsilon, VectorXd::Constant(7, 2e-3));
  EXPECT_EQ(s.seeds->seed, 7u);
  EXPECT_EQ(s.seeds->count, 3);
  EXPECT_EQ(s.error_mode, ErrorMode::kFirstOrder);
  EXPECT_EQ(s.prolonged_order, 1);
  EXPECT_EQ(s.solver_config(PseudoInverse{}).lockup_window, 30);
  EXPECT_EQ(s.solver_config(PseudoInverse{}).max_iters, 100);

  ScenarioOverrides bad;
  bad.iterations = 0;
  EXPECT_THROW(apply_overrides(builtin_scenario("iiwa-xz"), bad), ConfigError);
  bad = {};
  bad.budget = 5;
  EXPECT_THROW(apply_overrides(builtin_scenario("iiwa-xz"), bad), ConfigError);
  bad = {};
  bad.lambda_sq = {-1.0};
  EXPECT_THROW(apply_overrides(builtin_scenario("iiwa-xz"), bad), ConfigError);
}

TEST(RandomPerturbations, FrozenStream) {
  const auto v = random_perturbations(12345, 2, 3, 1e-3);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0](0), 0.00035762972288842586);
  EXPECT_EQ(v[0](1), 0.00040044261704406118);
  EXPECT_EQ(v[0](2), 0.00068938331700276845);
  // The engine itself: 10000th output of a default-seeded mt19937_64.
  std::mt19937_64 engine;
  engine.discard(9999);
  EXPECT_EQ(engine(), 9981545732273789042ull);
}

TEST(RandomPerturbations, DeterministicAndInRange) {
  const auto a = random_perturbations(99, 20, 7, 1e-3);
  const auto b = random_perturbations(99, 20, 7, 1e-3);
  const auto c = random_perturbations(100, 20, 7, 1e-3);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k], b[k]);
    EXPECT_NE(a[k], c[k]);
    EXPECT_GE(a[k].minCoeff(), 0.0);
    EXPECT_LE(a[k].maxCoeff(), 1e-3);
  }
  EXPECT_THROW(random_perturbations(1, 0, 7, 1e-3), ConfigError);
  EXPECT_THROW(random_perturbations(1, 5, 7, 0.0), ConfigError);
}

TEST(RunScenario, RecordsPartitionMethodSampleGrid) {
  ScenarioOverrides o;
  o.seeds_count = 4;
  const Scenario s = apply_overrides(builtin_scenario("3r-lockup"), o);
  const auto records = run_scenario(s);
  // 6 single-run methods plus 2 damped random sweeps of 4 samples.
  ASSERT_EQ(records.size(), 6u + 2u * 4u);
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& r : records) {
    EXPECT_EQ(r.scenario_id, "3r-lockup");
    EXPECT_TRUE(keys.insert({r.method, r.seed_label()}).second);
    EXPECT_GE(r.wall_seconds, 0.0);
  }
  EXPECT_EQ(find(records, "random+dpi@1e-06").seed_label(), "12345/0");
  EXPECT_EQ(find(records, "ai-ik+pi").seed_label(), "");
  EXPECT_EQ(find(records, "dpi@1e-04").outcome.status, SolveStatus::kLockedUp);
  EXPECT_EQ(find(records, "ai-ik+pi").outcome.status, SolveStatus::kConverged);
}

TEST(RunScenario, XzOutcomes) {
  const auto records = run_scenario(builtin_scenario("iiwa-xz"));
  const auto& dpi = find(records, "dpi@1e-04");
  EXPECT_EQ(dpi.outcome.status, SolveStatus::kLockedUp);
  ASSERT_EQ(dpi.outcome.trace.size(), 16u);
  for (const auto& rec : dpi.outcome.trace) {
    EXPECT_LE(std::abs(rec.error_norm - 0.01 * std::numbers::sqrt2), 1e-15);
  }
  const auto& ai = find(records, "ai-ik+pi");
  EXPECT_EQ(ai.outcome.status, SolveStatus::kConverged);
  EXPECT_NEAR(ai.outcome.trace[1].error_norm, 0.0145, 0.0145 * 0.05);
}

TEST(RunScenario, PropagatesUnknownModel) {
  Scenario s = builtin_scenario("iiwa-xz");
  s.robot = "puma560";
  EXPECT_THROW(run_scenario(s), ModelLoadError);
}

TEST_F(TempDir, EmptyRecordsGiveHeaderOnlyFiles) {
  const auto files = emit_traces({}, dir, "empty");
  EXPECT_EQ(slurp(files.traces), "method,seed,iter,error_norm,step_norm,rank,sigma_min\n");
  EXPECT_EQ(slurp(files.summary), "scenario,method,seed,status,final_error,iters\n");
  EXPECT_EQ(files.traces.filename(), "empty_traces.csv");
  EXPECT_EQ(files.summary.filename(), "empty_summary.csv");
}

TEST_F(TempDir, CsvRoundTripIsExact) {
  ScenarioOverrides o;
  o.seeds_count = 3;
  const Scenario s = apply_overrides(builtin_scenario("iiwa-xz"), o);
  const auto records = run_scenario(s);
  const auto files = emit_traces(records, dir, s.id);
  const auto rows = read_trace_csv(files.traces);
  std::size_t k = 0;
  for (const auto& r : records) {
    for (const auto& it : r.outcome.trace) {
      ASSERT_LT(k, rows.size());
      const TraceRow& row = rows[k++];
      EXPECT_EQ(row.method, r.method);
      EXPECT_EQ(row.seed, r.seed_label());
      EXPECT_EQ(row.iter, it.iter);
      EXPECT_EQ(row.error_norm, it.error_norm);
      EXPECT_EQ(row.step_norm, it.step_norm);
      EXPECT_EQ(row.rank, it.jacobian_rank);
      EXPECT_EQ(row.sigma_min, it.sigma_min);
    }
  }
  EXPECT_EQ(k, rows.size());
  const auto summary = read_summary_csv(files.summary);
  ASSERT_EQ(summary.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(summary[i].scenario, s.id);
    EXPECT_EQ(summary[i].method, records[i].method);
    EXPECT_EQ(summary[i].status, to_string(records[i].outcome.status));
    EXPECT_EQ(summary[i].final_error, records[i].outcome.trace.back().error_norm);
    EXPECT_EQ(summary[i].iters, records[i].outcome.trace.back().iter);
  }
}

TEST_F(TempDir, RerunIsByteIdentical) {
  const Scenario s = builtin_scenario("iiwa-xz");
  const auto first = emit_traces(run_scenario(s), dir / "a", s.id);
  const auto second = emit_traces(run_scenario(s), dir / "b", s.id);
  EXPECT_EQ(slurp(first.traces), slurp(second.traces));
  EXPECT_EQ(slurp(first.summary), slurp(second.summary));
}

TEST_F(TempDir, NonFiniteValuesSurviveRoundTrip) {
  RunRecord r;
  r.scenario_id = "x";
  r.method = "m";
  r.outcome.status = SolveStatus::kNumericalFailure;
  r.outcome.trace.push_back({0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0,
                             std::numeric_limits<double>::infinity(), VectorXd()});
  const auto files = emit_traces({r}, dir, "x");
  const auto rows = read_trace_csv(files.traces);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(std::isnan(rows[0].error_norm));
  EXPECT_TRUE(std::isinf(rows[0].sigma_min));
}

TEST_F(TempDir, IoErrorsNamePath) {
  fs::create_directories(dir);
  std::ofstream(dir / "blocker") << "file";
  try {
    emit_traces({}, dir / "blocker" / "sub", "x");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("blocker"), std::string::npos);
  }
  EXPECT_THROW(read_trace_csv(dir / "missing.csv"), IoError);
  std::ofstream(dir / "bad.csv") << "method,seed\nfoo\n";
  EXPECT_THROW(read_trace_csv(dir / "bad.csv"), IoError);
}

TEST(VerifySingularity, BuiltinCatalogPasses) {
  for (const auto& name : builtin_model_names()) {
    const RobotDefinition def = builtin_model(name);
    for (const auto& s : def.singularities) {
      const SingularityReport report = verify_singularity(def.model, s);
      EXPECT_TRUE(report.passed()) << name << "/" << s.name;
      EXPECT_EQ(report.checks.front().name, "structure");
    }
  }
}

TEST(VerifySingularity, FlagsRegularDirection) {
  const RobotDefinition def = make_iiwa14();
  SingularBasisd s;
  s.name = "bogus";
  s.config = VectorXd::Zero(7);
  s.basis = VectorXd::Zero(7);
  s.basis(1, 0) = std::sqrt(0.5);
  s.basis(3, 0) = std::sqrt(0.5);
  const SingularityReport report = verify_singularity(def.model, s);
  EXPECT_FALSE(report.passed());
  bool flagged = false;
  for (const auto& c : report.checks) {
    if (c.name == "singular-direction s1") flagged = !c.passed;
  }
  EXPECT_TRUE(flagged);
}

TEST(VerifySingularity, FlagsRegularConfiguration) {
  const RobotDefinition def = make_iiwa14();
  SingularBasisd s = def.singularity("stretched");
  s.config = VectorXd::Constant(7, 0.3);
  EXPECT_FALSE(verify_singularity(def.model, s).passed());
}

}  // namespace
}  // namespace aiik
