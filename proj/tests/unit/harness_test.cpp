// Copyright 2026 The SHS Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "shs/error.hpp"
#include "shs/harness.hpp"
#include "shs/stats.hpp"

namespace shs {
namespace {

CraftResult result(PatientState original, PatientState adversarial, bool success,
                   bool skipped = false) {
  CraftResult r;
  r.original_label = original;
  r.adversarial_label = adversarial;
  r.success = success;
  r.skipped = skipped;
  r.queries = 10;
  r.l2 = 0.5;
  return r;
}

TEST(Metrics, DropIsCleanMinusAdversarial) {
  const std::vector<CraftResult> rs{
      result(PatientState::kStress, PatientState::kStress, false),
      result(PatientState::kStress, PatientState::kStroke, true),
      result(PatientState::kSleeping, PatientState::kSleeping, false),
      result(PatientState::kSleeping, PatientState::kWalking, true)};
  const Metrics m = attack_metrics(rs, 90.16);
  EXPECT_DOUBLE_EQ(m.adversarial_accuracy, 50.0);
  EXPECT_DOUBLE_EQ(m.accuracy_drop, 90.16 - 50.0);
  EXPECT_DOUBLE_EQ(m.success_rate, 50.0);
  EXPECT_DOUBLE_EQ(m.mean_queries, 10.0);
  EXPECT_DOUBLE_EQ(m.mean_l2, 0.5);
  EXPECT_EQ(m.confusion[to_index(PatientState::kStress)][to_index(PatientState::kStroke)], 1u);
}

TEST(Metrics, SkippedResultsLeaveTheSuccessDenominator) {
  const std::vector<CraftResult> rs{
      result(PatientState::kStress, PatientState::kHeartAttack, true, true),
      result(PatientState::kStress, PatientState::kStress, false),
      result(PatientState::kStress, PatientState::kHeartAttack, true)};
  const Metrics m = attack_metrics(rs, 100.0);
  EXPECT_EQ(m.attempted, 2u);
  EXPECT_EQ(m.succeeded, 1u);
  EXPECT_DOUBLE_EQ(m.success_rate, 50.0);
}

TEST(Metrics, NoSuccessesAndNoResults) {
  const std::vector<CraftResult> rs{result(PatientState::kStress, PatientState::kStress, false)};
  EXPECT_DOUBLE_EQ(attack_metrics(rs, 80.0).success_rate, 0.0);
  EXPECT_DOUBLE_EQ(attack_metrics(rs, 80.0).accuracy_drop, -20.0);
  const Metrics empty = attack_metrics({}, 0.0);
  EXPECT_EQ(empty.evaluated, 0u);
  EXPECT_DOUBLE_EQ(empty.success_rate, 0.0);
}

TEST(Evaluate, ConfusionTraceIsAccuracy) {
  const Evaluation e =
      evaluate(testing::victim(Algorithm::kRandomForest), testing::small_cohort().test);
  std::size_t diag = 0, total = 0;
  for (std::size_t i = 0; i < kNumStates; ++i)
    for (std::size_t j = 0; j < kNumStates; ++j) {
      total += e.confusion[i][j];
      if (i == j) diag += e.confusion[i][j];
    }
  EXPECT_EQ(total, e.total);
  EXPECT_DOUBLE_EQ(e.accuracy, 100.0 * diag / total);
  EXPECT_DOUBLE_EQ(e.accuracy,
                   accuracy(testing::victim(Algorithm::kRandomForest), testing::small_cohort().test));
}

TEST(Stats, MedianOfOddAndEvenCounts) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

// Re-crafts with every strictly smaller device subset and expects failure.
void expect_minimal(const Classifier& v, const Sample& s, const AttackGoal& goal,
                    const DeviceSearchResult& found) {
  const std::size_t k = found.devices.count();
  for (unsigned bits = 1; bits < (1u << kNumDevices); ++bits) {
    const DeviceSet d(bits);
    if (d.count() >= k) continue;
    AttackConstraints c;
    c.mask = default_schema().mask_for(d);
    ModelAccess access(v, Capability::kLabelOracle);
    EXPECT_FALSE(decision_tree_attack(access, s.values, goal, c).success) << d;
  }
}

TEST(DeviceSearch, ExhaustiveResultIsMinimal) {
  const Classifier& v = testing::victim(Algorithm::kDecisionTree);
  const Dataset& test = testing::small_cohort().test;
  int checked = 0;
  for (std::size_t i = 0; i < test.size() && checked < 6; i += 7) {
    const AttackGoal goal = AttackGoal::toward(PatientState::kHeartAttack);
    if (v.predict(test[i].values) == goal.target) continue;
    const DeviceSearchResult r = minimal_device_search(
        v, test[i].values, goal, AttackKind::kDecisionTree, SearchStrategy::kExhaustive);
    if (!r.feasible) continue;
    ++checked;
    EXPECT_TRUE(r.result.success);
    EXPECT_TRUE((r.result.devices_touched & ~r.devices).none());
    expect_minimal(v, test[i], goal, r);
  }
  EXPECT_GT(checked, 0);
}

TEST(DeviceSearch, GreedyNeverBeatsExhaustive) {
  TrainingConfig cfg = testing::quick_config(Algorithm::kDecisionTree);
  cfg.tree.max_depth = 3;
  const Classifier v = train(cfg, testing::small_cohort().train);
  const Dataset& test = testing::small_cohort().test;
  for (std::size_t i = 0; i < 40; i += 3) {
    const AttackGoal goal = AttackGoal::untargeted();
    const auto ex = minimal_device_search(v, test[i].values, goal, AttackKind::kDecisionTree,
                                          SearchStrategy::kExhaustive);
    const auto gr = minimal_device_search(v, test[i].values, goal, AttackKind::kDecisionTree,
                                          SearchStrategy::kGreedy);
    if (gr.feasible) {
      ASSERT_TRUE(ex.feasible);
      EXPECT_GE(gr.devices.count(), ex.devices.count());
    }
  }
}

TEST(DeviceSearch, AlreadyAtTargetNeedsNoDevices) {
  const Classifier& v = testing::victim(Algorithm::kDecisionTree);
  const Sample& s = testing::small_cohort().test[0];
  const auto r = minimal_device_search(v, s.values, AttackGoal::toward(v.predict(s.values)),
                                       AttackKind::kDecisionTree, SearchStrategy::kExhaustive);
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.devices.count(), 0u);
}

TEST(Sweeps, ShapesFollowTheInputs) {
  const Classifier& v = testing::victim(Algorithm::kLogisticRegression);
  const Dataset slice = testing::head(testing::small_cohort().test, 15);
  SweepOptions o;
  o.base.threshold = 0.2;
  const auto dev = device_reduction_sweep(v, slice, BatchGoal::untargeted(), {AttackKind::kFgm},
                                          {devices::kInsulinPump, devices::kPulseOximeter}, o);
  ASSERT_EQ(dev.size(), 3u);
  for (std::size_t k = 0; k < dev.size(); ++k) EXPECT_DOUBLE_EQ(dev[k].step, k);
  for (const SweepRow& row : dev) EXPECT_TRUE(row.error.empty()) << row.error;
  const auto thr = threshold_sweep(v, slice, BatchGoal::untargeted(),
                                   {AttackKind::kFgm, AttackKind::kHopSkipJump}, {0.05, 0.1}, o);
  ASSERT_EQ(thr.size(), 4u);
  for (const SweepRow& row : thr) EXPECT_EQ(row.metrics.evaluated, slice.size());
  EXPECT_THROW(threshold_sweep(v, slice, BatchGoal::untargeted(), {AttackKind::kFgm}, {-1.0}, o),
               Error);
}

TEST(Config, JsonRoundTripIsStable) {
  for (Recipe r : all_recipes()) {
    const ExperimentConfig c = ExperimentConfig::defaults(r);
    const std::string j = to_json(c);
    EXPECT_EQ(to_json(config_from_json(j)), j) << recipe_name(r);
    EXPECT_EQ(config_hash(config_from_json(j)), config_hash(c));
  }
}

TEST(Config, RecipeDefaultsApply) {
  const ExperimentConfig c = config_from_json(R"({"recipe": "fig7"})");
  EXPECT_EQ(c.recipe, Recipe::kFig7);
  EXPECT_EQ(c.seeds.size(), 5u);
  EXPECT_EQ(c.samples, 150u);
  const ExperimentConfig t4 = config_from_json(R"({"recipe": "table4"})");
  EXPECT_FALSE(t4.threshold < std::numeric_limits<double>::infinity());
}

TEST(Config, HashIgnoresJobsAndOutputDir) {
  ExperimentConfig a = ExperimentConfig::defaults(Recipe::kTable5);
  ExperimentConfig b = a;
  b.jobs = 4;
  b.output_dir = "/tmp/elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.samples = 7;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, UnknownKeysAndBadValuesAreConfigErrors) {
  for (const char* text :
       {R"({"recipe": "table5", "samplez": 3})", R"({"models": {"svm": {}}})",
        R"({"recipe": "table9"})", R"({"samples": 0})", R"({"rates": [1.5]})",
        R"({"pairings": [{"attack": "fgm", "model": "rf"}]})", "not json"}) {
    try {
      config_from_json(text);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kConfig || e.code() == ErrorCode::kParse) << text;
    }
  }
}

TEST(Table, CsvQuotesWhenNeeded) {
  Table t{{"a", "b"}, {{"1", "x,y"}, {"2", "say \"hi\""}}};
  EXPECT_EQ(t.csv(), "a,b\n1,\"x,y\"\n2,\"say \"\"hi\"\"\"\n");
}

std::string tiny(const char* recipe) {
  return std::string(R"({"recipe": ")") + recipe +
         R"(", "dataset": {"per_class": 60}, "seeds": [1], "samples": 8,
              "device_samples": 3, "query_budget": 2000,
              "models": {"rf": {"n_trees": 8}, "lr": {"epochs": 200}, "nn": {"epochs": 40}},
              "attack_params": {"cw": {"iterations": 100, "binary_steps": 4},
                                "hsj": {"iterations": 10, "max_evals": 500}}})";
}

TEST(Recipes, Table5HasOneRowPerPairing) {
  const ExperimentReport r = run_experiment(config_from_json(tiny("table5")));
  EXPECT_TRUE(r.failures.empty());
  ASSERT_EQ(r.table.rows.size(), 4u);
  EXPECT_EQ(r.table.header.size(), 6u);
  EXPECT_EQ(r.attacks.size(), 4u);
  EXPECT_NE(r.svg.find("<svg"), std::string::npos);
  EXPECT_NE(r.manifest.find("config_hash"), std::string::npos);
}

TEST(Recipes, Table3IsAModelByRateGrid) {
  const ExperimentReport r = run_experiment(config_from_json(tiny("table3")));
  ASSERT_EQ(r.table.rows.size(), 4u);
  EXPECT_EQ(r.table.header.front(), "model");
  EXPECT_EQ(r.table.header.size(), 5u);  // model, clean, three rates
}

TEST(Recipes, RerunsAreByteIdentical) {
  for (const char* recipe : {"table4", "fig5"}) {
    const std::string cfg = tiny(recipe);
    EXPECT_EQ(run_experiment(config_from_json(cfg)).table.csv(),
              run_experiment(config_from_json(cfg)).table.csv())
        << recipe;
  }
}

TEST(Recipes, OutputsLandInTheOutputDir) {
  const auto dir = std::filesystem::temp_directory_path() / "shs_harness_test_out";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = config_from_json(tiny("table4"));
  c.output_dir = dir;
  const ExperimentReport r = run_experiment(c);
  for (const char* f : {"metrics_table4.csv", "plot_table4.svg", "manifest.txt"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  std::ifstream in(dir / "metrics_table4.csv");
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), r.table.csv());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace shs
