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

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "shs/attacks.hpp"
#include "shs/error.hpp"

namespace shs {
namespace {

AttackConstraints bounded(double t) {
  AttackConstraints c;
  c.threshold = t;
  return c;
}

TEST(Fgm, StepsEpsilonAlongTheLossGradientSign) {
  Rng rng(1);
  const auto lr = oracles::two_class_lr(rng);
  const VitalVector x = oracles::point_at_distance(lr, rng, 0.3);
  ASSERT_EQ(lr.model.predict(x), PatientState::kHighBloodPressure);
  AttackConstraints c = bounded(0.05);
  c.mask.reset(3);
  ModelAccess access(lr.model, Capability::kGradientOracle);
  const CraftResult r = fgm(access, x, AttackGoal::untargeted(), c);
  // Untargeted loss at class 0 rises along sign(w1 - w0) when only two classes compete.
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const double want = f == 3 ? x[f] : x[f] + 0.05 * (lr.normal[f] > 0 ? 1.0 : -1.0);
    EXPECT_NEAR(r.z_adversarial[f], want, 1e-12) << f;
  }
  EXPECT_EQ(r.adversarial[3], x[3]);
  EXPECT_EQ(r.queries, 2u);
}

TEST(Fgm, TargetedStepDescendsTowardTheTarget) {
  Rng rng(2);
  const auto lr = oracles::two_class_lr(rng);
  const VitalVector x = oracles::point_at_distance(lr, rng, 0.05);
  ModelAccess access(lr.model, Capability::kGradientOracle);
  const CraftResult r =
      fgm(access, x, AttackGoal::toward(PatientState::kHighCholesterol), bounded(0.1));
  EXPECT_GT(lr.signed_distance(r.z_adversarial), lr.signed_distance(r.z_original));
  EXPECT_TRUE(r.success);
}

TEST(Fgm, NeedsAFiniteThreshold) {
  ModelAccess access(testing::victim(Algorithm::kLogisticRegression),
                     Capability::kGradientOracle);
  EXPECT_THROW(fgm(access, testing::small_cohort().test[0].values, AttackGoal::untargeted(), {}),
               Error);
}

TEST(CarliniWagner, MatchesTheHyperplaneDistance) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto lr = oracles::two_class_lr(rng);
    const double d = uniform(rng, 0.02, 0.1);
    const VitalVector x = oracles::point_at_distance(lr, rng, d);
    ModelAccess access(lr.model, Capability::kGradientOracle);
    const CraftResult r = carlini_wagner(access, x, AttackGoal::untargeted(), {});
    ASSERT_TRUE(r.success) << trial;
    EXPECT_NEAR(r.l2, d, 0.05 * d) << trial;
  }
}

TEST(Zoo, SymmetricDifferenceOfSquare) {
  std::vector<double> z{1.0};
  const double g =
      symmetric_difference([](std::span<const double> v) { return v[0] * v[0]; }, z, 0, 0.1);
  EXPECT_NEAR(g, 2.0, 1e-12);
}

TEST(Zoo, FindsAnAdversarialOnASmoothVictim) {
  const Classifier& v = testing::victim(Algorithm::kLogisticRegression);
  int wins = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    ModelAccess access(v, Capability::kScoreOracle);
    wins += zoo(access, testing::small_cohort().test[i].values, AttackGoal::untargeted(),
                bounded(0.3))
                .success;
  }
  EXPECT_GT(wins, 0);
}

TEST(HopSkipJump, DistanceTraceNeverIncreases) {
  const Classifier& v = testing::victim(Algorithm::kNeuralNet);
  for (std::size_t i = 0; i < 5; ++i) {
    ModelAccess access(v, Capability::kLabelOracle);
    CraftOptions o;
    o.seed = i;
    const CraftResult r = hop_skip_jump(access, testing::small_cohort().test[i].values,
                                        AttackGoal::untargeted(), {}, o);
    for (std::size_t k = 1; k < r.trace.size(); ++k) EXPECT_LE(r.trace[k], r.trace[k - 1]);
  }
}

TEST(HopSkipJump, UnboundedUntargetedUsuallySucceeds) {
  const Classifier& v = testing::victim(Algorithm::kDecisionTree);
  int wins = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    ModelAccess access(v, Capability::kLabelOracle);
    wins += hop_skip_jump(access, testing::small_cohort().test[i].values,
                          AttackGoal::untargeted(), {})
                .success;
  }
  EXPECT_GE(wins, 8);
}

TEST(TreeAttack, StumpCrossesWithTheOffset) {
  TreeStructure t;
  t.nodes.resize(3);
  t.nodes[0] = {2, 0.4, 1, 2, 0, {}};
  t.nodes[1].label = 0;
  t.nodes[1].distribution[0] = 1.0;
  t.nodes[2].label = 5;
  t.nodes[2].distribution[5] = 1.0;
  const Classifier c(TrainingConfig::defaults(Algorithm::kDecisionTree), Scaler::identity(), t);
  VitalVector x{};
  x.fill(0.3);
  ModelAccess access(c, Capability::kLabelOracle);
  const CraftResult r = decision_tree_attack(access, x, AttackGoal::untargeted(), {});
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.adversarial_label, PatientState::kSleeping);
  EXPECT_NEAR(r.z_adversarial[2], 0.41, 1e-12);
  EXPECT_EQ(oracles::changed_features(r), 1);
  // A threshold below the gap leaves the stump unbeatable.
  ModelAccess again(c, Capability::kLabelOracle);
  EXPECT_FALSE(decision_tree_attack(again, x, AttackGoal::untargeted(), bounded(0.05)).success);
}

TEST(TreeAttack, ChangedFeaturesMatchExhaustiveEnumeration) {
  Rng rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Classifier c = oracles::random_tree(rng);
    std::vector<double> z(kNumFeatures);
    for (double& v : z) v = uniform01(rng);
    VitalVector x;
    std::copy(z.begin(), z.end(), x.begin());
    const PatientState ref = c.predict_normalized(z);
    const AttackGoal goal = trial % 2 ? AttackGoal::untargeted()
                                      : AttackGoal::toward(state_from_index((to_index(ref) + 1) % 3));
    const auto want = oracles::min_changes_by_enumeration(c, z, goal, ref, FeatureMask().set(),
                                                          std::numeric_limits<double>::infinity());
    ModelAccess access(c, Capability::kLabelOracle);
    const CraftResult r = decision_tree_attack(access, x, goal, {});
    if (!want) {
      EXPECT_FALSE(r.success) << trial;
      continue;
    }
    ++feasible;
    ASSERT_TRUE(r.success) << trial;
    EXPECT_EQ(oracles::changed_features(r), *want) << trial;
  }
  EXPECT_GT(feasible, 30);
}

TEST(TreeAttack, RequiresADecisionTree) {
  ModelAccess access(testing::victim(Algorithm::kRandomForest), Capability::kLabelOracle);
  try {
    decision_tree_attack(access, testing::small_cohort().test[0].values, AttackGoal::untargeted(),
                         {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapability);
  }
}

TEST(Capability, GradientAttacksRefuseBlackBoxAccess) {
  ModelAccess labels(testing::victim(Algorithm::kLogisticRegression), Capability::kLabelOracle);
  const VitalVector& x = testing::small_cohort().test[0].values;
  EXPECT_THROW(fgm(labels, x, AttackGoal::untargeted(), bounded(0.1)), Error);
  EXPECT_THROW(carlini_wagner(labels, x, AttackGoal::untargeted(), bounded(0.1)), Error);
  EXPECT_THROW(zoo(labels, x, AttackGoal::untargeted(), bounded(0.1)), Error);
  EXPECT_FALSE(attack_supports(AttackKind::kFgm, Algorithm::kRandomForest));
  EXPECT_TRUE(attack_supports(AttackKind::kZoo, Algorithm::kRandomForest));
}

TEST(Constraints, ValidateRejectsEmptyMaskAndNegativeThreshold) {
  AttackConstraints c;
  c.mask.reset();
  EXPECT_THROW(validate(c), Error);
  c = bounded(-0.1);
  EXPECT_THROW(validate(c), Error);
}

struct Case {
  AttackKind attack;
  Algorithm victim;
};

// Property: every attack honours mask, threshold, box and budget.
TEST(Constraints, RandomInvocationsNeverViolateHardLimits) {
  const Case cases[] = {{AttackKind::kFgm, Algorithm::kLogisticRegression},
                        {AttackKind::kFgm, Algorithm::kNeuralNet},
                        {AttackKind::kCarliniWagner, Algorithm::kNeuralNet},
                        {AttackKind::kHopSkipJump, Algorithm::kDecisionTree},
                        {AttackKind::kHopSkipJump, Algorithm::kLogisticRegression},
                        {AttackKind::kZoo, Algorithm::kRandomForest},
                        {AttackKind::kZoo, Algorithm::kNeuralNet},
                        {AttackKind::kDecisionTree, Algorithm::kDecisionTree}};
  Rng rng(2026);
  const Dataset& test = testing::small_cohort().test;
  CraftOptions o;
  o.params.cw.iterations = 50;
  o.params.cw.binary_steps = 3;
  o.params.hsj.iterations = 5;
  o.params.hsj.max_evals = 200;
  for (int n = 0; n < 120; ++n) {
    const Case& k = cases[n % std::size(cases)];
    AttackConstraints c;
    DeviceSet d(uniform_index(rng, (1u << kNumDevices) - 1) + 1);
    c.mask = default_schema().mask_for(d);
    c.threshold = (k.attack == AttackKind::kFgm || uniform01(rng) < 0.7)
                      ? uniform(rng, 0.0, 0.5)
                      : std::numeric_limits<double>::infinity();
    c.query_budget = 1 + uniform_index(rng, 400);
    const Sample& s = test[uniform_index(rng, test.size())];
    const AttackGoal goal =
        uniform01(rng) < 0.5
            ? AttackGoal::untargeted()
            : AttackGoal::toward(state_from_index(static_cast<int>(uniform_index(rng, kNumStates))));
    ModelAccess access(testing::victim(k.victim), required_capability(k.attack));
    o.seed = n;
    const CraftResult r = craft(k.attack, access, s.values, goal, c, o);
    EXPECT_EQ(oracles::constraint_violation(r, c), "")
        << attack_name(k.attack) << " on " << algorithm_name(k.victim) << " case " << n;
    EXPECT_LE(access.queries(), c.query_budget);
  }
}

TEST(Batch, NextClassGoalAndSkippedSamples) {
  const Classifier& v = testing::victim(Algorithm::kDecisionTree);
  const Dataset slice = testing::head(testing::small_cohort().test, 20);
  const auto results =
      batch_attack(v, slice, BatchGoal::next_class(), {}, AttackKind::kDecisionTree);
  ASSERT_EQ(results.size(), 20u);
  for (const CraftResult& r : results) {
    EXPECT_TRUE(r.goal.targeted);
    EXPECT_EQ(to_index(r.goal.target), (to_index(slice[r.index].label) + 1) % 11);
    if (r.skipped) EXPECT_EQ(v.predict(r.original), r.goal.target);
  }
}

TEST(Batch, ParallelRunMatchesSerial) {
  const Classifier& v = testing::victim(Algorithm::kRandomForest);
  const Dataset slice = testing::head(testing::small_cohort().test, 12);
  BatchOptions one, many;
  many.jobs = 3;
  AttackConstraints c = bounded(0.2);
  c.query_budget = 300;
  std::ostringstream a, b;
  export_results_csv(batch_attack(v, slice, BatchGoal::untargeted(), c, AttackKind::kZoo, one), a);
  export_results_csv(batch_attack(v, slice, BatchGoal::untargeted(), c, AttackKind::kZoo, many), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Names, AttacksRoundTrip) {
  for (AttackKind k : kAllAttacks) EXPECT_EQ(parse_attack(attack_name(k)), k);
  EXPECT_EQ(parse_attack("HopSkipJump"), AttackKind::kHopSkipJump);
  EXPECT_FALSE(parse_attack("pgd").has_value());
}

}  // namespace
}  // namespace shs
