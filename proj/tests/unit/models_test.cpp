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
#include <cstring>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "shs/error.hpp"
#include "shs/models.hpp"
#include "shs/random.hpp"

namespace shs {
namespace {

constexpr Algorithm kAll[] = {Algorithm::kDecisionTree, Algorithm::kRandomForest,
                              Algorithm::kLogisticRegression, Algorithm::kNeuralNet};

// Cross-entropy through the public score path only.
double loss(const Classifier& c, std::span<const double> z, PatientState y) {
  return -std::log(c.scores_normalized(z)[to_index(y)]);
}

std::vector<double> random_point(Rng& rng) {
  std::vector<double> z(kNumFeatures);
  for (double& v : z) v = uniform(rng, 0.05, 0.95);
  return z;
}

class GradientOracle : public ::testing::TestWithParam<Algorithm> {};

TEST_P(GradientOracle, MatchesCentralDifferences) {
  const Classifier& c = testing::victim(GetParam());
  Rng rng(17);
  const double h = 1e-5;
  double worst = 0.0;
  for (int probe = 0; probe < 25; ++probe) {
    std::vector<double> z = random_point(rng);
    const PatientState y = state_from_index(static_cast<int>(uniform_index(rng, kNumStates)));
    const std::vector<double> g = c.input_gradient(std::span<const double>(z), y);
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      std::vector<double> up = z, dn = z;
      up[i] += h;
      dn[i] -= h;
      const double fd = (loss(c, up, y) - loss(c, dn, y)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[i]));
    }
  }
  EXPECT_LT(worst, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Differentiable, GradientOracle,
                         ::testing::Values(Algorithm::kLogisticRegression,
                                           Algorithm::kNeuralNet),
                         [](const auto& info) { return std::string(algorithm_name(info.param)); });

TEST(Gradient, TreesAndForestsRefuseGradients) {
  for (Algorithm a : {Algorithm::kDecisionTree, Algorithm::kRandomForest}) {
    const Classifier& c = testing::victim(a);
    EXPECT_FALSE(c.has_gradients());
    try {
      ModelAccess access(c, Capability::kGradientOracle);
      FAIL() << "expected a capability error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCapability);
    }
    std::vector<double> z(kNumFeatures, 0.5);
    EXPECT_THROW(c.logits_normalized(z), Error);
  }
}

TEST(Access, CountsEveryOracleCall) {
  const Classifier& c = testing::victim(Algorithm::kLogisticRegression);
  ModelAccess access(c, Capability::kGradientOracle);
  std::vector<double> z(kNumFeatures, 0.5);
  access.predict(z);
  access.scores(z);
  access.input_gradient(z, PatientState::kStress);
  EXPECT_EQ(access.queries(), 3u);
}

TEST(Access, LabelOracleHidesScores) {
  ModelAccess access(testing::victim(Algorithm::kNeuralNet), Capability::kLabelOracle);
  std::vector<double> z(kNumFeatures, 0.5);
  EXPECT_NO_THROW(access.predict(z));
  EXPECT_THROW(access.scores(z), Error);
  EXPECT_THROW(access.input_gradient(z, PatientState::kStress), Error);
}

TEST(Scores, SoftmaxSumsToOneAndIsStable) {
  ClassScores logits{};
  Rng rng(3);
  for (double& v : logits) v = uniform(rng, -800.0, 800.0);
  const ClassScores p = softmax(logits);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  for (double v : p) EXPECT_TRUE(std::isfinite(v));
}

TEST(Scores, ArgmaxBreaksTiesTowardTheLowestIndex) {
  ClassScores s{};
  s[4] = 0.5;
  s[7] = 0.5;
  EXPECT_EQ(argmax(s), 4);
  s.fill(0.0);
  EXPECT_EQ(argmax(s), 0);
}

TEST(Scores, EveryModelEmitsADistribution) {
  Rng rng(8);
  for (Algorithm a : kAll) {
    const Classifier& c = testing::victim(a);
    for (int i = 0; i < 20; ++i) {
      const ClassScores p = c.scores_normalized(random_point(rng));
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9) << algorithm_name(a);
      for (double v : p) EXPECT_GE(v, 0.0);
    }
  }
}

TEST(Scores, NonFiniteInputIsRejected) {
  std::vector<double> z(kNumFeatures, 0.5);
  z[3] = std::nan("");
  EXPECT_THROW(testing::victim(Algorithm::kDecisionTree).predict_normalized(z), Error);
  EXPECT_THROW(testing::victim(Algorithm::kDecisionTree).predict_normalized(
                   std::vector<double>(kNumFeatures - 1, 0.5)),
               Error);
}

TEST(Training, EveryAlgorithmLearnsTheSmallCohort) {
  for (Algorithm a : kAll) {
    const double acc = accuracy(testing::victim(a), testing::small_cohort().test);
    EXPECT_GT(acc, 70.0) << algorithm_name(a);
    EXPECT_LE(acc, 100.0);
  }
}

TEST(Training, SameSeedSameModel) {
  for (Algorithm a : kAll) {
    const Classifier one = train(testing::quick_config(a), testing::small_cohort().train);
    std::ostringstream x, y;
    one.save(x);
    testing::victim(a).save(y);
    EXPECT_EQ(x.str(), y.str()) << algorithm_name(a);
  }
}

TEST(Training, ValidateRejectsBadHyperparameters) {
  TrainingConfig c = TrainingConfig::defaults(Algorithm::kNeuralNet);
  c.nn.hidden = {};
  EXPECT_THROW(validate(c), Error);
  c = TrainingConfig::defaults(Algorithm::kLogisticRegression);
  c.logistic.learning_rate = -1.0;
  EXPECT_THROW(validate(c), Error);
  c = TrainingConfig::defaults(Algorithm::kRandomForest);
  c.forest.n_trees = 0;
  EXPECT_THROW(validate(c), Error);
  c = TrainingConfig::defaults(Algorithm::kDecisionTree);
  c.tree.max_depth = 0;
  EXPECT_THROW(validate(c), Error);
}

TEST(Serialization, RoundTripIsBitExact) {
  Rng rng(21);
  for (Algorithm a : kAll) {
    const Classifier& c = testing::victim(a);
    std::stringstream buf;
    c.save(buf);
    const Classifier back = Classifier::load(buf);
    EXPECT_EQ(back.scaler(), c.scaler());
    for (int i = 0; i < 50; ++i) {
      const auto z = random_point(rng);
      const ClassScores p = c.scores_normalized(z);
      const ClassScores q = back.scores_normalized(z);
      EXPECT_EQ(std::memcmp(p.data(), q.data(), sizeof(p)), 0) << algorithm_name(a);
    }
    std::ostringstream again;
    back.save(again);
    EXPECT_EQ(again.str(), buf.str());
  }
}

TEST(Serialization, CorruptStreamsAreParseErrors) {
  std::stringstream buf;
  testing::victim(Algorithm::kLogisticRegression).save(buf);
  std::string bytes = buf.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  try {
    Classifier::load(truncated);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
  bytes[0] = 'X';
  std::istringstream bad_magic(bytes);
  EXPECT_THROW(Classifier::load(bad_magic), Error);
}

TEST(Tree, LeafForFollowsThresholds) {
  // x0 <= 0.5 ? leaf 1 : (x1 <= 0.25 ? leaf 3 : leaf 4)
  TreeStructure t;
  t.nodes.resize(5);
  t.nodes[0] = {0, 0.5, 1, 2, 0, {}};
  t.nodes[2] = {1, 0.25, 3, 4, 0, {}};
  std::vector<double> z(kNumFeatures, 0.0);
  z[0] = 0.5;
  EXPECT_EQ(t.leaf_for(z), 1);
  z[0] = 0.51;
  EXPECT_EQ(t.leaf_for(z), 3);
  z[1] = 0.3;
  EXPECT_EQ(t.leaf_for(z), 4);
  EXPECT_EQ(t.leaf_count(), 3u);
  EXPECT_EQ(t.internal_count(), 2u);
  EXPECT_EQ(t.depth(), 2);
}

TEST(Tree, TrainedTreeRespectsHyperparameters) {
  const TreeStructure& t = testing::victim(Algorithm::kDecisionTree).tree_structure();
  EXPECT_LE(t.depth(), testing::quick_config(Algorithm::kDecisionTree).tree.max_depth);
  EXPECT_EQ(t.leaf_count(), t.internal_count() + 1);
  EXPECT_THROW(testing::victim(Algorithm::kRandomForest).tree_structure(), Error);
}

TEST(Names, AlgorithmsRoundTrip) {
  for (Algorithm a : kAll) EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_EQ(algorithm_label(Algorithm::kNeuralNet), "ANN");
  EXPECT_FALSE(parse_algorithm("svm").has_value());
}

TEST(Describe, NamesAlgorithmAndSeed) {
  const std::string d = testing::victim(Algorithm::kRandomForest).describe();
  EXPECT_NE(d.find("RF"), std::string::npos);
  EXPECT_NE(d.find("n_trees: 10"), std::string::npos);
}

}  // namespace
}  // namespace shs
