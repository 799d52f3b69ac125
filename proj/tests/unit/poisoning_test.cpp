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
#include "shs/error.hpp"
#include "shs/poisoning.hpp"

namespace shs {
namespace {

PoisonSpec spec(PoisonMode mode, double rate, std::uint64_t seed = 3) {
  PoisonSpec s;
  s.mode = mode;
  s.rate = rate;
  s.seed = seed;
  return s;
}

TEST(LabelFlip, FlipsExactlyTheRequestedShare) {
  const Dataset& train = testing::small_cohort().train;
  for (double rate : {0.0, 0.1, 0.25, 0.3}) {
    const auto [out, manifest] = poison(train, spec(PoisonMode::kLabelFlip, rate));
    const std::size_t k = static_cast<std::size_t>(std::floor(rate * train.size()));
    ASSERT_EQ(manifest.entries.size(), k);
    ASSERT_EQ(out.size(), train.size());
    std::size_t changed = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      EXPECT_EQ(out[i].values, train[i].values);
      changed += out[i].label != train[i].label;
    }
    EXPECT_EQ(changed, k);
    for (const auto& e : manifest.entries) {
      EXPECT_EQ(e.index, e.source_index);
      EXPECT_NE(e.new_label, e.original_label);
      EXPECT_EQ(out[e.index].label, e.new_label);
      EXPECT_EQ(train[e.index].label, e.original_label);
    }
  }
}

TEST(LabelFlip, TargetedFlipsLandOnTheTarget) {
  const Dataset& train = testing::small_cohort().train;
  PoisonSpec s = spec(PoisonMode::kLabelFlip, 0.2);
  s.flip_rule = FlipRule::toward(PatientState::kStroke);
  const auto [out, manifest] = poison(train, s);
  for (const auto& e : manifest.entries) {
    EXPECT_EQ(e.new_label, PatientState::kStroke);
    EXPECT_NE(e.original_label, PatientState::kStroke);
  }
  s.rate = 0.95;  // more than the non-target pool holds
  try {
    poison(train, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(Injection, AppendsFlippedCopies) {
  const Dataset& train = testing::small_cohort().train;
  const auto [out, manifest] = poison(train, spec(PoisonMode::kInjection, 0.1));
  const std::size_t k = static_cast<std::size_t>(std::floor(0.1 * train.size()));
  ASSERT_EQ(out.size(), train.size() + k);
  for (std::size_t i = 0; i < train.size(); ++i) EXPECT_EQ(out[i], train[i]);
  for (const auto& e : manifest.entries) {
    EXPECT_GE(e.index, train.size());
    EXPECT_EQ(out[e.index].values, train[e.source_index].values);
    EXPECT_NE(out[e.index].label, train[e.source_index].label);
  }
}

TEST(Modification, StaysWithinTheBoundAndKeepsLabels) {
  const Dataset& train = testing::small_cohort().train;
  const Scaler sc = fit_scaler(train);
  PoisonSpec s = spec(PoisonMode::kModification, 0.2);
  s.modification_threshold = 0.05;
  const auto [out, manifest] = poison(train, s);
  ASSERT_EQ(out.size(), train.size());
  ASSERT_EQ(manifest.entries.size(), static_cast<std::size_t>(std::floor(0.2 * train.size())));
  std::vector<bool> hit(train.size(), false);
  for (const auto& e : manifest.entries) hit[e.index] = true;
  for (std::size_t i = 0; i < train.size(); ++i) {
    EXPECT_EQ(out[i].label, train[i].label);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      const double bound = 0.05 * sc.range(static_cast<int>(f)) * (1 + 1e-8);
      EXPECT_LE(std::abs(out[i].values[f] - train[i].values[f]), bound);
      if (!hit[i]) EXPECT_EQ(out[i].values[f], train[i].values[f]);
    }
  }
}

TEST(Poison, SameSeedSameOutcome) {
  const Dataset& train = testing::small_cohort().train;
  for (PoisonMode m : {PoisonMode::kLabelFlip, PoisonMode::kInjection, PoisonMode::kModification}) {
    EXPECT_EQ(poison(train, spec(m, 0.2, 8)).first, poison(train, spec(m, 0.2, 8)).first);
    EXPECT_NE(poison(train, spec(m, 0.2, 8)).first.checksum(),
              poison(train, spec(m, 0.2, 9)).first.checksum());
  }
}

TEST(Poison, ValidateRejectsBadRates) {
  EXPECT_THROW(validate(spec(PoisonMode::kLabelFlip, -0.1)), Error);
  EXPECT_THROW(validate(spec(PoisonMode::kLabelFlip, 1.5)), Error);
  PoisonSpec s = spec(PoisonMode::kModification, 0.1);
  s.modification_threshold = -1.0;
  EXPECT_THROW(validate(s), Error);
}

TEST(Manifest, CsvListsEveryEntry) {
  const auto [out, manifest] =
      poison(testing::small_cohort().train, spec(PoisonMode::kLabelFlip, 0.1));
  std::ostringstream s;
  export_manifest_csv(manifest, s);
  std::istringstream in(s.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("index,source_index,", 0), 0u) << line;
  std::size_t rows = 0;
  while (std::getline(in, line)) rows += !line.empty();
  EXPECT_EQ(rows, manifest.entries.size());
}

TEST(Names, PoisonModesRoundTrip) {
  for (PoisonMode m : {PoisonMode::kLabelFlip, PoisonMode::kInjection, PoisonMode::kModification})
    EXPECT_EQ(parse_poison_mode(poison_mode_name(m)), m);
  EXPECT_FALSE(parse_poison_mode("backdoor").has_value());
}

TEST(CorruptLogic, TamperedParamsChangePredictions) {
  const Classifier& v = testing::victim(Algorithm::kLogisticRegression);
  const Classifier bad = corrupt_logic(v, [](Classifier::Params& p) {
    auto& m = std::get<LinearModel>(p);
    for (double& b : m.bias) b = 0.0;
    m.bias[to_index(PatientState::kStroke)] = 1e6;
  });
  for (const Sample& s : testing::head(testing::small_cohort().test, 20).samples())
    EXPECT_EQ(bad.predict(s.values), PatientState::kStroke);
  EXPECT_GT(accuracy(v, testing::small_cohort().test), accuracy(bad, testing::small_cohort().test));
}

TEST(Experiment, MediansAndTestSplitIntegrity) {
  const Dataset& all = testing::small_cohort().all;
  std::vector<TrainingConfig> configs{testing::quick_config(Algorithm::kDecisionTree),
                                      testing::quick_config(Algorithm::kLogisticRegression)};
  const auto rows = poisoning_experiment(configs, all, {0.0, 0.3}, {1, 2, 3});
  ASSERT_EQ(rows.size(), 4u);
  for (const PoisonRow& r : rows) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_EQ(r.seeds, 3u);
    if (r.rate == 0.0) EXPECT_DOUBLE_EQ(r.accuracy_drop, 0.0);
    EXPECT_GE(r.clean_accuracy, 0.0);
  }
  const auto again = poisoning_experiment(configs, all, {0.0, 0.3}, {1, 2, 3});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].algorithm, again[i].algorithm);
    EXPECT_EQ(rows[i].poisoned_accuracy, again[i].poisoned_accuracy);
    EXPECT_EQ(rows[i].accuracy_drop, again[i].accuracy_drop);
  }
}

}  // namespace
}  // namespace shs
