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

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "shs/datagen.hpp"
#include "shs/error.hpp"
#include "shs/format.hpp"

namespace shs {
namespace {

TEST(Generate, ClassCountsMatchTheSpec) {
  const Dataset ds = generate(GeneratorSpec::defaults(100, 7));
  EXPECT_EQ(ds.size(), 1100u);
  for (std::size_t n : ds.class_counts()) EXPECT_EQ(n, 100u);
}

TEST(Generate, DefaultCohortHasAboutSeventeenThousandRows) {
  const GeneratorSpec spec = GeneratorSpec::defaults();
  std::size_t total = 0;
  for (std::size_t n : spec.class_counts) total += n;
  EXPECT_EQ(total, 1546u * kNumStates);
}

TEST(Generate, SameSeedSameBytes) {
  const Dataset a = generate(GeneratorSpec::defaults(50, 9));
  const Dataset b = generate(GeneratorSpec::defaults(50, 9));
  const Dataset c = generate(GeneratorSpec::defaults(50, 10));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.checksum(), b.checksum());
  EXPECT_NE(a.checksum(), c.checksum());
}

TEST(Generate, ValuesSurviveNineDigitFormatting) {
  const Dataset ds = generate(GeneratorSpec::defaults(20, 3));
  for (const Sample& s : ds.samples())
    for (double v : s.values) EXPECT_EQ(round_g9(v), v);
}

TEST(Generate, NoiselessSamplesStayInsideTheirRule) {
  GeneratorSpec spec = GeneratorSpec::defaults(40, 11, 0.0);
  const Dataset ds = generate(spec);
  for (const Sample& s : ds.samples()) {
    const auto& rules = spec.rules[to_index(s.label)];
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      EXPECT_GE(s.values[f], rules[f].lo - 1e-6);
      EXPECT_LE(s.values[f], rules[f].hi + 1e-6);
    }
  }
}

TEST(Generate, AbnormalRulesFollowTheCorrelationTable) {
  const GeneratorSpec spec = GeneratorSpec::defaults();
  const CorrelationMatrix& corr = correlation_matrix();
  for (int s = 0; s < static_cast<int>(kNumStates); ++s) {
    for (int f = 0; f < static_cast<int>(kNumFeatures); ++f) {
      if (!corr.feature_marked(state_from_index(s), f)) EXPECT_FALSE(spec.rules[s][f].abnormal);
    }
  }
}

TEST(Generate, ValidateRejectsBadSpecs) {
  GeneratorSpec spec = GeneratorSpec::defaults(10);
  spec.noise_sigma = -1.0;
  EXPECT_THROW(validate(spec, default_schema(), correlation_matrix()), Error);
  spec = GeneratorSpec::defaults(10);
  spec.class_counts[3] = 0;
  EXPECT_THROW(validate(spec, default_schema(), correlation_matrix()), Error);
  spec = GeneratorSpec::defaults(10);
  spec.rules[0][0].lo = spec.rules[0][0].hi + 1.0;
  EXPECT_THROW(validate(spec, default_schema(), correlation_matrix()), Error);
}

TEST(Split, StratifiedDisjointAndComplete) {
  const Dataset& all = testing::small_cohort().all;
  const auto [train, test] = split(all, SplitSpec{0.7, 5, true});
  EXPECT_EQ(train.size() + test.size(), all.size());
  const auto tc = train.class_counts();
  const auto ac = all.class_counts();
  for (std::size_t k = 0; k < kNumStates; ++k) EXPECT_EQ(tc[k], 84u) << k;  // 0.7 * 120
  std::multiset<std::uint64_t> pool;
  auto key = [](const Sample& s) {
    return Dataset({s}, {}).checksum();
  };
  for (const Sample& s : all.samples()) pool.insert(key(s));
  for (const Dataset* part : {&train, &test}) {
    for (const Sample& s : part->samples()) {
      auto it = pool.find(key(s));
      ASSERT_NE(it, pool.end());
      pool.erase(it);
    }
  }
  EXPECT_TRUE(pool.empty());
  (void)ac;
}

TEST(Split, SeedControlsTheOrder) {
  const Dataset& all = testing::small_cohort().all;
  EXPECT_EQ(split(all, SplitSpec{0.7, 1, true}).first, split(all, SplitSpec{0.7, 1, true}).first);
  EXPECT_NE(split(all, SplitSpec{0.7, 1, true}).first.checksum(),
            split(all, SplitSpec{0.7, 2, true}).first.checksum());
}

TEST(Split, RejectsBadFractions) {
  const Dataset& all = testing::small_cohort().all;
  EXPECT_THROW(split(all, SplitSpec{0.0, 1, true}), Error);
  EXPECT_THROW(split(all, SplitSpec{1.0, 1, true}), Error);
}

TEST(Csv, RoundTripIsExact) {
  const Dataset ds = generate(GeneratorSpec::defaults(15, 4));
  std::stringstream s;
  export_csv(ds, s);
  const Dataset back = ingest_csv(s);
  EXPECT_EQ(back, ds);
}

TEST(Csv, HeaderListsFeaturesThenLabel) {
  std::stringstream s;
  export_csv(generate(GeneratorSpec::defaults(1, 4)), s);
  std::string header;
  std::getline(s, header);
  EXPECT_EQ(header.rfind("heart_rate,", 0), 0u);
  EXPECT_EQ(header.substr(header.size() - 6), ",label");
}

TEST(Csv, ParseErrorsNameRowAndColumn) {
  std::stringstream s;
  export_csv(generate(GeneratorSpec::defaults(1, 4)), s);
  std::string text = s.str();
  const std::size_t second_line = text.find('\n') + 1;
  text.replace(second_line, text.find(',', second_line) - second_line, "abc");
  std::istringstream in(text);
  try {
    ingest_csv(in, default_schema(), "cohort.csv");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("cohort.csv:2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("heart_rate"), std::string::npos) << e.what();
  }
}

TEST(Csv, UnknownLabelAndMissingFile) {
  std::istringstream in("heart_rate,label\n1,Drunk\n");
  EXPECT_THROW(ingest_csv(in), Error);
  try {
    ingest_csv(std::filesystem::path("/nonexistent/cohort.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(Scaler, FitsTrainingMinAndMax) {
  const Dataset& train = testing::small_cohort().train;
  const Scaler s = fit_scaler(train);
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    double lo = 1e300, hi = -1e300;
    for (const Sample& x : train.samples()) {
      lo = std::min(lo, x.values[f]);
      hi = std::max(hi, x.values[f]);
    }
    EXPECT_EQ(s.lo()[f], lo);
    EXPECT_EQ(s.hi()[f], hi);
  }
}

TEST(Scaler, ConstantFeatureIsRejected) {
  Sample a, b;
  a.values.fill(1.0);
  b.values.fill(2.0);
  b.values[4] = 1.0;
  try {
    fit_scaler(Dataset({a, b}, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("spo2"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace shs
