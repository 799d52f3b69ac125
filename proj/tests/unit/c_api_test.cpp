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

// Uses only the public C header; this binary links the shared library alone.

#include <gtest/gtest.h>

#include <cstdio>
#include <string>

#include "shs/shs.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  shs_string_free(s);
  return out;
}

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(shs_dataset_generate(42, 40, 0.05, &all_), SHS_OK);
    ASSERT_EQ(shs_dataset_split(all_, 0.7, 42, &train_, &test_), SHS_OK);
  }
  void TearDown() override {
    shs_dataset_free(all_);
    shs_dataset_free(train_);
    shs_dataset_free(test_);
  }
  shs_dataset* all_ = nullptr;
  shs_dataset* train_ = nullptr;
  shs_dataset* test_ = nullptr;
};

TEST_F(CApi, VersionAndSizes) {
  EXPECT_STREQ(shs_version(), "1.0.0");
  size_t n = 0, a = 0, b = 0;
  ASSERT_EQ(shs_dataset_size(all_, &n), SHS_OK);
  EXPECT_EQ(n, 440u);
  shs_dataset_size(train_, &a);
  shs_dataset_size(test_, &b);
  EXPECT_EQ(a + b, n);
  size_t counts[SHS_NUM_STATES];
  ASSERT_EQ(shs_dataset_class_counts(all_, counts), SHS_OK);
  for (size_t c : counts) EXPECT_EQ(c, 40u);
}

TEST_F(CApi, StatusCodesAndLastError) {
  shs_dataset* ds = nullptr;
  EXPECT_EQ(shs_dataset_load_csv("/nonexistent/x.csv", &ds), SHS_IO);
  EXPECT_NE(std::string(shs_last_error()).find("/nonexistent/x.csv"), std::string::npos);
  EXPECT_EQ(ds, nullptr);
  EXPECT_EQ(shs_dataset_size(nullptr, nullptr), SHS_INVALID_ARGUMENT);
  shs_model* m = nullptr;
  EXPECT_EQ(shs_model_train("svm", train_, 1, &m), SHS_INVALID_ARGUMENT);
  EXPECT_NE(std::string(shs_last_error()).find("svm"), std::string::npos);
  char* out = nullptr;
  EXPECT_EQ(shs_config_resolve("{\"bogus\": 1}", &out), SHS_CONFIG);
  EXPECT_EQ(shs_config_resolve("{", &out), SHS_PARSE);
  shs_dataset_free(nullptr);
  shs_model_free(nullptr);
  shs_report_free(nullptr);
}

TEST_F(CApi, TrainSaveLoadPredict) {
  shs_model* m = nullptr;
  ASSERT_EQ(shs_model_train("dt", train_, 7, &m), SHS_OK);
  double acc = 0.0;
  ASSERT_EQ(shs_model_accuracy(m, test_, &acc), SHS_OK);
  EXPECT_GT(acc, 50.0);
  const std::string path = ::testing::TempDir() + "shs_c_api_model.shs";
  ASSERT_EQ(shs_model_save(m, path.c_str()), SHS_OK);
  shs_model* back = nullptr;
  ASSERT_EQ(shs_model_load(path.c_str(), &back), SHS_OK);
  double acc2 = 0.0;
  shs_model_accuracy(back, test_, &acc2);
  EXPECT_EQ(acc, acc2);
  double x[SHS_NUM_FEATURES] = {80, 110, 70, 100, 97, 16, 0.3, 0.01, 15, 2, 6, 10, 20, 0.5, 0.2};
  int a = -1, b = -1;
  ASSERT_EQ(shs_model_predict(m, x, &a), SHS_OK);
  ASSERT_EQ(shs_model_predict(back, x, &b), SHS_OK);
  EXPECT_EQ(a, b);
  EXPECT_GE(a, 0);
  EXPECT_LT(a, SHS_NUM_STATES);
  char* info = nullptr;
  ASSERT_EQ(shs_model_info(m, &info), SHS_OK);
  EXPECT_NE(take(info).find("DT"), std::string::npos);
  // Wrong attack for the victim.
  EXPECT_EQ(shs_attack_batch(m, test_, "fgm", -1, 0.1, 0, 100, 1, 1, nullptr, nullptr, nullptr,
                             nullptr),
            SHS_CAPABILITY);
  shs_model_free(m);
  shs_model_free(back);
  std::remove(path.c_str());
}

TEST_F(CApi, AttackBatchReportsCsvAndFigures) {
  shs_model* m = nullptr;
  ASSERT_EQ(shs_model_train("lr", train_, 7, &m), SHS_OK);
  shs_dataset* slice = nullptr;
  ASSERT_EQ(shs_dataset_head(test_, 10, &slice), SHS_OK);
  char* csv = nullptr;
  double clean = -1, drop = -1, success = -1;
  ASSERT_EQ(shs_attack_batch(m, slice, "fgm", -1, 0.0, 0, 100, 1, 1, &csv, &clean, &drop,
                             &success),
            SHS_OK);
  EXPECT_DOUBLE_EQ(drop, 0.0);
  const std::string text = take(csv);
  size_t lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 11u);
  EXPECT_EQ(shs_attack_batch(m, slice, "fgm", 12, 0.1, 0, 100, 1, 1, nullptr, nullptr, nullptr,
                             nullptr),
            SHS_INVALID_ARGUMENT);
  EXPECT_EQ(shs_attack_batch(m, slice, "fgm", -1, 0.1, 1u << 9, 100, 1, 1, nullptr, nullptr,
                             nullptr, nullptr),
            SHS_INVALID_ARGUMENT);
  shs_dataset_free(slice);
  shs_model_free(m);
}

TEST_F(CApi, PoisonWritesAManifest) {
  shs_dataset* out = nullptr;
  char* manifest = nullptr;
  ASSERT_EQ(shs_poison(train_, "label_flip", 0.1, 3, &out, &manifest), SHS_OK);
  const std::string text = take(manifest);
  EXPECT_EQ(text.rfind("index,", 0), 0u);
  EXPECT_EQ(shs_poison(train_, "backdoor", 0.1, 3, &out, &manifest), SHS_INVALID_ARGUMENT);
  shs_dataset_free(out);
}

TEST(CApiExperiment, ResolveAndRun) {
  char* resolved = nullptr;
  ASSERT_EQ(shs_config_resolve("{\"recipe\": \"table4\"}", &resolved), SHS_OK);
  EXPECT_NE(take(resolved).find("\"recipe\": \"table4\""), std::string::npos);
  shs_report* r = nullptr;
  ASSERT_EQ(shs_run_experiment(
                "{\"recipe\": \"table4\", \"dataset\": {\"per_class\": 40}, \"device_samples\": 2}",
                &r),
            SHS_OK);
  char* csv = nullptr;
  ASSERT_EQ(shs_report_csv(r, &csv), SHS_OK);
  EXPECT_EQ(take(csv).rfind("current,final,", 0), 0u);
  size_t failures = 99;
  ASSERT_EQ(shs_report_failures(r, &failures), SHS_OK);
  EXPECT_EQ(failures, 0u);
  char* svg = nullptr;
  ASSERT_EQ(shs_report_svg(r, &svg), SHS_OK);
  EXPECT_NE(take(svg).find("<svg"), std::string::npos);
  char* manifest = nullptr;
  ASSERT_EQ(shs_report_manifest(r, &manifest), SHS_OK);
  EXPECT_NE(take(manifest).find("recipe table4"), std::string::npos);
  shs_report_free(r);
}

}  // namespace
