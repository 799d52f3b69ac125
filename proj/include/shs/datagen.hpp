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

// Synthetic cohort generation, train/test splitting, CSV exchange and scaler
// fitting.
//
// Each (state, feature) pair has exactly one sampling rule. Features whose
// signal group is marked for the state in the correlation table draw from the
// state's abnormal interval, all others draw uniformly from the feature's
// normal range. Gaussian noise (sd = noise_sigma * normal width) is added and
// the value clipped to [lo - 3w, hi + 3w] and to non-negative values. Values
// are rounded to nine significant digits so CSV export is lossless.

#ifndef SHS_DATAGEN_HPP_
#define SHS_DATAGEN_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>

#include "shs/domain.hpp"

namespace shs {

struct FeatureRule {
  bool abnormal = false;
  double lo = 0.0;  // physical units
  double hi = 1.0;
};

struct GeneratorSpec {
  std::array<std::array<FeatureRule, kNumFeatures>, kNumStates> rules{};
  double noise_sigma = 0.05;
  std::array<std::size_t, kNumStates> class_counts{};
  std::uint64_t seed = 42;

  // Default abnormal-interval table, every class with `per_class` samples.
  static GeneratorSpec defaults(std::size_t per_class = 1546, std::uint64_t seed = 42,
                                double noise_sigma = 0.05,
                                const FeatureSchema& schema = default_schema(),
                                const CorrelationMatrix& corr = correlation_matrix());
};

// Throws Error(kConfig) when rules disagree with the correlation table, an
// interval is empty, a count is zero or the noise is negative.
void validate(const GeneratorSpec& spec, const FeatureSchema& schema,
              const CorrelationMatrix& corr);

Dataset generate(const GeneratorSpec& spec, const FeatureSchema& schema = default_schema(),
                 const CorrelationMatrix& corr = correlation_matrix());

struct SplitSpec {
  double train_fraction = 0.70;
  std::uint64_t seed = 42;
  bool stratified = true;
};

// Returns (train, test). Both halves are shuffled under the seed.
std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

// Header `f0_name,...,f14_name,label`; nine significant digits.
void export_csv(const Dataset& ds, std::ostream& out);
void export_csv(const Dataset& ds, const std::filesystem::path& path);

// Throws Error(kParse) naming the offending row/column, Error(kIo) when the
// file cannot be opened.
Dataset ingest_csv(std::istream& in, const FeatureSchema& schema = default_schema(),
                   const std::string& source = "<stream>");
Dataset ingest_csv(const std::filesystem::path& path,
                   const FeatureSchema& schema = default_schema());

// Min/max per feature over `train`. Throws Error(kInvalidArgument) listing
// the constant features.
Scaler fit_scaler(const Dataset& train);

}  // namespace shs

#endif  // SHS_DATAGEN_HPP_
