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

// Internal learners. Inputs are row-major normalized matrices.

#ifndef SHS_SRC_TRAINING_HPP_
#define SHS_SRC_TRAINING_HPP_

#include <span>
#include <vector>

#include "shs/models.hpp"
#include "shs/random.hpp"

namespace shs::detail {

struct Matrix {
  std::vector<double> values;  // rows x kNumFeatures
  std::vector<int> labels;
  std::size_t rows() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * kNumFeatures, kNumFeatures};
  }
};

Matrix normalize(const Dataset& ds, const Scaler& scaler);

// `features_per_split` < kNumFeatures draws a random subset at every node.
TreeStructure fit_tree(const Matrix& data, std::span<const std::size_t> rows,
                       int max_depth, int min_leaf, int features_per_split, Rng& rng);
ForestModel fit_forest(const Matrix& data, const ForestHyper& hyper, Rng& rng);
LinearModel fit_logistic(const Matrix& data, const LogisticHyper& hyper);
MlpModel fit_mlp(const Matrix& data, const NeuralNetHyper& hyper, Rng& rng);

ClassScores linear_logits(const LinearModel& m, std::span<const double> z);
ClassScores mlp_logits(const MlpModel& m, std::span<const double> z);
std::vector<double> mlp_vjp(const MlpModel& m, std::span<const double> z,
                            const ClassScores& cotangent);

}  // namespace shs::detail

#endif  // SHS_SRC_TRAINING_HPP_
