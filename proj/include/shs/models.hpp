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

// The four victim classifiers (CART tree, random forest, multinomial
// logistic regression, multilayer perceptron) and the graded model-access
// interface the attacks consume.
//
// All model math happens in scaler-normalized space. The `*_normalized`
// methods take a normalized 15-vector; the physical-unit overloads apply the
// classifier's scaler first.

#ifndef SHS_MODELS_HPP_
#define SHS_MODELS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "shs/domain.hpp"

namespace shs {

enum class Algorithm : int {
  kDecisionTree = 0,
  kRandomForest = 1,
  kLogisticRegression = 2,
  kNeuralNet = 3,
};

std::string_view algorithm_name(Algorithm a);   // "dt", "rf", "lr", "nn"
std::string_view algorithm_label(Algorithm a);  // "DT", "RF", "LR", "ANN"
std::optional<Algorithm> parse_algorithm(std::string_view name);

enum class Activation : int { kRelu = 0, kTanh = 1 };

struct TreeHyper {
  int max_depth = 12;
  int min_leaf = 5;
};

struct ForestHyper {
  int n_trees = 50;
  int feature_subsample = 4;
  int max_depth = 16;
  int min_leaf = 1;
};

struct LogisticHyper {
  double learning_rate = 0.1;
  int epochs = 1000;
  double l2 = 1e-4;
};

struct NeuralNetHyper {
  std::vector<int> hidden = {32};
  Activation activation = Activation::kRelu;
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;
};

struct TrainingConfig {
  Algorithm algorithm = Algorithm::kDecisionTree;
  std::uint64_t seed = 42;
  TreeHyper tree;
  ForestHyper forest;
  LogisticHyper logistic;
  NeuralNetHyper nn;

  static TrainingConfig defaults(Algorithm a, std::uint64_t seed = 42);
};

// Throws Error(kConfig) for non-positive hyperparameters.
void validate(const TrainingConfig& config);

using ClassScores = std::array<double, kNumStates>;

// Axis-aligned binary tree. Internal nodes route `z[feature] <= threshold`
// to `left`; leaves carry the training class frequencies.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
  ClassScores distribution{};

  bool is_leaf() const { return feature < 0; }
};

struct TreeStructure {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int leaf_for(std::span<const double> z) const;
  std::size_t leaf_count() const;
  std::size_t internal_count() const;
  int depth() const;
};

struct ForestModel {
  std::vector<TreeStructure> trees;
};

// Logits = weights * z + bias, weights row-major kNumStates x kNumFeatures.
struct LinearModel {
  std::vector<double> weights;
  std::vector<double> bias;
};

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;  // row-major out x in
  std::vector<double> bias;
};

struct MlpModel {
  std::vector<DenseLayer> layers;  // last layer produces the logits
  Activation activation = Activation::kRelu;
};

class Classifier {
 public:
  using Params = std::variant<TreeStructure, ForestModel, LinearModel, MlpModel>;

  Classifier(TrainingConfig config, Scaler scaler, Params params, double train_accuracy = 0.0);

  Algorithm algorithm() const { return config_.algorithm; }
  const TrainingConfig& config() const { return config_; }
  const Scaler& scaler() const { return scaler_; }
  const Params& params() const { return params_; }
  double train_accuracy() const { return train_accuracy_; }
  bool has_gradients() const {
    return algorithm() == Algorithm::kLogisticRegression || algorithm() == Algorithm::kNeuralNet;
  }

  // Normalized space. Inputs must be finite 15-vectors (Error(kInvalidArgument)).
  ClassScores scores_normalized(std::span<const double> z) const;
  PatientState predict_normalized(std::span<const double> z) const;
  // LR / NN only; Error(kCapability) otherwise.
  ClassScores logits_normalized(std::span<const double> z) const;
  // Gradient of sum_k cotangent[k] * logit_k with respect to z.
  std::vector<double> logits_vjp(std::span<const double> z, const ClassScores& cotangent) const;
  // Gradient of the cross-entropy loss at label y with respect to z.
  std::vector<double> input_gradient(std::span<const double> z, PatientState y) const;
  // DecisionTree only; Error(kCapability) otherwise.
  const TreeStructure& tree_structure() const;

  // Physical units.
  PatientState predict(const VitalVector& x) const;
  ClassScores class_scores(const VitalVector& x) const;
  ClassScores logits(const VitalVector& x) const;
  std::vector<double> input_gradient(const VitalVector& x, PatientState y) const;

  // Versioned, length-prefixed little-endian binary; doubles are stored bit-exact.
  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static Classifier load(std::istream& in);
  static Classifier load(const std::filesystem::path& path);

  // Human-readable summary: algorithm, hyperparameters, seed, train accuracy.
  std::string describe() const;

 private:
  TrainingConfig config_;
  Scaler scaler_;
  Params params_;
  double train_accuracy_;
};

// Fits the scaler on `train` and trains. Deterministic under config.seed.
// Throws Error(kTraining) on NaN loss.
Classifier train(const TrainingConfig& config, const Dataset& train);
Classifier train(const TrainingConfig& config, const Dataset& train, const Scaler& scaler);

// Percentage of samples whose predicted label matches.
double accuracy(const Classifier& c, const Dataset& ds);

// Argmax with ties resolved to the lowest class index.
int argmax(const ClassScores& s);
ClassScores softmax(const ClassScores& logits);

enum class Capability : int {
  kLabelOracle = 0,
  kScoreOracle = 1,
  kGradientOracle = 2,
};

std::string_view capability_name(Capability c);

// Adversary-side view of a classifier. Every oracle call increments the query
// counter. One instance per attack session; not thread-safe.
class ModelAccess {
 public:
  // Error(kCapability) when kGradientOracle is requested for a tree or forest.
  ModelAccess(const Classifier& classifier, Capability capability);

  PatientState predict(std::span<const double> z);
  ClassScores scores(std::span<const double> z);
  ClassScores logits(std::span<const double> z);
  std::vector<double> input_gradient(std::span<const double> z, PatientState y);
  std::vector<double> logits_vjp(std::span<const double> z, const ClassScores& cotangent);

  std::size_t queries() const { return queries_; }
  Capability capability() const { return capability_; }
  const Classifier& classifier() const { return *classifier_; }

 private:
  void require(Capability needed, std::string_view what) const;

  const Classifier* classifier_;
  Capability capability_;
  std::size_t queries_ = 0;
};

}  // namespace shs

#endif  // SHS_MODELS_HPP_
