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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "shs/datagen.hpp"
#include "shs/format.hpp"
#include "shs/models.hpp"
#include "training.hpp"

namespace shs {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_input(std::span<const double> z) {
  if (z.size() != kNumFeatures)
    throw Error(ErrorCode::kInvalidArgument, "input must have 15 features, got " +
                                                 std::to_string(z.size()));
  for (double v : z)
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite input value");
}

ClassScores forest_votes(const ForestModel& f, std::span<const double> z) {
  ClassScores votes{};
  for (const auto& t : f.trees) votes[t.nodes[t.leaf_for(z)].label] += 1.0;
  const double n = static_cast<double>(f.trees.size());
  for (auto& v : votes) v /= n;
  return votes;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kDecisionTree: return "dt";
    case Algorithm::kRandomForest: return "rf";
    case Algorithm::kLogisticRegression: return "lr";
    case Algorithm::kNeuralNet: return "nn";
  }
  return "?";
}

std::string_view algorithm_label(Algorithm a) {
  switch (a) {
    case Algorithm::kDecisionTree: return "DT";
    case Algorithm::kRandomForest: return "RF";
    case Algorithm::kLogisticRegression: return "LR";
    case Algorithm::kNeuralNet: return "ANN";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "dt") return Algorithm::kDecisionTree;
  if (lower == "rf") return Algorithm::kRandomForest;
  if (lower == "lr") return Algorithm::kLogisticRegression;
  if (lower == "nn" || lower == "ann") return Algorithm::kNeuralNet;
  return std::nullopt;
}

std::string_view capability_name(Capability c) {
  switch (c) {
    case Capability::kLabelOracle: return "label";
    case Capability::kScoreOracle: return "score";
    case Capability::kGradientOracle: return "gradient";
  }
  return "?";
}

TrainingConfig TrainingConfig::defaults(Algorithm a, std::uint64_t seed) {
  TrainingConfig c;
  c.algorithm = a;
  c.seed = seed;
  return c;
}

void validate(const TrainingConfig& c) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::kConfig, std::string("hyperparameter must be positive: ") + what);
  };
  switch (c.algorithm) {
    case Algorithm::kDecisionTree:
      positive(c.tree.max_depth, "tree.max_depth");
      positive(c.tree.min_leaf, "tree.min_leaf");
      break;
    case Algorithm::kRandomForest:
      positive(c.forest.n_trees, "forest.n_trees");
      positive(c.forest.feature_subsample, "forest.feature_subsample");
      positive(c.forest.max_depth, "forest.max_depth");
      positive(c.forest.min_leaf, "forest.min_leaf");
      if (c.forest.feature_subsample > static_cast<int>(kNumFeatures))
        throw Error(ErrorCode::kConfig, "forest.feature_subsample exceeds feature count");
      break;
    case Algorithm::kLogisticRegression:
      positive(c.logistic.learning_rate, "logistic.learning_rate");
      positive(c.logistic.epochs, "logistic.epochs");
      if (!(c.logistic.l2 >= 0.0))
        throw Error(ErrorCode::kConfig, "logistic.l2 must be non-negative");
      break;
    case Algorithm::kNeuralNet:
      if (c.nn.hidden.empty()) throw Error(ErrorCode::kConfig, "nn.hidden must not be empty");
      for (int w : c.nn.hidden) positive(w, "nn.hidden");
      positive(c.nn.learning_rate, "nn.learning_rate");
      positive(c.nn.epochs, "nn.epochs");
      positive(c.nn.batch_size, "nn.batch_size");
      break;
  }
}

int TreeStructure::leaf_for(std::span<const double> z) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& n = nodes[node];
    node = z[n.feature] <= n.threshold ? n.left : n.right;
  }
  return node;
}

std::size_t TreeStructure::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t TreeStructure::internal_count() const { return nodes.size() - leaf_count(); }

int TreeStructure::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[nodes[i].left] = d[i] + 1;
      d[nodes[i].right] = d[i] + 1;
    }
  }
  return best;
}

int argmax(const ClassScores& s) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(kNumStates); ++k)
    if (s[k] > s[best]) best = k;
  return best;
}

ClassScores softmax(const ClassScores& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  ClassScores p;
  double sum = 0.0;
  for (std::size_t k = 0; k < kNumStates; ++k) {
    p[k] = std::exp(logits[k] - mx);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

Classifier::Classifier(TrainingConfig config, Scaler scaler, Params params,
                       double train_accuracy)
    : config_(std::move(config)),
      scaler_(std::move(scaler)),
      params_(std::move(params)),
      train_accuracy_(train_accuracy) {
  const bool ok = std::visit(
      Overloaded{
          [&](const TreeStructure& t) {
            return config_.algorithm == Algorithm::kDecisionTree && !t.nodes.empty();
          },
          [&](const ForestModel& f) {
            return config_.algorithm == Algorithm::kRandomForest && !f.trees.empty();
          },
          [&](const LinearModel& m) {
            return config_.algorithm == Algorithm::kLogisticRegression &&
                   m.weights.size() == kNumStates * kNumFeatures && m.bias.size() == kNumStates;
          },
          [&](const MlpModel& m) {
            return config_.algorithm == Algorithm::kNeuralNet && !m.layers.empty() &&
                   m.layers.front().in == static_cast<int>(kNumFeatures) &&
                   m.layers.back().out == static_cast<int>(kNumStates);
          },
      },
      params_);
  if (!ok)
    throw Error(ErrorCode::kInvalidArgument, "classifier parameters do not match algorithm");
}

ClassScores Classifier::scores_normalized(std::span<const double> z) const {
  check_input(z);
  return std::visit(
      Overloaded{
          [&](const TreeStructure& t) { return t.nodes[t.leaf_for(z)].distribution; },
          [&](const ForestModel& f) { return forest_votes(f, z); },
          [&](const LinearModel& m) { return softmax(detail::linear_logits(m, z)); },
          [&](const MlpModel& m) { return softmax(detail::mlp_logits(m, z)); },
      },
      params_);
}

PatientState Classifier::predict_normalized(std::span<const double> z) const {
  return static_cast<PatientState>(argmax(scores_normalized(z)));
}

ClassScores Classifier::logits_normalized(std::span<const double> z) const {
  check_input(z);
  if (const auto* m = std::get_if<LinearModel>(&params_)) return detail::linear_logits(*m, z);
  if (const auto* m = std::get_if<MlpModel>(&params_)) return detail::mlp_logits(*m, z);
  throw Error(ErrorCode::kCapability,
              std::string("logits are not available for ") +
                  std::string(algorithm_label(algorithm())));
}

std::vector<double> Classifier::logits_vjp(std::span<const double> z,
                                           const ClassScores& cotangent) const {
  check_input(z);
  if (const auto* m = std::get_if<LinearModel>(&params_)) {
    std::vector<double> g(kNumFeatures, 0.0);
    for (std::size_t k = 0; k < kNumStates; ++k) {
      const double* w = m->weights.data() + k * kNumFeatures;
      for (std::size_t f = 0; f < kNumFeatures; ++f) g[f] += cotangent[k] * w[f];
    }
    return g;
  }
  if (const auto* m = std::get_if<MlpModel>(&params_)) return detail::mlp_vjp(*m, z, cotangent);
  throw Error(ErrorCode::kCapability,
              std::string("input gradients are not available for ") +
                  std::string(algorithm_label(algorithm())));
}

std::vector<double> Classifier::input_gradient(std::span<const double> z, PatientState y) const {
  ClassScores delta = softmax(logits_normalized(z));
  delta[to_index(y)] -= 1.0;
  return logits_vjp(z, delta);
}

const TreeStructure& Classifier::tree_structure() const {
  if (const auto* t = std::get_if<TreeStructure>(&params_)) return *t;
  throw Error(ErrorCode::kCapability,
              std::string("tree structure is only available for DT, not ") +
                  std::string(algorithm_label(algorithm())));
}

PatientState Classifier::predict(const VitalVector& x) const {
  return predict_normalized(scaler_.transform(x));
}

ClassScores Classifier::class_scores(const VitalVector& x) const {
  return scores_normalized(scaler_.transform(x));
}

ClassScores Classifier::logits(const VitalVector& x) const {
  return logits_normalized(scaler_.transform(x));
}

std::vector<double> Classifier::input_gradient(const VitalVector& x, PatientState y) const {
  return input_gradient(std::span<const double>(scaler_.transform(x)), y);
}

std::string Classifier::describe() const {
  std::ostringstream out;
  out << "algorithm: " << algorithm_label(algorithm()) << " (" << algorithm_name(algorithm())
      << ")\n";
  out << "seed: " << config_.seed << "\n";
  switch (algorithm()) {
    case Algorithm::kDecisionTree:
      out << "max_depth: " << config_.tree.max_depth << "\nmin_leaf: " << config_.tree.min_leaf
          << "\n";
      break;
    case Algorithm::kRandomForest:
      out << "n_trees: " << config_.forest.n_trees
          << "\nfeature_subsample: " << config_.forest.feature_subsample
          << "\nmax_depth: " << config_.forest.max_depth
          << "\nmin_leaf: " << config_.forest.min_leaf << "\n";
      break;
    case Algorithm::kLogisticRegression:
      out << "learning_rate: " << format_g9(config_.logistic.learning_rate)
          << "\nepochs: " << config_.logistic.epochs
          << "\nl2: " << format_g9(config_.logistic.l2) << "\n";
      break;
    case Algorithm::kNeuralNet: {
      out << "hidden:";
      for (int w : config_.nn.hidden) out << ' ' << w;
      out << "\nactivation: " << (config_.nn.activation == Activation::kRelu ? "relu" : "tanh")
          << "\nlearning_rate: " << format_g9(config_.nn.learning_rate)
          << "\nepochs: " << config_.nn.epochs << "\nbatch_size: " << config_.nn.batch_size
          << "\n";
      break;
    }
  }
  if (const auto* t = std::get_if<TreeStructure>(&params_)) {
    out << "nodes: " << t->nodes.size() << "\nleaves: " << t->leaf_count()
        << "\ndepth: " << t->depth() << "\n";
  }
  out << "train_accuracy: " << format_fixed(train_accuracy_) << "\n";
  return out.str();
}

namespace detail {

Matrix normalize(const Dataset& ds, const Scaler& scaler) {
  Matrix m;
  m.values.reserve(ds.size() * kNumFeatures);
  m.labels.reserve(ds.size());
  for (const auto& s : ds.samples()) {
    const auto z = scaler.transform(s.values);
    m.values.insert(m.values.end(), z.begin(), z.end());
    m.labels.push_back(to_index(s.label));
  }
  return m;
}

}  // namespace detail

Classifier train(const TrainingConfig& config, const Dataset& train_set) {
  return train(config, train_set, fit_scaler(train_set));
}

Classifier train(const TrainingConfig& config, const Dataset& train_set, const Scaler& scaler) {
  validate(config);
  const detail::Matrix data = detail::normalize(train_set, scaler);
  Rng rng(config.seed);
  Classifier::Params params;
  switch (config.algorithm) {
    case Algorithm::kDecisionTree: {
      std::vector<std::size_t> rows(data.rows());
      std::iota(rows.begin(), rows.end(), 0);
      params = detail::fit_tree(data, rows, config.tree.max_depth, config.tree.min_leaf,
                                static_cast<int>(kNumFeatures), rng);
      break;
    }
    case Algorithm::kRandomForest:
      params = detail::fit_forest(data, config.forest, rng);
      break;
    case Algorithm::kLogisticRegression:
      params = detail::fit_logistic(data, config.logistic);
      break;
    case Algorithm::kNeuralNet:
      params = detail::fit_mlp(data, config.nn, rng);
      break;
  }
  Classifier c(config, scaler, std::move(params));
  return Classifier(config, scaler, c.params(), accuracy(c, train_set));
}

double accuracy(const Classifier& c, const Dataset& ds) {
  std::size_t correct = 0;
  for (const auto& s : ds.samples())
    if (c.predict(s.values) == s.label) ++correct;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(ds.size());
}

ModelAccess::ModelAccess(const Classifier& classifier, Capability capability)
    : classifier_(&classifier), capability_(capability) {
  if (capability == Capability::kGradientOracle && !classifier.has_gradients())
    throw Error(ErrorCode::kCapability,
                std::string("gradient oracle is not available for ") +
                    std::string(algorithm_label(classifier.algorithm())));
}

void ModelAccess::require(Capability needed, std::string_view what) const {
  if (static_cast<int>(capability_) < static_cast<int>(needed))
    throw Error(ErrorCode::kCapability, std::string(what) + " requires " +
                                            std::string(capability_name(needed)) +
                                            " access, session has " +
                                            std::string(capability_name(capability_)));
}

PatientState ModelAccess::predict(std::span<const double> z) {
  ++queries_;
  return classifier_->predict_normalized(z);
}

ClassScores ModelAccess::scores(std::span<const double> z) {
  require(Capability::kScoreOracle, "class scores");
  ++queries_;
  return classifier_->scores_normalized(z);
}

ClassScores ModelAccess::logits(std::span<const double> z) {
  require(Capability::kGradientOracle, "logits");
  ++queries_;
  return classifier_->logits_normalized(z);
}

std::vector<double> ModelAccess::input_gradient(std::span<const double> z, PatientState y) {
  require(Capability::kGradientOracle, "input gradient");
  ++queries_;
  return classifier_->input_gradient(z, y);
}

std::vector<double> ModelAccess::logits_vjp(std::span<const double> z,
                                            const ClassScores& cotangent) {
  require(Capability::kGradientOracle, "logit gradient");
  ++queries_;
  return classifier_->logits_vjp(z, cotangent);
}

}  // namespace shs
