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

// Training-time attacks on the training split.

#ifndef SHS_POISONING_HPP_
#define SHS_POISONING_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "shs/domain.hpp"
#include "shs/models.hpp"

namespace shs {

enum class PoisonMode : int { kLabelFlip = 0, kInjection = 1, kModification = 2 };

std::string_view poison_mode_name(PoisonMode m);  // "label_flip", "injection", "modification"
std::optional<PoisonMode> parse_poison_mode(std::string_view name);

struct FlipRule {
  enum class Kind { kUniformOtherClass, kTargetedToClass };
  Kind kind = Kind::kUniformOtherClass;
  PatientState target = PatientState::kHighBloodPressure;

  static FlipRule uniform() { return {}; }
  static FlipRule toward(PatientState t) { return {Kind::kTargetedToClass, t}; }
};

struct PoisonSpec {
  PoisonMode mode = PoisonMode::kLabelFlip;
  double rate = 0.1;
  std::uint64_t seed = 42;
  FlipRule flip_rule;
  // Modification: per-feature noise bound as a fraction of the training range.
  double modification_threshold = 0.1;
};

// Throws Error(kConfig) for a rate outside [0, 1] or a negative threshold.
void validate(const PoisonSpec& spec);

struct PoisonManifestEntry {
  std::size_t index = 0;         // position in the poisoned dataset
  std::size_t source_index = 0;  // sample it was derived from
  PatientState original_label = PatientState::kHighBloodPressure;
  PatientState new_label = PatientState::kHighBloodPressure;
};

struct PoisonManifest {
  PoisonMode mode = PoisonMode::kLabelFlip;
  std::vector<PoisonManifestEntry> entries;  // ascending index
};

// Affects exactly floor(rate * n) samples. LabelFlip and Modification rewrite
// samples in place; Injection appends copies with flipped labels. No sample is
// ever removed.
std::pair<Dataset, PoisonManifest> poison(const Dataset& train, const PoisonSpec& spec);

// Header: index,source_index,original_label,new_label
void export_manifest_csv(const PoisonManifest& manifest, std::ostream& out);

// Direct parameter overwrite of a trained model.
Classifier corrupt_logic(const Classifier& model,
                         const std::function<void(Classifier::Params&)>& tamper);

struct PoisonRow {
  Algorithm algorithm = Algorithm::kDecisionTree;
  double rate = 0.0;
  double clean_accuracy = 0.0;     // median over seeds
  double poisoned_accuracy = 0.0;  // median over seeds
  double accuracy_drop = 0.0;      // median over seeds of (clean - poisoned)
  std::size_t seeds = 0;
  std::string error;  // first failing cell, if any
};

struct PoisonExperimentOptions {
  PoisonMode mode = PoisonMode::kLabelFlip;
  FlipRule flip_rule;
  double modification_threshold = 0.1;
  double train_fraction = 0.70;
  std::size_t jobs = 1;
};

// One row per (algorithm, rate), ordered as given; a rate of 0 reports the
// clean baseline. Each seed drives the split, the poisoning draw and training.
std::vector<PoisonRow> poisoning_experiment(const std::vector<TrainingConfig>& configs,
                                            const Dataset& ds, const std::vector<double>& rates,
                                            const std::vector<std::uint64_t>& seeds,
                                            const PoisonExperimentOptions& options = {});

}  // namespace shs

#endif  // SHS_POISONING_HPP_
