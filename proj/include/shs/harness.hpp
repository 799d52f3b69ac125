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

// Metrics, device analyses, sweeps and the recipe runner.
//
// Percentages are in [0, 100]; drops are percentage points. A recipe is a
// pure function of its ExperimentConfig: cells may run on several workers but
// every output is assembled in key order.

#ifndef SHS_HARNESS_HPP_
#define SHS_HARNESS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shs/attacks.hpp"
#include "shs/datagen.hpp"
#include "shs/models.hpp"
#include "shs/poisoning.hpp"

namespace shs {

// confusion[true][predicted]
using Confusion = std::array<std::array<std::size_t, kNumStates>, kNumStates>;

struct Evaluation {
  double accuracy = 0.0;
  Confusion confusion{};
  std::size_t total = 0;
};

Evaluation evaluate(const Classifier& c, const Dataset& test);

struct Metrics {
  double clean_accuracy = 0.0;
  double adversarial_accuracy = 0.0;
  double accuracy_drop = 0.0;  // clean - adversarial, exactly
  double success_rate = 0.0;   // over non-skipped results
  double mean_queries = 0.0;
  double mean_l2 = 0.0;
  double mean_linf = 0.0;
  std::size_t evaluated = 0;
  std::size_t attempted = 0;  // non-skipped
  std::size_t succeeded = 0;  // non-skipped successes
  std::size_t errors = 0;
  Confusion confusion{};  // original label x adversarial label
};

// Adversarial accuracy counts results whose adversarial label equals the
// original (reference) label.
Metrics attack_metrics(std::span<const CraftResult> results, double clean_accuracy);

enum class SearchStrategy : int { kExhaustive = 0, kGreedy = 1 };

struct DeviceSearchResult {
  bool feasible = false;
  DeviceSet devices;   // empty when infeasible
  CraftResult result;  // the successful craft, or the last attempt
  std::size_t attempts = 0;
};

// Exhaustive: non-empty device subsets by size, then lexicographic by sorted
// ids; the first successful subset is minimal. Greedy: forward selection, each
// round adding the device whose craft scores the lowest goal margin. Each
// craft gets a fresh oracle of the attack's capability and the full budget.
DeviceSearchResult minimal_device_search(const Classifier& victim, const VitalVector& x,
                                         const AttackGoal& goal, AttackKind attack,
                                         SearchStrategy strategy,
                                         const AttackConstraints& base = {},
                                         const CraftOptions& options = {});

struct SweepRow {
  AttackKind attack = AttackKind::kFgm;
  double step = 0.0;  // devices removed, or threshold
  Metrics metrics;
  std::string error;  // first failing sample, if any
};

struct SweepOptions {
  AttackConstraints base;  // threshold and budget shared by every cell
  BatchOptions batch;
};

// Rows for k = 0..removal_order.size(): the mask excludes the first k devices.
std::vector<SweepRow> device_reduction_sweep(const Classifier& victim, const Dataset& slice,
                                             const BatchGoal& goal,
                                             const std::vector<AttackKind>& attacks,
                                             const std::vector<DeviceId>& removal_order,
                                             const SweepOptions& options = {});

// Rows per (attack, threshold); thresholds must lie in (0, 1].
std::vector<SweepRow> threshold_sweep(const Classifier& victim, const Dataset& slice,
                                      const BatchGoal& goal,
                                      const std::vector<AttackKind>& attacks,
                                      const std::vector<double>& thresholds,
                                      const SweepOptions& options = {});

enum class Recipe : int { kTable3, kTable4, kTable5, kFig4, kFig5, kFig6, kFig7 };

std::string_view recipe_name(Recipe r);  // "table3" ... "fig7"
std::optional<Recipe> parse_recipe(std::string_view name);
std::vector<Recipe> all_recipes();

struct Pairing {
  AttackKind attack = AttackKind::kHopSkipJump;
  Algorithm model = Algorithm::kDecisionTree;
};

struct StatePair {
  PatientState current = PatientState::kStress;
  PatientState final_state = PatientState::kHeartAttack;
};

struct ExperimentConfig {
  Recipe recipe = Recipe::kTable5;
  // Synthetic cohort, unless dataset_csv is set.
  std::size_t per_class = 1546;
  std::uint64_t dataset_seed = 42;
  double noise = 0.05;
  std::string dataset_csv;
  double train_fraction = 0.70;
  std::array<TrainingConfig, 4> training{TrainingConfig::defaults(Algorithm::kDecisionTree),
                                         TrainingConfig::defaults(Algorithm::kRandomForest),
                                         TrainingConfig::defaults(Algorithm::kLogisticRegression),
                                         TrainingConfig::defaults(Algorithm::kNeuralNet)};
  std::vector<std::uint64_t> seeds{42, 43, 44};
  std::size_t samples = 300;  // test samples per attack cell
  std::vector<Pairing> pairings{{AttackKind::kHopSkipJump, Algorithm::kDecisionTree},
                                {AttackKind::kCarliniWagner, Algorithm::kNeuralNet},
                                {AttackKind::kFgm, Algorithm::kLogisticRegression},
                                {AttackKind::kZoo, Algorithm::kRandomForest}};
  // table4, table5 and device sweeps; infinity means unbounded.
  double threshold = 0.1;
  std::vector<double> thresholds{0.1, 0.2, 0.3};
  std::vector<DeviceId> removal_order{devices::kInsulinPump, devices::kPulseOximeter,
                                      devices::kQuadioArm};
  std::vector<double> rates{0.1, 0.2, 0.3};
  PoisonMode poison_mode = PoisonMode::kLabelFlip;
  std::vector<StatePair> state_pairs{
      {PatientState::kHighCholesterol, PatientState::kStroke},
      {PatientState::kHighBloodPressure, PatientState::kStroke},
      {PatientState::kAbnormalOxygenLevel, PatientState::kStroke},
      {PatientState::kStroke, PatientState::kAbnormalOxygenLevel},
      {PatientState::kStress, PatientState::kHeartAttack}};
  std::size_t device_samples = 20;  // source samples per state pair
  std::size_t query_budget = 20000;
  AttackParams params;
  std::size_t jobs = 1;
  std::filesystem::path output_dir;  // empty: nothing written

  // Recipe-specific defaults (seed count, sample count) applied to `recipe`.
  static ExperimentConfig defaults(Recipe recipe);
};

// Throws Error(kConfig) naming the offending field.
void validate(const ExperimentConfig& config);

// JSON round trip. Missing keys keep the recipe defaults; unknown keys and
// unresolvable names throw Error(kConfig).
std::string to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

// FNV-1a over the JSON form with output_dir and jobs removed.
std::uint64_t config_hash(const ExperimentConfig& config);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

struct AttackRow {
  Pairing pairing;
  double clean = 0.0;    // median over seeds
  double drop = 0.0;     // median over seeds, untargeted
  double success = 0.0;  // median over seeds, next-class targeted
};

struct DeviceRow {
  StatePair pair;
  std::size_t searched = 0;     // source samples attacked
  std::size_t feasible = 0;     // samples with a successful subset
  std::size_t one_device = 0;   // samples whose minimal subset has one device
  std::size_t min_devices = 0;  // 0 when no sample was feasible
  DeviceSet typical;            // most frequent minimal subset
};

struct SweepSummary {
  Pairing pairing;
  std::vector<double> steps;
  std::vector<double> values;  // median over seeds: drop (UA) or success (TA)
};

struct ExperimentReport {
  Recipe recipe = Recipe::kTable5;
  Table table;
  std::string svg;
  std::string manifest;
  std::vector<std::string> failures;  // one entry per failed cell

  std::vector<PoisonRow> poisoning;
  std::vector<DeviceRow> devices;
  std::vector<AttackRow> attacks;
  std::vector<SweepSummary> sweeps;
};

// Writes metrics_<recipe>.csv, plot_<recipe>.svg and manifest.txt when
// config.output_dir is set. Cell failures are reported, not thrown.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace shs

#endif  // SHS_HARNESS_HPP_
