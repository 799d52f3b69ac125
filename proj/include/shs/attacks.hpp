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

// Evasion attacks: FGM, Carlini-Wagner L2, HopSkipJump (L-infinity), ZOO and
// the decision-tree leaf search, behind one interface.
//
// Attacks operate in the victim's normalized space. For a masked-in
// coordinate the feasible interval is
//   [max(min(0, z0), z0 - threshold), min(max(1, z0), z0 + threshold)]
// so an input that already lies outside [0,1] is never pushed further out.
// Masked-out coordinates keep the original bits, in both the normalized and
// the physical vector.

#ifndef SHS_ATTACKS_HPP_
#define SHS_ATTACKS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shs/domain.hpp"
#include "shs/models.hpp"

namespace shs {

enum class AttackKind : int {
  kFgm = 0,
  kCarliniWagner = 1,
  kHopSkipJump = 2,
  kZoo = 3,
  kDecisionTree = 4,
};

inline constexpr AttackKind kAllAttacks[] = {AttackKind::kFgm, AttackKind::kCarliniWagner,
                                             AttackKind::kHopSkipJump, AttackKind::kZoo,
                                             AttackKind::kDecisionTree};

std::string_view attack_name(AttackKind k);   // "fgm", "cw", "hsj", "zoo", "tree"
std::string_view attack_label(AttackKind k);  // "FGM", "C&W", "HopSkipJump", "ZOO", "DecisionTree"
std::optional<AttackKind> parse_attack(std::string_view name);
// Weakest oracle the attack needs. The tree attack additionally needs a tree victim.
Capability required_capability(AttackKind k);
// Whether the attack can run against a victim of this algorithm.
bool attack_supports(AttackKind k, Algorithm victim);

struct AttackGoal {
  bool targeted = false;
  PatientState target = PatientState::kHighBloodPressure;

  static AttackGoal untargeted() { return {}; }
  static AttackGoal toward(PatientState t) { return {true, t}; }
};

struct AttackConstraints {
  double threshold = std::numeric_limits<double>::infinity();
  FeatureMask mask = FeatureMask().set();
  std::size_t query_budget = 20000;

  bool bounded() const { return threshold < std::numeric_limits<double>::infinity(); }
};

// Throws Error(kInvalidArgument) for a threshold outside [0, inf] or an empty mask.
void validate(const AttackConstraints& c);

struct CwParams {
  double kappa = 0.0;
  int binary_steps = 9;
  double c_initial = 1e-3;
  double c_max = 1e10;
  int iterations = 1000;
  double learning_rate = 0.01;
  // Label-query bisection toward the input after the search.
  int pullback_steps = 20;
};

struct HsjParams {
  int iterations = 40;
  int initial_evals = 100;
  int max_evals = 10000;
  double tolerance = 1e-4;
  int restarts = 10;
  double gamma = 1.0;
};

struct ZooParams {
  double h = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double learning_rate = 0.01;
  double kappa = 0.0;
  // Probe width grows tenfold, up to this cap, while both probes score
  // identically (piecewise-constant victims).
  double h_max = 0.1;
};

struct TreeAttackParams {
  double offset = 0.01;
};

struct AttackParams {
  CwParams cw;
  HsjParams hsj;
  ZooParams zoo;
  TreeAttackParams tree;
};

// Per-sample inputs beyond the vector itself.
struct CraftOptions {
  // True label. Untargeted success means the final label differs from it;
  // when absent the victim's prediction on x is the reference.
  std::optional<PatientState> reference;
  std::uint64_t seed = 42;
  // HopSkipJump targeted starts (physical units), tried before random restarts.
  std::vector<VitalVector> starting_points;
  AttackParams params;
};

struct CraftResult {
  std::size_t index = 0;
  VitalVector original{};
  VitalVector adversarial{};
  std::vector<double> z_original;     // normalized
  std::vector<double> z_adversarial;  // normalized
  PatientState original_label = PatientState::kHighBloodPressure;
  PatientState adversarial_label = PatientState::kHighBloodPressure;
  AttackGoal goal;
  bool success = false;
  // Targeted attempt whose input the victim already assigns to the target.
  bool skipped = false;
  std::string error;  // non-empty for a failed invocation
  std::size_t queries = 0;
  double linf = 0.0;
  double l2 = 0.0;
  DeviceSet devices_touched;
  // HopSkipJump only: best L-infinity distance after each iteration.
  std::vector<double> trace;
};

CraftResult fgm(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                const AttackConstraints& constraints, const CraftOptions& options = {});
CraftResult carlini_wagner(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                           const AttackConstraints& constraints,
                           const CraftOptions& options = {});
CraftResult hop_skip_jump(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                          const AttackConstraints& constraints,
                          const CraftOptions& options = {});
CraftResult zoo(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                const AttackConstraints& constraints, const CraftOptions& options = {});
CraftResult decision_tree_attack(ModelAccess& access, const VitalVector& x,
                                 const AttackGoal& goal, const AttackConstraints& constraints,
                                 const CraftOptions& options = {});

CraftResult craft(AttackKind kind, ModelAccess& access, const VitalVector& x,
                  const AttackGoal& goal, const AttackConstraints& constraints,
                  const CraftOptions& options = {});

// ZOO's coordinate estimate [F(z + h e_i) - F(z - h e_i)] / (2h), without box handling.
double symmetric_difference(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> z, std::size_t i, double h);

// How each sample of a batch picks its goal.
struct BatchGoal {
  enum class Mode { kUntargeted, kFixedTarget, kNextClass };
  Mode mode = Mode::kUntargeted;
  PatientState target = PatientState::kHighBloodPressure;

  static BatchGoal untargeted() { return {}; }
  static BatchGoal fixed(PatientState t) { return {Mode::kFixedTarget, t}; }
  // target = (true label + 1) mod 11
  static BatchGoal next_class() { return {Mode::kNextClass, PatientState::kHighBloodPressure}; }

  AttackGoal for_label(PatientState label) const;
};

struct BatchOptions {
  std::uint64_t seed = 42;
  AttackParams params;
  std::size_t jobs = 1;
  // Source of target-class starting points for targeted HopSkipJump.
  const Dataset* start_pool = nullptr;
  std::size_t starts_per_sample = 10;
};

// One result per sample, ordered by sample index. Per-sample seeds derive from
// options.seed and the index, so results do not depend on options.jobs.
// Per-sample errors become failure records.
std::vector<CraftResult> batch_attack(const Classifier& victim, const Dataset& slice,
                                      const BatchGoal& goal,
                                      const AttackConstraints& constraints, AttackKind kind,
                                      const BatchOptions& options = {});

// Header: index,orig_label,adv_label,success,queries,linf,l2,devices_touched
void export_results_csv(std::span<const CraftResult> results, std::ostream& out,
                        const FeatureSchema& schema = default_schema());

}  // namespace shs

#endif  // SHS_ATTACKS_HPP_
