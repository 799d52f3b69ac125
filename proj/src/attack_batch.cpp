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

#include <ostream>

#include "attack_common.hpp"
#include "parallel.hpp"
#include "shs/format.hpp"

namespace shs {

CraftResult craft(AttackKind kind, ModelAccess& access, const VitalVector& x,
                  const AttackGoal& goal, const AttackConstraints& constraints,
                  const CraftOptions& options) {
  switch (kind) {
    case AttackKind::kFgm: return fgm(access, x, goal, constraints, options);
    case AttackKind::kCarliniWagner: return carlini_wagner(access, x, goal, constraints, options);
    case AttackKind::kHopSkipJump: return hop_skip_jump(access, x, goal, constraints, options);
    case AttackKind::kZoo: return zoo(access, x, goal, constraints, options);
    case AttackKind::kDecisionTree:
      return decision_tree_attack(access, x, goal, constraints, options);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown attack kind");
}

AttackGoal BatchGoal::for_label(PatientState label) const {
  switch (mode) {
    case Mode::kUntargeted: return AttackGoal::untargeted();
    case Mode::kFixedTarget: return AttackGoal::toward(target);
    case Mode::kNextClass:
      return AttackGoal::toward(state_from_index((to_index(label) + 1) % int(kNumStates)));
  }
  return AttackGoal::untargeted();
}

std::vector<CraftResult> batch_attack(const Classifier& victim, const Dataset& slice,
                                      const BatchGoal& goal,
                                      const AttackConstraints& constraints, AttackKind kind,
                                      const BatchOptions& options) {
  // A mismatched pairing would fail every sample the same way.
  if (!attack_supports(kind, victim.algorithm()))
    throw Error(ErrorCode::kCapability, std::string(attack_label(kind)) + " cannot attack " +
                                            std::string(algorithm_label(victim.algorithm())));
  validate(constraints);
  std::vector<CraftResult> results(slice.size());
  std::array<std::vector<std::size_t>, kNumStates> by_class;
  if (options.start_pool) {
    for (std::size_t j = 0; j < options.start_pool->size(); ++j)
      by_class[to_index((*options.start_pool)[j].label)].push_back(j);
  }
  detail::parallel_for(slice.size(), options.jobs, [&](std::size_t i) {
    const Sample& s = slice[i];
    const AttackGoal g = goal.for_label(s.label);
    CraftOptions co;
    co.reference = s.label;
    co.seed = derive_seed(options.seed, i);
    co.params = options.params;
    if (g.targeted && kind == AttackKind::kHopSkipJump && options.start_pool) {
      const auto& pool = by_class[to_index(g.target)];
      Rng rng(derive_seed(co.seed, 0x57a7));
      for (std::size_t k = 0; k < options.starts_per_sample && !pool.empty(); ++k) {
        const std::size_t j = pool[uniform_index(rng, pool.size())];
        co.starting_points.push_back((*options.start_pool)[j].values);
      }
    }
    CraftResult r;
    try {
      ModelAccess access(victim, required_capability(kind));
      r = craft(kind, access, s.values, g, constraints, co);
    } catch (const std::exception& e) {
      r = CraftResult{};
      r.original = s.values;
      r.adversarial = s.values;
      r.z_original = victim.scaler().transform(s.values);
      r.z_adversarial = r.z_original;
      r.original_label = s.label;
      r.adversarial_label = victim.predict(s.values);
      r.goal = g;
      r.error = e.what();
    }
    r.index = i;
    results[i] = std::move(r);
  });
  return results;
}

void export_results_csv(std::span<const CraftResult> results, std::ostream& out,
                        const FeatureSchema& schema) {
  out << "index,orig_label,adv_label,success,queries,linf,l2,devices_touched\n";
  for (const CraftResult& r : results) {
    std::string devices;
    for (const DeviceDef& d : schema.devices()) {
      if (!r.devices_touched.test(d.id)) continue;
      if (!devices.empty()) devices += ';';
      devices += d.name;
    }
    out << r.index << ',' << state_name(r.original_label) << ','
        << state_name(r.adversarial_label) << ',' << (r.success ? 1 : 0) << ',' << r.queries
        << ',' << format_g9(r.linf) << ',' << format_g9(r.l2) << ',' << devices << '\n';
  }
}

}  // namespace shs
