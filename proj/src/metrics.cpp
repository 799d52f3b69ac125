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
#include <cmath>
#include <functional>
#include <limits>

#include "shs/error.hpp"
#include "shs/harness.hpp"

namespace shs {

Evaluation evaluate(const Classifier& c, const Dataset& test) {
  Evaluation e;
  std::size_t correct = 0;
  for (const Sample& s : test.samples()) {
    const PatientState p = c.predict(s.values);
    ++e.confusion[to_index(s.label)][to_index(p)];
    correct += p == s.label;
  }
  e.total = test.size();
  e.accuracy = e.total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / e.total;
  return e;
}

Metrics attack_metrics(std::span<const CraftResult> results, double clean_accuracy) {
  Metrics m;
  m.clean_accuracy = clean_accuracy;
  m.evaluated = results.size();
  std::size_t still_correct = 0;
  for (const CraftResult& r : results) {
    ++m.confusion[to_index(r.original_label)][to_index(r.adversarial_label)];
    still_correct += r.adversarial_label == r.original_label;
    if (!r.skipped) {
      ++m.attempted;
      m.succeeded += r.success;
    }
    m.errors += !r.error.empty();
    m.mean_queries += static_cast<double>(r.queries);
    m.mean_l2 += r.l2;
    m.mean_linf += r.linf;
  }
  if (m.evaluated > 0) {
    const double n = static_cast<double>(m.evaluated);
    m.adversarial_accuracy = 100.0 * static_cast<double>(still_correct) / n;
    m.mean_queries /= n;
    m.mean_l2 /= n;
    m.mean_linf /= n;
  }
  m.accuracy_drop = m.clean_accuracy - m.adversarial_accuracy;
  m.success_rate =
      m.attempted == 0 ? 0.0 : 100.0 * static_cast<double>(m.succeeded) / m.attempted;
  return m;
}

namespace {

// Distance to the goal at the crafted point; <= 0 once that point is adversarial.
double goal_margin(const Classifier& victim, const CraftResult& r) {
  const ClassScores s = victim.scores_normalized(r.z_adversarial);
  const int anchor = r.goal.targeted ? to_index(r.goal.target) : to_index(r.original_label);
  double rival = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(kNumStates); ++k)
    if (k != anchor) rival = std::max(rival, s[k]);
  return r.goal.targeted ? rival - s[anchor] : s[anchor] - rival;
}

CraftResult craft_under(const Classifier& victim, const VitalVector& x, const AttackGoal& goal,
                        AttackKind attack, const AttackConstraints& base,
                        const CraftOptions& options, const DeviceSet& devices) {
  AttackConstraints c = base;
  c.mask = default_schema().mask_for(devices);
  ModelAccess access(victim, required_capability(attack));
  return craft(attack, access, x, goal, c, options);
}

// Subsets of {0..kNumDevices-1} with `size` members, lexicographic by sorted ids.
void for_each_subset(std::size_t size, const std::function<bool(const DeviceSet&)>& visit) {
  std::vector<int> ids(size);
  for (std::size_t i = 0; i < size; ++i) ids[i] = static_cast<int>(i);
  for (;;) {
    DeviceSet s;
    for (int id : ids) s.set(id);
    if (visit(s)) return;
    int i = static_cast<int>(size) - 1;
    while (i >= 0 && ids[i] == static_cast<int>(kNumDevices - size) + i) --i;
    if (i < 0) return;
    ++ids[i];
    for (std::size_t j = i + 1; j < size; ++j) ids[j] = ids[j - 1] + 1;
  }
}

}  // namespace

DeviceSearchResult minimal_device_search(const Classifier& victim, const VitalVector& x,
                                         const AttackGoal& goal, AttackKind attack,
                                         SearchStrategy strategy,
                                         const AttackConstraints& base,
                                         const CraftOptions& options) {
  DeviceSearchResult out;
  // A goal that already holds needs no device at all.
  const PatientState now = victim.predict(x);
  const bool holds =
      goal.targeted ? now == goal.target : (options.reference && now != *options.reference);
  if (holds) {
    out.feasible = true;
    out.result = craft_under(victim, x, goal, attack, base, options, DeviceSet().set());
    out.attempts = 1;
    return out;
  }
  if (strategy == SearchStrategy::kExhaustive) {
    for (std::size_t size = 1; size <= kNumDevices && !out.feasible; ++size) {
      for_each_subset(size, [&](const DeviceSet& s) {
        out.result = craft_under(victim, x, goal, attack, base, options, s);
        ++out.attempts;
        if (out.result.success && out.result.error.empty()) {
          out.feasible = true;
          out.devices = s;
        }
        return out.feasible;
      });
    }
    return out;
  }

  DeviceSet chosen;
  while (chosen.count() < kNumDevices) {
    std::optional<std::pair<double, DeviceId>> best;
    CraftResult best_result;
    for (DeviceId d = 0; d < static_cast<DeviceId>(kNumDevices); ++d) {
      if (chosen.test(d)) continue;
      DeviceSet trial = chosen;
      trial.set(d);
      CraftResult r = craft_under(victim, x, goal, attack, base, options, trial);
      ++out.attempts;
      if (r.success && r.error.empty()) {
        out.feasible = true;
        out.devices = trial;
        out.result = std::move(r);
        return out;
      }
      const double margin = goal_margin(victim, r);
      if (!best || margin < best->first) {
        best = {margin, d};
        best_result = std::move(r);
      }
    }
    chosen.set(best->second);
    out.result = std::move(best_result);
  }
  return out;
}

namespace {

SweepRow sweep_cell(const Classifier& victim, const Dataset& slice, double clean,
                    const BatchGoal& goal, AttackKind attack, const AttackConstraints& c,
                    const BatchOptions& batch, double step) {
  SweepRow row;
  row.attack = attack;
  row.step = step;
  const std::vector<CraftResult> results = batch_attack(victim, slice, goal, c, attack, batch);
  row.metrics = attack_metrics(results, clean);
  for (const CraftResult& r : results) {
    if (!r.error.empty()) {
      row.error = r.error;
      break;
    }
  }
  return row;
}

}  // namespace

std::vector<SweepRow> device_reduction_sweep(const Classifier& victim, const Dataset& slice,
                                             const BatchGoal& goal,
                                             const std::vector<AttackKind>& attacks,
                                             const std::vector<DeviceId>& removal_order,
                                             const SweepOptions& options) {
  for (DeviceId d : removal_order) {
    if (d < 0 || d >= static_cast<DeviceId>(kNumDevices))
      throw Error(ErrorCode::kInvalidArgument, "unknown device id " + std::to_string(d));
  }
  const double clean = evaluate(victim, slice).accuracy;
  std::vector<SweepRow> rows;
  for (AttackKind attack : attacks) {
    for (std::size_t k = 0; k <= removal_order.size(); ++k) {
      DeviceSet kept;
      kept.set();
      for (std::size_t j = 0; j < k; ++j) kept.reset(removal_order[j]);
      AttackConstraints c = options.base;
      c.mask = options.base.mask & default_schema().mask_for(kept);
      rows.push_back(sweep_cell(victim, slice, clean, goal, attack, c, options.batch,
                                static_cast<double>(k)));
    }
  }
  return rows;
}

std::vector<SweepRow> threshold_sweep(const Classifier& victim, const Dataset& slice,
                                      const BatchGoal& goal,
                                      const std::vector<AttackKind>& attacks,
                                      const std::vector<double>& thresholds,
                                      const SweepOptions& options) {
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0))
      throw Error(ErrorCode::kInvalidArgument, "sweep thresholds must lie in (0, 1]");
  }
  const double clean = evaluate(victim, slice).accuracy;
  std::vector<SweepRow> rows;
  for (AttackKind attack : attacks) {
    for (double t : thresholds) {
      AttackConstraints c = options.base;
      c.threshold = t;
      rows.push_back(sweep_cell(victim, slice, clean, goal, attack, c, options.batch, t));
    }
  }
  return rows;
}

}  // namespace shs
