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

#ifndef SHS_SRC_ATTACK_COMMON_HPP_
#define SHS_SRC_ATTACK_COMMON_HPP_

#include <optional>
#include <vector>

#include "shs/attacks.hpp"
#include "shs/random.hpp"

namespace shs::detail {

// Shared state of one crafting session: the normalized input, the feasible
// boxes, the success predicate and the query ledger.
class Problem {
 public:
  Problem(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
          const AttackConstraints& constraints, const CraftOptions& options);

  ModelAccess& access() { return access_; }
  const Classifier& model() const { return access_.classifier(); }
  const std::vector<double>& z0() const { return z0_; }
  const std::vector<std::size_t>& free() const { return free_; }
  const AttackGoal& goal() const { return goal_; }
  PatientState reference() const { return reference_; }
  PatientState initial() const { return initial_; }
  const AttackConstraints& constraints() const { return constraints_; }
  Rng& rng() { return rng_; }

  // Threshold-limited interval of coordinate i; degenerate when masked out.
  double lo(std::size_t i) const { return lo_[i]; }
  double hi(std::size_t i) const { return hi_[i]; }
  // Interval of coordinate i ignoring the threshold.
  double box_lo(std::size_t i) const { return box_lo_[i]; }
  double box_hi(std::size_t i) const { return box_hi_[i]; }

  bool adversarial(PatientState p) const {
    return goal_.targeted ? p == goal_.target : p != reference_;
  }

  std::size_t used() const { return access_.queries() - start_queries_; }
  std::size_t remaining() const {
    const std::size_t u = used();
    return u >= constraints_.query_budget ? 0 : constraints_.query_budget - u;
  }
  bool affordable(std::size_t n) const { return remaining() >= n; }

  // Spends one query on the unperturbed input. Returns the finished result when
  // no search is needed: the budget is empty, or the input already satisfies
  // the goal (a targeted input already at the target is marked skipped).
  std::optional<CraftResult> begin();

  // Label query with the budget check; nullopt once the budget is spent.
  std::optional<bool> is_adversarial(std::span<const double> z);

  // In-place projection onto the threshold box (or the plain box) with the
  // masked-out coordinates restored bit-exactly.
  void project(std::vector<double>& z) const;
  void project_box(std::vector<double>& z) const;

  double linf(std::span<const double> z) const;
  double l2(std::span<const double> z) const;

  // Projects onto the threshold box and evaluates the final label with an
  // uncounted classifier call.
  CraftResult finish(std::vector<double> z) const;

 private:
  ModelAccess& access_;
  VitalVector x_;
  std::vector<double> z0_;
  std::vector<double> lo_, hi_, box_lo_, box_hi_;
  std::vector<std::size_t> free_;
  AttackGoal goal_;
  AttackConstraints constraints_;
  std::optional<PatientState> given_reference_;
  PatientState reference_ = PatientState::kHighBloodPressure;
  PatientState initial_ = PatientState::kHighBloodPressure;
  std::size_t start_queries_;
  Rng rng_;
  bool skipped_ = false;
};

}  // namespace shs::detail

#endif  // SHS_SRC_ATTACK_COMMON_HPP_
