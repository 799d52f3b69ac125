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

#include "attack_common.hpp"

#include <algorithm>
#include <cmath>

namespace shs {

namespace {

constexpr double kTouchEpsilon = 1e-9;

}  // namespace

std::string_view attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::kFgm: return "fgm";
    case AttackKind::kCarliniWagner: return "cw";
    case AttackKind::kHopSkipJump: return "hsj";
    case AttackKind::kZoo: return "zoo";
    case AttackKind::kDecisionTree: return "tree";
  }
  return "?";
}

std::string_view attack_label(AttackKind k) {
  switch (k) {
    case AttackKind::kFgm: return "FGM";
    case AttackKind::kCarliniWagner: return "C&W";
    case AttackKind::kHopSkipJump: return "HopSkipJump";
    case AttackKind::kZoo: return "ZOO";
    case AttackKind::kDecisionTree: return "DecisionTree";
  }
  return "?";
}

std::optional<AttackKind> parse_attack(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (AttackKind k : kAllAttacks) {
    if (lower == attack_name(k)) return k;
  }
  if (lower == "carlini_wagner" || lower == "c&w") return AttackKind::kCarliniWagner;
  if (lower == "hopskipjump" || lower == "hop_skip_jump") return AttackKind::kHopSkipJump;
  if (lower == "decision_tree" || lower == "dt_attack") return AttackKind::kDecisionTree;
  return std::nullopt;
}

Capability required_capability(AttackKind k) {
  switch (k) {
    case AttackKind::kFgm:
    case AttackKind::kCarliniWagner:
      return Capability::kGradientOracle;
    case AttackKind::kZoo:
      return Capability::kScoreOracle;
    case AttackKind::kHopSkipJump:
    case AttackKind::kDecisionTree:
      return Capability::kLabelOracle;
  }
  return Capability::kLabelOracle;
}

bool attack_supports(AttackKind k, Algorithm victim) {
  switch (k) {
    case AttackKind::kFgm:
    case AttackKind::kCarliniWagner:
      return victim == Algorithm::kLogisticRegression || victim == Algorithm::kNeuralNet;
    case AttackKind::kDecisionTree:
      return victim == Algorithm::kDecisionTree;
    case AttackKind::kHopSkipJump:
    case AttackKind::kZoo:
      return true;
  }
  return false;
}

void validate(const AttackConstraints& c) {
  if (std::isnan(c.threshold) || c.threshold < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "attack threshold must be non-negative");
  if (c.mask.none()) throw Error(ErrorCode::kInvalidArgument, "attack feature mask is empty");
}

double symmetric_difference(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> z, std::size_t i, double h) {
  std::vector<double> p(z.begin(), z.end());
  std::vector<double> m(z.begin(), z.end());
  p[i] += h;
  m[i] -= h;
  return (f(p) - f(m)) / (2.0 * h);
}

namespace detail {

Problem::Problem(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                 const AttackConstraints& constraints, const CraftOptions& options)
    : access_(access),
      x_(x),
      goal_(goal),
      constraints_(constraints),
      given_reference_(options.reference),
      start_queries_(access.queries()),
      rng_(options.seed) {
  validate(constraints);
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "attack input is not finite");
  }
  z0_ = model().scaler().transform(x);
  lo_.resize(kNumFeatures);
  hi_.resize(kNumFeatures);
  box_lo_.resize(kNumFeatures);
  box_hi_.resize(kNumFeatures);
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!constraints.mask.test(i)) {
      lo_[i] = hi_[i] = box_lo_[i] = box_hi_[i] = z0_[i];
      continue;
    }
    free_.push_back(i);
    box_lo_[i] = std::min(0.0, z0_[i]);
    box_hi_[i] = std::max(1.0, z0_[i]);
    lo_[i] = std::max(box_lo_[i], z0_[i] - constraints.threshold);
    hi_[i] = std::min(box_hi_[i], z0_[i] + constraints.threshold);
  }
}

std::optional<CraftResult> Problem::begin() {
  if (!affordable(1)) {
    reference_ = given_reference_.value_or(model().predict_normalized(z0_));
    return finish(z0_);
  }
  initial_ = access_.predict(z0_);
  reference_ = given_reference_.value_or(initial_);
  if (adversarial(initial_)) {
    skipped_ = goal_.targeted;
    return finish(z0_);
  }
  return std::nullopt;
}

std::optional<bool> Problem::is_adversarial(std::span<const double> z) {
  if (!affordable(1)) return std::nullopt;
  return adversarial(access_.predict(z));
}

void Problem::project(std::vector<double>& z) const {
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    z[i] = lo_[i] == hi_[i] ? z0_[i] : std::clamp(z[i], lo_[i], hi_[i]);
  }
}

void Problem::project_box(std::vector<double>& z) const {
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    z[i] = constraints_.mask.test(i) ? std::clamp(z[i], box_lo_[i], box_hi_[i]) : z0_[i];
  }
}

double Problem::linf(std::span<const double> z) const {
  double m = 0.0;
  for (std::size_t i = 0; i < kNumFeatures; ++i) m = std::max(m, std::abs(z[i] - z0_[i]));
  return m;
}

double Problem::l2(std::span<const double> z) const {
  double s = 0.0;
  for (std::size_t i = 0; i < kNumFeatures; ++i) s += (z[i] - z0_[i]) * (z[i] - z0_[i]);
  return std::sqrt(s);
}

CraftResult Problem::finish(std::vector<double> z) const {
  project(z);
  CraftResult r;
  r.original = x_;
  r.z_original = z0_;
  r.goal = goal_;
  r.original_label = reference_;
  r.skipped = skipped_;
  VitalVector adv = model().scaler().inverse(z);
  FeatureMask touched;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (z[i] == z0_[i]) adv[i] = x_[i];
    if (std::abs(z[i] - z0_[i]) > kTouchEpsilon) touched.set(i);
  }
  r.adversarial = adv;
  r.z_adversarial = std::move(z);
  r.adversarial_label = model().predict(adv);
  r.success = adversarial(r.adversarial_label);
  r.queries = used();
  r.linf = linf(r.z_adversarial);
  r.l2 = l2(r.z_adversarial);
  r.devices_touched = default_schema().devices_for(touched);
  return r;
}

}  // namespace detail
}  // namespace shs
