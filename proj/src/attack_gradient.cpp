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

// White-box attacks: the one-step signed gradient method and the
// Carlini-Wagner L2 optimization.

#include <algorithm>
#include <cmath>

#include "attack_common.hpp"

namespace shs {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Margin term of the C&W objective for logits Z and the class it pivots on.
// Targeted: max_{i != t} Z_i - Z_t. Untargeted: Z_r - max_{i != r} Z_i.
// `other` receives the competing class.
double cw_margin(const ClassScores& logits, int pivot, bool targeted, int& other) {
  other = -1;
  for (int k = 0; k < static_cast<int>(kNumStates); ++k) {
    if (k == pivot) continue;
    if (other < 0 || logits[k] > logits[other]) other = k;
  }
  const double gap = logits[other] - logits[pivot];
  return targeted ? gap : -gap;
}

}  // namespace

CraftResult fgm(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                const AttackConstraints& constraints, const CraftOptions& options) {
  if (!constraints.bounded())
    throw Error(ErrorCode::kInvalidArgument, "fgm needs a finite threshold (epsilon)");
  detail::Problem p(access, x, goal, constraints, options);
  if (auto done = p.begin()) return *done;
  if (!p.affordable(1)) return p.finish(p.z0());

  const PatientState y = goal.targeted ? goal.target : p.initial();
  const std::vector<double> g = access.input_gradient(p.z0(), y);
  const double direction = goal.targeted ? -1.0 : 1.0;
  std::vector<double> z = p.z0();
  for (std::size_t i : p.free()) z[i] += direction * constraints.threshold * sign(g[i]);
  return p.finish(std::move(z));
}

CraftResult carlini_wagner(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                           const AttackConstraints& constraints, const CraftOptions& options) {
  const CwParams& cw = options.params.cw;
  detail::Problem p(access, x, goal, constraints, options);
  if (auto done = p.begin()) return *done;

  const int pivot = to_index(goal.targeted ? goal.target : p.reference());
  const auto& free = p.free();
  const std::size_t n = free.size();

  // z_i = lo + (hi - lo) * (tanh(w_i) + 1) / 2 over the threshold-free box.
  std::vector<double> base(n);
  std::vector<double> span(n);
  std::vector<double> w0(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = free[j];
    base[j] = p.box_lo(i);
    span[j] = p.box_hi(i) - p.box_lo(i);
    const double u = std::clamp(2.0 * (p.z0()[i] - base[j]) / span[j] - 1.0, -1.0 + 1e-9,
                                1.0 - 1e-9);
    w0[j] = std::atanh(u);
  }

  std::optional<std::vector<double>> best;
  double best_l2 = std::numeric_limits<double>::infinity();
  double c_lo = 0.0;
  double c_hi = cw.c_max;
  double c = cw.c_initial;
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kAdamEps = 1e-8;

  std::vector<double> z = p.z0();
  std::vector<double> w(n), m(n), v(n), grad_w(n);
  bool out_of_budget = false;
  for (int step = 0; step < cw.binary_steps && !out_of_budget; ++step) {
    w = w0;
    std::fill(m.begin(), m.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    bool found = false;
    for (int it = 1; it <= cw.iterations; ++it) {
      if (!p.affordable(2)) {
        out_of_budget = true;
        break;
      }
      for (std::size_t j = 0; j < n; ++j)
        z[free[j]] = base[j] + span[j] * (std::tanh(w[j]) + 1.0) * 0.5;
      const ClassScores logits = access.logits(z);
      int other = 0;
      const double margin = cw_margin(logits, pivot, goal.targeted, other);
      const double dist2 = [&] {
        double s = 0.0;
        for (std::size_t i : free) s += (z[i] - p.z0()[i]) * (z[i] - p.z0()[i]);
        return s;
      }();
      if (!std::isfinite(margin) || !std::isfinite(dist2))
        throw Error(ErrorCode::kNumerical, "carlini-wagner loss is not finite");

      if (p.adversarial(state_from_index(argmax(logits)))) {
        found = true;
        if (dist2 < best_l2 * best_l2) {
          best_l2 = std::sqrt(dist2);
          best = z;
        }
      }

      // d/dz of dist2 + c * max(margin, -kappa).
      std::vector<double> gz(kNumFeatures, 0.0);
      for (std::size_t i : free) gz[i] = 2.0 * (z[i] - p.z0()[i]);
      if (margin > -cw.kappa) {
        ClassScores cot{};
        if (goal.targeted) {
          cot[other] = 1.0;
          cot[pivot] = -1.0;
        } else {
          cot[pivot] = 1.0;
          cot[other] = -1.0;
        }
        const std::vector<double> gm = access.logits_vjp(z, cot);
        for (std::size_t i : free) gz[i] += c * gm[i];
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double t = std::tanh(w[j]);
        grad_w[j] = gz[free[j]] * span[j] * 0.5 * (1.0 - t * t);
        m[j] = kBeta1 * m[j] + (1.0 - kBeta1) * grad_w[j];
        v[j] = kBeta2 * v[j] + (1.0 - kBeta2) * grad_w[j] * grad_w[j];
        const double mh = m[j] / (1.0 - std::pow(kBeta1, it));
        const double vh = v[j] / (1.0 - std::pow(kBeta2, it));
        w[j] -= cw.learning_rate * mh / (std::sqrt(vh) + kAdamEps);
      }
    }
    if (found) {
      c_hi = std::min(c_hi, c);
      c = 0.5 * (c_lo + c_hi);
    } else {
      c_lo = std::max(c_lo, c);
      c = c_hi < cw.c_max ? 0.5 * (c_lo + c_hi) : std::min(c * 10.0, cw.c_max);
    }
  }
  if (!best) return p.finish(p.z0());

  // Adam overshoots the boundary by up to one step; pull the best point back
  // toward z0 along the segment while it stays adversarial.
  double keep = 1.0, drop = 0.0;
  std::vector<double> probe(kNumFeatures);
  for (int it = 0; it < cw.pullback_steps && p.affordable(1); ++it) {
    const double mid = 0.5 * (keep + drop);
    for (std::size_t i = 0; i < kNumFeatures; ++i)
      probe[i] = p.z0()[i] + mid * ((*best)[i] - p.z0()[i]);
    p.project(probe);
    if (p.adversarial(access.predict(probe))) {
      keep = mid;
    } else {
      drop = mid;
    }
  }
  if (keep == 1.0) return p.finish(std::move(*best));
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    probe[i] = p.z0()[i] + keep * ((*best)[i] - p.z0()[i]);
  return p.finish(std::move(probe));
}

}  // namespace shs
