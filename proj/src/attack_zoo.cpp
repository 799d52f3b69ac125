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

// Zeroth-order coordinate descent with per-coordinate Adam.

#include <algorithm>
#include <cmath>

#include "attack_common.hpp"

namespace shs {

namespace {

constexpr double kLogFloor = 1e-12;

// C&W-style margin on log class scores; <= -kappa once the goal is met.
double zoo_loss(const ClassScores& scores, int pivot, bool targeted, double kappa) {
  double other = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(kNumStates); ++k) {
    if (k != pivot) other = std::max(other, std::log(scores[k] + kLogFloor));
  }
  const double own = std::log(scores[pivot] + kLogFloor);
  return std::max(targeted ? other - own : own - other, -kappa);
}

}  // namespace

CraftResult zoo(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                const AttackConstraints& constraints, const CraftOptions& options) {
  const ZooParams& zp = options.params.zoo;
  detail::Problem p(access, x, goal, constraints, options);
  if (auto done = p.begin()) return *done;

  const int pivot = to_index(goal.targeted ? goal.target : p.reference());
  const auto& free = p.free();
  std::vector<double> z = p.z0();
  std::vector<double> m(kNumFeatures, 0.0), v(kNumFeatures, 0.0);
  std::vector<int> steps(kNumFeatures, 0);
  std::vector<double> best = z;
  double best_loss = std::numeric_limits<double>::infinity();

  auto loss_at = [&](std::span<const double> y) {
    return zoo_loss(access.scores(y), pivot, goal.targeted, zp.kappa);
  };

  while (p.affordable(3)) {
    const std::size_t i = free[uniform_index(p.rng(), free.size())];
    double h = zp.h;
    double g = 0.0;
    for (;;) {
      std::vector<double> plus = z;
      std::vector<double> minus = z;
      plus[i] = std::min(z[i] + h, p.hi(i));
      minus[i] = std::max(z[i] - h, p.lo(i));
      const double width = plus[i] - minus[i];
      if (width <= 0.0) break;
      const double fp = loss_at(plus);
      const double fm = loss_at(minus);
      g = (fp - fm) / width;
      if (fp != fm || h >= zp.h_max || !p.affordable(3)) break;
      h = std::min(h * 10.0, zp.h_max);
    }
    if (!p.affordable(1)) break;

    const int t = ++steps[i];
    m[i] = zp.beta1 * m[i] + (1.0 - zp.beta1) * g;
    v[i] = zp.beta2 * v[i] + (1.0 - zp.beta2) * g * g;
    const double mh = m[i] / (1.0 - std::pow(zp.beta1, t));
    const double vh = v[i] / (1.0 - std::pow(zp.beta2, t));
    z[i] = std::clamp(z[i] - zp.learning_rate * mh / (std::sqrt(vh) + 1e-8), p.lo(i), p.hi(i));

    const ClassScores s = access.scores(z);
    const double loss = zoo_loss(s, pivot, goal.targeted, zp.kappa);
    if (p.adversarial(state_from_index(argmax(s)))) return p.finish(z);
    if (loss < best_loss) {
      best_loss = loss;
      best = z;
    }
  }
  return p.finish(best);
}

}  // namespace shs
