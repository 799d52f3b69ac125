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

// Decision-based HopSkipJump under the Chebyshev (L-infinity) distance.
//
// Iterates stay inside the masked box. A candidate replaces the current
// boundary point only when its distance is not larger, so the distance trace
// never increases. Iteration stops once the distance is within the threshold;
// a point still outside is clipped to the threshold box and re-labelled.

#include <algorithm>
#include <cmath>

#include "attack_common.hpp"

namespace shs {

namespace {

using detail::Problem;

// Point on the L-infinity path from z0 toward `adv` at radius alpha.
std::vector<double> clip_toward(const Problem& p, const std::vector<double>& adv, double alpha) {
  std::vector<double> out = adv;
  for (std::size_t i : p.free())
    out[i] = std::clamp(adv[i], p.z0()[i] - alpha, p.z0()[i] + alpha);
  return out;
}

// Shrinks the radius between z0 (benign) and `adv` (adversarial) down to the
// tolerance and returns the adversarial end; stops early when the budget runs
// out.
std::vector<double> boundary_search(Problem& p, const std::vector<double>& adv,
                                                   double tolerance) {
  double high = p.linf(adv);
  double low = 0.0;
  std::vector<double> best = adv;
  while (high - low > tolerance) {
    const double mid = 0.5 * (low + high);
    std::vector<double> cand = clip_toward(p, adv, mid);
    const auto hit = p.is_adversarial(cand);
    if (!hit) return best;
    if (*hit) {
      high = mid;
      best = std::move(cand);
    } else {
      low = mid;
    }
  }
  return best;
}

std::optional<std::vector<double>> initial_point(Problem& p, const CraftOptions& options,
                                                 int restarts) {
  int tried = 0;
  for (const VitalVector& s : options.starting_points) {
    if (tried >= restarts) break;
    ++tried;
    std::vector<double> z = p.model().scaler().transform(s);
    p.project_box(z);
    const auto hit = p.is_adversarial(z);
    if (!hit) return std::nullopt;
    if (*hit) return z;
  }
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> z = p.z0();
    for (std::size_t i : p.free()) z[i] = uniform(p.rng(), p.box_lo(i), p.box_hi(i));
    const auto hit = p.is_adversarial(z);
    if (!hit) return std::nullopt;
    if (*hit) return z;
  }
  return std::nullopt;
}

}  // namespace

CraftResult hop_skip_jump(ModelAccess& access, const VitalVector& x, const AttackGoal& goal,
                          const AttackConstraints& constraints, const CraftOptions& options) {
  const HsjParams& hp = options.params.hsj;
  Problem p(access, x, goal, constraints, options);
  if (auto done = p.begin()) return *done;

  const auto start = initial_point(p, options, hp.restarts);
  if (!start) return p.finish(p.z0());
  std::vector<double> current = boundary_search(p, *start, hp.tolerance);
  double dist = p.linf(current);
  std::vector<double> trace;

  const auto& free = p.free();
  const double d = static_cast<double>(free.size());
  const double theta = hp.gamma / (d * d);
  bool exhausted = false;
  for (int t = 1; t <= hp.iterations && !exhausted; ++t) {
    if (constraints.bounded() && dist <= constraints.threshold) break;
    if (dist <= 0.0) break;

    // Monte-Carlo estimate of the boundary normal from label flips.
    const double delta = t == 1 ? 0.1 : d * theta * dist;
    const int evals = std::min(
        hp.max_evals, static_cast<int>(std::lround(hp.initial_evals * std::sqrt(double(t)))));
    std::vector<std::vector<double>> dirs;
    std::vector<double> fval;
    dirs.reserve(evals);
    for (int e = 0; e < evals; ++e) {
      std::vector<double> u(kNumFeatures, 0.0);
      double norm = 0.0;
      for (std::size_t i : free) {
        u[i] = uniform(p.rng(), -1.0, 1.0);
        norm += u[i] * u[i];
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      std::vector<double> probe = current;
      for (std::size_t i : free) probe[i] = current[i] + delta * u[i] / norm;
      p.project_box(probe);
      for (std::size_t i : free) u[i] = (probe[i] - current[i]) / delta;
      const auto hit = p.is_adversarial(probe);
      if (!hit) {
        exhausted = true;
        break;
      }
      dirs.push_back(std::move(u));
      fval.push_back(*hit ? 1.0 : -1.0);
    }
    if (exhausted || dirs.empty()) break;
    double mean = 0.0;
    for (double f : fval) mean += f;
    mean /= static_cast<double>(fval.size());
    std::vector<double> grad(kNumFeatures, 0.0);
    const bool uniform_votes = std::abs(mean) == 1.0;
    for (std::size_t e = 0; e < dirs.size(); ++e) {
      const double wgt = uniform_votes ? mean : fval[e] - mean;
      for (std::size_t i : free) grad[i] += wgt * dirs[e][i];
    }

    // Geometric step along sign(grad), then back to the boundary.
    double eps = dist / std::sqrt(double(t));
    std::optional<std::vector<double>> stepped;
    for (int halving = 0; halving < 30; ++halving) {
      std::vector<double> cand = current;
      for (std::size_t i : free)
        cand[i] = current[i] + eps * (grad[i] > 0.0 ? 1.0 : (grad[i] < 0.0 ? -1.0 : 0.0));
      p.project_box(cand);
      const auto hit = p.is_adversarial(cand);
      if (!hit) {
        exhausted = true;
        break;
      }
      if (*hit) {
        stepped = std::move(cand);
        break;
      }
      eps *= 0.5;
    }
    if (stepped) {
      std::vector<double> next = boundary_search(p, *stepped, hp.tolerance);
      const double nd = p.linf(next);
      if (nd <= dist) {
        current = std::move(next);
        dist = nd;
      }
    }
    trace.push_back(dist);
  }

  CraftResult r = p.finish(current);
  r.trace = std::move(trace);
  return r;
}

}  // namespace shs
