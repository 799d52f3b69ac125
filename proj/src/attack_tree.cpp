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

// Leaf search over an exported decision tree.
//
// Every leaf of an adversarial class is a candidate. Its root path defines an
// interval per feature; the crafted point moves only the features whose
// current value lies outside that interval, to the violated bound +/- offset
// (the interval midpoint when narrower than the offset). The chosen leaf
// minimizes the number of moved features; ties go to the leaf whose common
// ancestor with the current leaf is deepest, then to the lowest leaf index.

#include <algorithm>
#include <cmath>

#include "attack_common.hpp"

namespace shs {

namespace {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();  // exclusive
  double hi = std::numeric_limits<double>::infinity();   // inclusive
};

struct Candidate {
  int leaf = -1;
  int changes = 0;
  int ancestor_depth = -1;
  std::vector<double> z;
};

}  // namespace

CraftResult decision_tree_attack(ModelAccess& access, const VitalVector& x,
                                 const AttackGoal& goal, const AttackConstraints& constraints,
                                 const CraftOptions& options) {
  const TreeStructure& tree = access.classifier().tree_structure();
  const double offset = options.params.tree.offset;
  detail::Problem p(access, x, goal, constraints, options);
  if (auto done = p.begin()) return *done;

  const auto& nodes = tree.nodes;
  const std::size_t n = nodes.size();
  std::vector<int> parent(n, -1), depth(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].is_leaf()) continue;
    for (int c : {nodes[i].left, nodes[i].right}) {
      parent[c] = static_cast<int>(i);
      depth[c] = depth[i] + 1;
    }
  }
  const int home = tree.leaf_for(p.z0());
  std::vector<bool> on_home_path(n, false);
  for (int a = home; a >= 0; a = parent[a]) on_home_path[a] = true;

  std::optional<Candidate> best;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    if (!nodes[leaf].is_leaf()) continue;
    if (!p.adversarial(state_from_index(nodes[leaf].label))) continue;

    std::vector<Interval> box(kNumFeatures);
    int ancestor_depth = -1;
    for (int c = static_cast<int>(leaf); parent[c] >= 0; c = parent[c]) {
      const TreeNode& split = nodes[parent[c]];
      Interval& iv = box[split.feature];
      if (c == split.left) {
        iv.hi = std::min(iv.hi, split.threshold);
      } else {
        iv.lo = std::max(iv.lo, split.threshold);
      }
      if (ancestor_depth < 0 && on_home_path[parent[c]]) ancestor_depth = depth[parent[c]];
    }

    Candidate cand{static_cast<int>(leaf), 0, ancestor_depth, p.z0()};
    bool feasible = true;
    for (std::size_t f = 0; f < kNumFeatures && feasible; ++f) {
      const Interval& iv = box[f];
      const double cur = p.z0()[f];
      if (cur > iv.lo && cur <= iv.hi) continue;
      double target;
      if (iv.hi - iv.lo <= offset) {
        target = 0.5 * (iv.lo + iv.hi);
      } else {
        target = cur <= iv.lo ? iv.lo + offset : iv.hi - offset;
      }
      if (target < p.lo(f) || target > p.hi(f) || !(target > iv.lo && target <= iv.hi)) {
        feasible = false;
        break;
      }
      cand.z[f] = target;
      ++cand.changes;
    }
    if (!feasible) continue;
    const bool better =
        !best || cand.changes < best->changes ||
        (cand.changes == best->changes && cand.ancestor_depth > best->ancestor_depth);
    if (better) best = std::move(cand);
  }
  if (!best) return p.finish(p.z0());
  return p.finish(std::move(best->z));
}

}  // namespace shs
