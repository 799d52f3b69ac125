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

// CART with Gini impurity and midpoint thresholds; bagged forests.

#include <algorithm>
#include <numeric>

#include "training.hpp"

namespace shs::detail {

namespace {

using Counts = std::array<double, kNumStates>;

double sum_sq_over_n(const Counts& c, double n) {
  if (n <= 0.0) return 0.0;
  double s = 0.0;
  for (double v : c) s += v * v;
  return s / n;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& data, int max_depth, int min_leaf, int features_per_split, Rng& rng)
      : data_(data),
        max_depth_(max_depth),
        min_leaf_(min_leaf),
        features_per_split_(features_per_split),
        rng_(rng) {}

  TreeStructure build(std::span<const std::size_t> rows) {
    std::vector<std::size_t> idx(rows.begin(), rows.end());
    grow(idx, 0);
    return TreeStructure{std::move(nodes_)};
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;  // sum over children of sum_k c_k^2 / n
    std::size_t n_left = 0;
  };

  int make_leaf(const Counts& counts, double n) {
    TreeNode leaf;
    for (std::size_t k = 0; k < kNumStates; ++k) leaf.distribution[k] = counts[k] / n;
    leaf.label = argmax(leaf.distribution);
    nodes_.push_back(leaf);
    return static_cast<int>(nodes_.size() - 1);
  }

  std::vector<int> candidate_features() {
    std::vector<int> feats(kNumFeatures);
    std::iota(feats.begin(), feats.end(), 0);
    if (features_per_split_ >= static_cast<int>(kNumFeatures)) return feats;
    for (int i = 0; i < features_per_split_; ++i) {
      const auto j = i + uniform_index(rng_, kNumFeatures - i);
      std::swap(feats[i], feats[j]);
    }
    feats.resize(features_per_split_);
    std::sort(feats.begin(), feats.end());
    return feats;
  }

  Split best_split(std::vector<std::size_t>& idx, const Counts& total, double parent_score) {
    Split best;
    best.score = parent_score + 1e-12;
    const double n = static_cast<double>(idx.size());
    for (int f : candidate_features()) {
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double va = data_.values[a * kNumFeatures + f];
        const double vb = data_.values[b * kNumFeatures + f];
        return va < vb || (va == vb && a < b);
      });
      Counts left{};
      Counts right = total;
      for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        const int y = data_.labels[idx[i]];
        left[y] += 1.0;
        right[y] -= 1.0;
        const std::size_t n_left = i + 1;
        if (n_left < static_cast<std::size_t>(min_leaf_)) continue;
        if (idx.size() - n_left < static_cast<std::size_t>(min_leaf_)) break;
        const double v = data_.values[idx[i] * kNumFeatures + f];
        const double v_next = data_.values[idx[i + 1] * kNumFeatures + f];
        if (!(v < v_next)) continue;
        const double score = sum_sq_over_n(left, static_cast<double>(n_left)) +
                             sum_sq_over_n(right, n - static_cast<double>(n_left));
        if (score > best.score) {
          double thr = 0.5 * (v + v_next);
          if (!(thr < v_next)) thr = v;
          best = Split{f, thr, score, n_left};
        }
      }
    }
    return best;
  }

  int grow(std::vector<std::size_t>& idx, int depth) {
    Counts counts{};
    for (std::size_t i : idx) counts[data_.labels[i]] += 1.0;
    const double n = static_cast<double>(idx.size());
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
    if (pure || depth >= max_depth_ || idx.size() < 2 * static_cast<std::size_t>(min_leaf_))
      return make_leaf(counts, n);

    const Split split = best_split(idx, counts, sum_sq_over_n(counts, n));
    if (split.feature < 0) return make_leaf(counts, n);

    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;
    left_idx.reserve(split.n_left);
    right_idx.reserve(idx.size() - split.n_left);
    for (std::size_t i : idx) {
      if (data_.values[i * kNumFeatures + split.feature] <= split.threshold)
        left_idx.push_back(i);
      else
        right_idx.push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    const int node = static_cast<int>(nodes_.size());
    TreeNode internal;
    internal.feature = split.feature;
    internal.threshold = split.threshold;
    for (std::size_t k = 0; k < kNumStates; ++k) internal.distribution[k] = counts[k] / n;
    internal.label = argmax(internal.distribution);
    nodes_.push_back(internal);
    const int l = grow(left_idx, depth + 1);
    const int r = grow(right_idx, depth + 1);
    nodes_[node].left = l;
    nodes_[node].right = r;
    return node;
  }

  const Matrix& data_;
  int max_depth_;
  int min_leaf_;
  int features_per_split_;
  Rng& rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

TreeStructure fit_tree(const Matrix& data, std::span<const std::size_t> rows, int max_depth,
                       int min_leaf, int features_per_split, Rng& rng) {
  return TreeBuilder(data, max_depth, min_leaf, features_per_split, rng).build(rows);
}

ForestModel fit_forest(const Matrix& data, const ForestHyper& hyper, Rng& rng) {
  ForestModel forest;
  forest.trees.reserve(hyper.n_trees);
  const std::size_t n = data.rows();
  std::vector<std::size_t> rows(n);
  for (int t = 0; t < hyper.n_trees; ++t) {
    Rng tree_rng(derive_seed(rng(), static_cast<std::uint64_t>(t)));
    for (auto& r : rows) r = uniform_index(tree_rng, n);
    forest.trees.push_back(fit_tree(data, rows, hyper.max_depth, hyper.min_leaf,
                                    hyper.feature_subsample, tree_rng));
  }
  return forest;
}

}  // namespace shs::detail
