// Copyright 2026 The newsrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Axis-aligned regression trees shared by the boosted and bagged rankers.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "json.hpp"
#include "newsrank/common.hpp"

namespace newsrank {

/// Dense row-major feature matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t cols) : cols_(cols) {}

  void add_row(std::span<const double> row) {
    if (row.size() != cols_) throw ConfigError("row width mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
  }

  std::size_t rows() const { return cols_ ? data_.size() / cols_ : 0; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

 private:
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Rows with x[feature] <= threshold go left.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
  };

  RegressionTree() : nodes_{Node{}} {}
  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    validate();
  }

  /// Single-leaf tree.
  static RegressionTree constant(double value) {
    return RegressionTree({Node{-1, 0.0, -1, -1, value}});
  }

  double predict(std::span<const double> x) const {
    int i = 0;
    while (nodes_[i].feature >= 0) {
      const Node& n = nodes_[i];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                 : n.right;
    }
    return nodes_[i].value;
  }

  const std::vector<Node>& nodes() const { return nodes_; }

  std::size_t num_leaves() const {
    return static_cast<std::size_t>(std::count_if(
        nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
  }

  /// Edges on the longest root-to-leaf path.
  int depth() const { return depth_from(0); }

  int max_feature_index() const {
    int m = -1;
    for (const auto& n : nodes_) m = std::max(m, n.feature);
    return m;
  }

  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& n : nodes_) {
      arr.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    }
    return arr;
  }

  static RegressionTree from_json(const nlohmann::json& j) {
    std::vector<Node> nodes;
    for (const auto& n : j) {
      if (!n.is_array() || n.size() != 5) {
        throw CorruptArtifactError("tree node must have 5 fields");
      }
      nodes.push_back({n[0].get<int>(), n[1].get<double>(), n[2].get<int>(),
                       n[3].get<int>(), n[4].get<double>()});
    }
    return RegressionTree(std::move(nodes));
  }

 private:
  std::vector<Node> nodes_;

  int depth_from(int i) const {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth_from(n.left), depth_from(n.right));
  }

  void validate() const {
    if (nodes_.empty()) throw CorruptArtifactError("tree has no nodes");
    int n = static_cast<int>(nodes_.size());
    for (int i = 0; i < n; ++i) {
      const Node& node = nodes_[static_cast<std::size_t>(i)];
      if (node.feature >= 0 &&
          (node.left <= i || node.right <= i || node.left >= n ||
           node.right >= n)) {
        throw CorruptArtifactError("tree child index out of range");
      }
      if (!std::isfinite(node.value) || !std::isfinite(node.threshold)) {
        throw CorruptArtifactError("non-finite tree parameter");
      }
    }
  }
};

struct TreeParams {
  int max_depth = 0;   // 0: unlimited
  int max_leaves = 0;  // 0: unlimited
  int min_samples_leaf = 1;
  /// Fraction of features considered at each split.
  double feature_fraction = 1.0;
};

/// Leaf value from the rows that reached the leaf.
using LeafValueFn = std::function<double(std::span<const int> rows)>;

/// Row indices ordered by each feature (stable, ascending).
using SortedColumns = std::vector<std::vector<int>>;

inline SortedColumns sort_columns(const FeatureMatrix& x,
                                  std::span<const int> rows) {
  SortedColumns sorted(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    auto& order = sorted[f];
    order.assign(rows.begin(), rows.end());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return x.at(static_cast<std::size_t>(a), f) <
             x.at(static_cast<std::size_t>(b), f);
    });
  }
  return sorted;
}

/// Column orders for a multiset of rows, derived from orders over all rows
/// without re-sorting. Equal values appear in the order of `all`.
inline SortedColumns expand_columns(const SortedColumns& all,
                                    std::span<const int> multiplicity) {
  SortedColumns out(all.size());
  for (std::size_t f = 0; f < all.size(); ++f) {
    for (int r : all[f]) {
      out[f].insert(out[f].end(),
                    static_cast<std::size_t>(multiplicity[static_cast<std::size_t>(r)]),
                    r);
    }
  }
  return out;
}

/// Grows a least-squares regression tree best-first. `rows` may contain
/// repeats (bootstrap samples). Split thresholds are midpoints between
/// adjacent distinct feature values. `rng` is only consulted when
/// feature_fraction < 1. `presorted`, when given, must hold `rows` ordered
/// by ascending value for each feature (as sort_columns does).
inline RegressionTree fit_tree(const FeatureMatrix& x, std::span<const int> rows,
                               std::span<const double> target,
                               const TreeParams& params,
                               const LeafValueFn& leaf_value,
                               std::mt19937_64* rng = nullptr,
                               const SortedColumns* presorted = nullptr) {
  using Node = RegressionTree::Node;
  const std::size_t num_features = x.cols();
  if (rows.empty()) throw TrainingError("cannot fit a tree on zero rows");

  struct Work {
    int node = 0;
    int depth = 0;
    std::vector<std::vector<int>> sorted;  // per feature, rows by value
    // best split
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
  };

  auto find_split = [&](Work& w) {
    w.feature = -1;
    w.gain = 0.0;
    const auto& any = w.sorted[0];
    const std::size_t n = any.size();
    const std::size_t min_leaf =
        static_cast<std::size_t>(std::max(1, params.min_samples_leaf));
    if (n < 2 * min_leaf) return;

    std::vector<std::size_t> features(num_features);
    std::iota(features.begin(), features.end(), 0);
    if (params.feature_fraction < 1.0 && rng != nullptr) {
      auto k = static_cast<std::size_t>(std::max(
          1.0, std::round(params.feature_fraction *
                          static_cast<double>(num_features))));
      std::shuffle(features.begin(), features.end(), *rng);
      features.resize(std::min(k, num_features));
      std::sort(features.begin(), features.end());
    }

    double total = 0.0;
    for (int r : any) total += target[static_cast<std::size_t>(r)];
    const double base = total * total / static_cast<double>(n);

    for (std::size_t f : features) {
      const auto& order = w.sorted[f];
      double left = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left += target[static_cast<std::size_t>(order[i])];
        double v = x.at(static_cast<std::size_t>(order[i]), f);
        double next = x.at(static_cast<std::size_t>(order[i + 1]), f);
        if (!(v < next)) continue;
        std::size_t nl = i + 1;
        std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        double right = total - left;
        double gain = left * left / static_cast<double>(nl) +
                      right * right / static_cast<double>(nr) - base;
        if (gain > w.gain + 1e-12) {
          double mid = v + (next - v) / 2.0;
          if (!(mid < next)) mid = v;
          w.gain = gain;
          w.feature = static_cast<int>(f);
          w.threshold = mid;
        }
      }
    }
  };

  std::vector<Node> nodes(1);

  Work root;
  root.sorted = presorted ? *presorted : sort_columns(x, rows);
  if (num_features == 0) root.sorted.push_back({rows.begin(), rows.end()});

  auto can_grow = [&](const Work& w) {
    return params.max_depth <= 0 || w.depth < params.max_depth;
  };

  // Leaves in creation order; expansion picks the highest gain, ties to the
  // earliest created.
  std::vector<Work> frontier;
  if (num_features > 0 && can_grow(root)) find_split(root);
  frontier.push_back(std::move(root));
  std::size_t leaves = 1;

  for (;;) {
    if (params.max_leaves > 0 &&
        leaves >= static_cast<std::size_t>(params.max_leaves))
      break;
    int best = -1;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      if (frontier[i].feature < 0) continue;
      if (best < 0 || frontier[i].gain > frontier[static_cast<std::size_t>(best)].gain)
        best = static_cast<int>(i);
    }
    if (best < 0) break;

    Work w = std::move(frontier[static_cast<std::size_t>(best)]);
    frontier.erase(frontier.begin() + best);

    Work l, r;
    l.depth = r.depth = w.depth + 1;
    l.sorted.resize(w.sorted.size());
    r.sorted.resize(w.sorted.size());
    const auto f_split = static_cast<std::size_t>(w.feature);
    for (std::size_t f = 0; f < w.sorted.size(); ++f) {
      for (int row : w.sorted[f]) {
        if (x.at(static_cast<std::size_t>(row), f_split) <= w.threshold) {
          l.sorted[f].push_back(row);
        } else {
          r.sorted[f].push_back(row);
        }
      }
    }
    l.node = static_cast<int>(nodes.size());
    r.node = l.node + 1;
    nodes.push_back({});
    nodes.push_back({});
    Node& parent = nodes[static_cast<std::size_t>(w.node)];
    parent.feature = w.feature;
    parent.threshold = w.threshold;
    parent.left = l.node;
    parent.right = r.node;
    ++leaves;

    if (can_grow(l)) find_split(l);
    if (can_grow(r)) find_split(r);
    frontier.push_back(std::move(l));
    frontier.push_back(std::move(r));
  }

  for (const auto& w : frontier) {
    nodes[static_cast<std::size_t>(w.node)].value = leaf_value(w.sorted[0]);
  }
  return RegressionTree(std::move(nodes));
}

/// Leaf value policy: mean target of the rows in the leaf.
inline LeafValueFn mean_leaf(std::span<const double> target) {
  return [target](std::span<const int> rows) {
    double s = 0.0;
    for (int r : rows) s += target[static_cast<std::size_t>(r)];
    return rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
  };
}

}  // namespace newsrank
