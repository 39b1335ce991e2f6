// Copyright 2026 The clnk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "clnk/dense_matrix.hpp"
#include "clnk/error.hpp"
#include "clnk/graph.hpp"
#include "clnk/heuristics.hpp"
#include "clnk/rng.hpp"

namespace clnk {

inline constexpr std::size_t kEdgeFeatureCount = 7;

/// [common neighbors, jaccard, adamic-adar, preferential attachment,
///  min degree, max degree, |degree difference|]
using EdgeFeatureVector = std::array<double, kEdgeFeatureCount>;

inline EdgeFeatureVector edge_features(const Graph& g, NodeId i, NodeId j) {
  EdgeFeatureVector f{};
  f[0] = heuristic_score(g, i, j, HeuristicMethod::CommonNeighbors);
  f[1] = heuristic_score(g, i, j, HeuristicMethod::Jaccard);
  f[2] = heuristic_score(g, i, j, HeuristicMethod::AdamicAdar);
  f[3] = heuristic_score(g, i, j, HeuristicMethod::PreferentialAttachment);
  const auto di = static_cast<double>(g.degree(i));
  const auto dj = static_cast<double>(g.degree(j));
  f[4] = std::min(di, dj);
  f[5] = std::max(di, dj);
  f[6] = std::abs(di - dj);
  return f;
}

/// Features of (i, j) as they would be if the edge (i, j) were absent from
/// `g`. Training positives are featurized this way so they look like the
/// held-out pairs scored at test time. Identical to edge_features for
/// non-edges.
inline EdgeFeatureVector edge_features_held_out(const Graph& g, NodeId i, NodeId j) {
  EdgeFeatureVector f = edge_features(g, i, j);
  if (!g.has_edge(i, j)) return f;
  // i and j are never common neighbors of each other, so the intersection
  // and the Adamic-Adar sum are unchanged; each endpoint loses one degree
  // and the union loses both endpoints.
  const double cn = f[0];
  const auto di = static_cast<double>(g.degree(i) - 1);
  const auto dj = static_cast<double>(g.degree(j) - 1);
  const double uni = di + dj - cn;
  f[1] = uni == 0 ? 0.0 : cn / uni;
  f[3] = di * dj;
  f[4] = std::min(di, dj);
  f[5] = std::max(di, dj);
  f[6] = std::abs(di - dj);
  return f;
}

struct TreeConfig {
  std::size_t max_depth = 6;
  std::size_t min_leaf = 5;
};

struct TreeNode {
  /// -1 for leaves.
  int feature = -1;
  double threshold = 0.0;
  double probability = 0.0;
  int left = -1;
  int right = -1;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// CART classification tree. Nodes are stored in preorder, root first.
struct TreeModel {
  std::size_t num_features = 0;
  std::vector<TreeNode> nodes;

  friend bool operator==(const TreeModel&, const TreeModel&) = default;

  std::size_t depth() const {
    std::size_t best = 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
      auto [idx, d] = stack.back();
      stack.pop_back();
      best = std::max(best, d);
      const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
      if (!node.is_leaf()) {
        stack.push_back({node.left, d + 1});
        stack.push_back({node.right, d + 1});
      }
    }
    return best;
  }
};

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t max_depth = 6;
  std::size_t min_leaf = 5;
  /// Features examined per split; 0 means round(sqrt(feature count)).
  std::size_t feature_subsample = 0;
  bool bootstrap = true;
};

struct ForestModel {
  std::size_t num_features = 0;
  std::vector<TreeModel> trees;
  std::vector<std::uint64_t> tree_seeds;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

namespace detail {

using u128 = unsigned __int128;

/// Σ over children of (pos² + neg²) / size, held as an exact fraction.
/// Maximizing it minimizes the size-weighted Gini impurity.
struct Purity {
  u128 num = 0;
  u128 den = 1;

  static Purity of(std::uint64_t pos, std::uint64_t neg) {
    return {static_cast<u128>(pos) * pos + static_cast<u128>(neg) * neg,
            static_cast<u128>(pos + neg)};
  }
  static Purity of(std::uint64_t lp, std::uint64_t ln, std::uint64_t rp,
                   std::uint64_t rn) {
    const u128 a = static_cast<u128>(lp) * lp + static_cast<u128>(ln) * ln;
    const u128 b = static_cast<u128>(rp) * rp + static_cast<u128>(rn) * rn;
    const u128 nl = lp + ln, nr = rp + rn;
    return {a * nr + b * nl, nl * nr};
  }
  bool operator>(const Purity& o) const { return num * o.den > o.num * den; }
};

class TreeBuilder {
 public:
  TreeBuilder(const DenseMatrix& x, std::span<const int> y, const TreeConfig& cfg,
              std::size_t features_per_split, Rng* rng)
      : x_(x), y_(y), cfg_(cfg), per_split_(features_per_split), rng_(rng) {}

  TreeModel build(std::vector<std::size_t> rows) {
    model_.num_features = x_.cols();
    grow(rows, 0);
    return std::move(model_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    Purity purity;
  };

  int grow(std::vector<std::size_t>& rows, std::size_t depth) {
    std::uint64_t pos = 0;
    for (std::size_t r : rows) pos += (y_[r] == 1);
    const std::uint64_t neg = rows.size() - pos;

    const int index = static_cast<int>(model_.nodes.size());
    TreeNode node;
    node.probability = static_cast<double>(pos) / static_cast<double>(rows.size());
    model_.nodes.push_back(node);

    if (depth >= cfg_.max_depth || pos == 0 || neg == 0 ||
        rows.size() < 2 * std::max<std::size_t>(cfg_.min_leaf, 1)) {
      return index;
    }
    const Split best = find_split(rows, pos, neg);
    if (best.feature < 0) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x_(r, static_cast<std::size_t>(best.feature)) < best.threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    TreeNode& self = model_.nodes[static_cast<std::size_t>(index)];
    self.feature = best.feature;
    self.threshold = best.threshold;
    self.left = l;
    self.right = r;
    return index;
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> feats(x_.cols());
    std::iota(feats.begin(), feats.end(), std::size_t{0});
    if (rng_ == nullptr || per_split_ >= feats.size()) return feats;
    for (std::size_t i = 0; i < per_split_; ++i) {
      const std::size_t j = i + rng_->below(feats.size() - i);
      std::swap(feats[i], feats[j]);
    }
    feats.resize(per_split_);
    std::sort(feats.begin(), feats.end());
    return feats;
  }

  // Candidates are visited by ascending feature, then ascending threshold,
  // and only a strictly purer split replaces the incumbent.
  Split find_split(const std::vector<std::size_t>& rows, std::uint64_t pos,
                   std::uint64_t neg) {
    Split best;
    best.purity = Purity::of(pos, neg);
    const std::size_t min_leaf = std::max<std::size_t>(cfg_.min_leaf, 1);
    std::vector<std::pair<double, int>> column(rows.size());
    for (std::size_t f : candidate_features()) {
      for (std::size_t k = 0; k < rows.size(); ++k) {
        column[k] = {x_(rows[k], f), y_[rows[k]]};
      }
      std::sort(column.begin(), column.end());
      std::uint64_t lp = 0, ln = 0;
      for (std::size_t k = 0; k + 1 < column.size(); ++k) {
        (column[k].second == 1 ? lp : ln) += 1;
        const double a = column[k].first, b = column[k + 1].first;
        if (a == b) continue;
        const std::size_t nl = k + 1, nr = column.size() - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const Purity p = Purity::of(lp, ln, pos - lp, neg - ln);
        if (p > best.purity) {
          double t = a + (b - a) / 2.0;
          if (!(t > a)) t = b;
          best = {static_cast<int>(f), t, p};
        }
      }
    }
    return best;
  }

  const DenseMatrix& x_;
  std::span<const int> y_;
  TreeConfig cfg_;
  std::size_t per_split_;
  Rng* rng_;
  TreeModel model_;
};

inline void check_training_data(const DenseMatrix& x, std::span<const int> y) {
  if (x.rows() == 0 || y.empty()) throw InputError("tree training data is empty");
  if (x.rows() != y.size()) {
    throw InputError("tree training data has " + std::to_string(x.rows()) +
                     " rows but " + std::to_string(y.size()) + " labels");
  }
  if (x.cols() == 0) throw InputError("tree training data has no features");
}

}  // namespace detail

/// Greedy Gini CART. Thresholds are midpoints between consecutive distinct
/// values and a row goes left when feature < threshold.
inline TreeModel train_tree(const DenseMatrix& x, std::span<const int> y,
                            const TreeConfig& cfg) {
  detail::check_training_data(x, y);
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return detail::TreeBuilder(x, y, cfg, x.cols(), nullptr).build(std::move(rows));
}

inline double predict(const TreeModel& t, std::span<const double> features) {
  if (features.size() != t.num_features) {
    throw InputError("tree expects " + std::to_string(t.num_features) +
                     " features, got " + std::to_string(features.size()));
  }
  std::size_t idx = 0;
  while (!t.nodes[idx].is_leaf()) {
    const TreeNode& node = t.nodes[idx];
    idx = static_cast<std::size_t>(
        features[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left
                                                                          : node.right);
  }
  return t.nodes[idx].probability;
}

inline ForestModel train_forest(const DenseMatrix& x, std::span<const int> y,
                                const ForestConfig& cfg, std::uint64_t seed) {
  detail::check_training_data(x, y);
  if (cfg.n_trees < 1) throw InputError("forest needs at least one tree");
  std::size_t per_split = cfg.feature_subsample;
  if (per_split == 0) {
    per_split = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(x.cols()))));
  }
  per_split = std::clamp<std::size_t>(per_split, 1, x.cols());

  ForestModel f;
  f.num_features = x.cols();
  const TreeConfig tree_cfg{cfg.max_depth, cfg.min_leaf};
  for (std::size_t t = 0; t < cfg.n_trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(seed, t);
    Rng rng(tree_seed);
    std::vector<std::size_t> rows(x.rows());
    if (cfg.bootstrap) {
      for (auto& r : rows) r = rng.below(x.rows());
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    detail::TreeBuilder builder(x, y, tree_cfg, per_split, &rng);
    f.trees.push_back(builder.build(std::move(rows)));
    f.tree_seeds.push_back(tree_seed);
  }
  return f;
}

inline double predict(const ForestModel& f, std::span<const double> features) {
  if (features.size() != f.num_features) {
    throw InputError("forest expects " + std::to_string(f.num_features) +
                     " features, got " + std::to_string(features.size()));
  }
  double sum = 0.0;
  for (const TreeModel& t : f.trees) sum += predict(t, features);
  return sum / static_cast<double>(f.trees.size());
}

/// Feature matrix for the given pairs, held-out featurization for pairs that
/// are edges of `g`.
inline DenseMatrix pair_feature_matrix(const Graph& g, std::span<const Edge> pairs) {
  DenseMatrix x(pairs.size(), kEdgeFeatureCount);
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const EdgeFeatureVector f = edge_features_held_out(g, pairs[r].u, pairs[r].v);
    std::copy(f.begin(), f.end(), x.row(r).begin());
  }
  return x;
}

}  // namespace clnk
