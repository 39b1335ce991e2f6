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

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "clnk/error.hpp"
#include "clnk/graph.hpp"
#include "clnk/rng.hpp"

namespace clnk {

/// Set of unordered node pairs.
class PairSet {
 public:
  PairSet() = default;
  template <typename Range>
  explicit PairSet(const Range& edges) {
    insert_all(edges);
  }

  bool insert(Edge e) { return keys_.insert(key(e)).second; }
  template <typename Range>
  void insert_all(const Range& edges) {
    for (const Edge& e : edges) insert(e);
  }
  bool contains(Edge e) const { return keys_.contains(key(e)); }
  std::size_t size() const noexcept { return keys_.size(); }

 private:
  static std::uint64_t key(Edge e) noexcept {
    const Edge c = e.canonical();
    return (static_cast<std::uint64_t>(c.u) << 32) | static_cast<std::uint64_t>(c.v);
  }
  std::unordered_set<std::uint64_t> keys_;
};

struct SplitRatios {
  double train = 0.85;
  double val = 0.05;
  double test = 0.10;
};

/// Negatives per positive, per partition.
struct NegativeRatios {
  double train = 1.0;
  double eval = 1.0;
};

/// Train/validation/test partition of a graph's edges plus sampled
/// non-edges. Negatives in different partitions never overlap.
struct EdgeSplit {
  std::size_t num_nodes = 0;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::vector<Edge> train_pos, val_pos, test_pos;
  std::vector<Edge> train_neg, val_neg, test_neg;

  friend bool operator==(const EdgeSplit& a, const EdgeSplit& b) {
    return a.num_nodes == b.num_nodes && a.seed == b.seed &&
           a.ratios.train == b.ratios.train && a.ratios.val == b.ratios.val &&
           a.ratios.test == b.ratios.test && a.train_pos == b.train_pos &&
           a.val_pos == b.val_pos && a.test_pos == b.test_pos &&
           a.train_neg == b.train_neg && a.val_neg == b.val_neg &&
           a.test_neg == b.test_neg;
  }
};

namespace detail {

inline std::size_t floor_share(double ratio, std::size_t total) {
  // The slack absorbs representation error such as 0.1 * 10 landing just
  // under 1.
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(total) + 1e-9));
}

inline void validate_ratios(const SplitRatios& r) {
  if (r.train < 0 || r.val < 0 || r.test < 0) {
    throw InputError("split ratios must be non-negative");
  }
  const double sum = r.train + r.val + r.test;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InputError("split ratios sum to " + std::to_string(sum) +
                     ", expected 1");
  }
}

}  // namespace detail

/// Shuffles the canonical edge list under `seed` and cuts it into
/// train/val/test. Validation and test sizes are floor allocations; the
/// remainder goes to train.
inline EdgeSplit split_edges(const Graph& g, SplitRatios ratios,
                             std::uint64_t seed) {
  detail::validate_ratios(ratios);
  if (g.num_edges() == 0) throw InputError("cannot split a graph with no edges");

  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  Rng rng(derive_seed(seed, 0));
  shuffle(std::span<Edge>(edges), rng);

  const std::size_t m = edges.size();
  const std::size_t n_val = detail::floor_share(ratios.val, m);
  const std::size_t n_test = detail::floor_share(ratios.test, m);
  const std::size_t n_train = m - n_val - n_test;

  EdgeSplit s;
  s.num_nodes = g.num_nodes();
  s.seed = seed;
  s.ratios = ratios;
  s.train_pos.assign(edges.begin(), edges.begin() + n_train);
  s.val_pos.assign(edges.begin() + n_train, edges.begin() + n_train + n_val);
  s.test_pos.assign(edges.begin() + n_train + n_val, edges.end());
  return s;
}

/// Samples `count` distinct non-adjacent unordered pairs of `g` that are not
/// in `exclude`, uniformly without replacement. Output order is the order
/// drawn; each pair is canonical.
inline std::vector<Edge> sample_negatives(const Graph& g, std::size_t count,
                                          std::uint64_t seed,
                                          const PairSet& exclude = {}) {
  const std::size_t n = g.num_nodes();
  std::vector<Edge> out;
  if (count == 0) return out;

  // Dense cases enumerate the candidates; otherwise at least half of all
  // non-edges are available and rejection sampling terminates quickly.
  const std::uint64_t non_edges = g.num_non_edges();
  const bool enumerate = non_edges < 4 * static_cast<std::uint64_t>(count) ||
                         exclude.size() * 2 >= non_edges;
  if (enumerate) {
    std::vector<Edge> candidates;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = i + 1; j < n; ++j) {
        if (!g.has_edge(i, j) && !exclude.contains({i, j})) {
          candidates.push_back({i, j});
        }
      }
    }
    if (candidates.size() < count) {
      throw InputError("cannot sample " + std::to_string(count) +
                       " negatives: only " + std::to_string(candidates.size()) +
                       " non-edges available");
    }
    Rng rng(seed);
    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.below(candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(count);
    return candidates;
  }

  Rng rng(seed);
  PairSet chosen;
  out.reserve(count);
  while (out.size() < count) {
    const NodeId i = rng.below(n);
    const NodeId j = rng.below(n);
    if (i == j) continue;
    const Edge e = Edge{i, j}.canonical();
    if (g.has_edge(e.u, e.v) || exclude.contains(e)) continue;
    if (!chosen.insert(e)) continue;
    out.push_back(e);
  }
  return out;
}

inline std::size_t negative_count(double ratio, std::size_t positives) {
  if (ratio < 0) throw InputError("negative sampling ratio must be >= 0");
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(positives)));
}

/// Positive split plus negatives for every partition. Test negatives are
/// drawn first, then validation, then train, each excluding the earlier ones.
inline EdgeSplit make_split(const Graph& g, SplitRatios ratios,
                            NegativeRatios neg, std::uint64_t seed) {
  EdgeSplit s = split_edges(g, ratios, seed);
  PairSet taken;
  s.test_neg = sample_negatives(g, negative_count(neg.eval, s.test_pos.size()),
                                derive_seed(seed, 1), taken);
  taken.insert_all(s.test_neg);
  s.val_neg = sample_negatives(g, negative_count(neg.eval, s.val_pos.size()),
                               derive_seed(seed, 2), taken);
  taken.insert_all(s.val_neg);
  s.train_neg = sample_negatives(g, negative_count(neg.train, s.train_pos.size()),
                                 derive_seed(seed, 3), taken);
  return s;
}

/// The message-passing graph: training positives only.
inline Graph train_graph(const EdgeSplit& s) {
  return build_graph(s.train_pos, s.num_nodes);
}

/// Pairs a trainer must never use as sampled negatives: every positive and
/// every held-out negative.
inline PairSet training_exclusions(const EdgeSplit& s) {
  PairSet p;
  p.insert_all(s.train_pos);
  p.insert_all(s.val_pos);
  p.insert_all(s.test_pos);
  p.insert_all(s.val_neg);
  p.insert_all(s.test_neg);
  return p;
}

}  // namespace clnk
