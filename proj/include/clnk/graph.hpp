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
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clnk/dense_matrix.hpp"
#include "clnk/error.hpp"

namespace clnk {

using NodeId = std::size_t;

/// Unordered node pair. Canonical form has u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  Edge canonical() const noexcept { return u < v ? *this : Edge{v, u}; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::string to_string(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

/// Immutable, undirected, unweighted graph in CSR form.
///
/// Neighbor lists are sorted ascending and never contain the node itself.
class Graph {
 public:
  Graph() = default;

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId i) const noexcept {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(NodeId i) const noexcept {
    return offsets_[i + 1] - offsets_[i];
  }

  /// Canonical edges (u < v), sorted lexicographically.
  std::span<const Edge> edges() const noexcept { return edges_; }

  bool has_edge(NodeId i, NodeId j) const noexcept {
    if (i >= n_ || j >= n_ || i == j) return false;
    if (degree(i) > degree(j)) std::swap(i, j);
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
  }

  /// Number of unordered pairs that are not edges.
  std::uint64_t num_non_edges() const noexcept {
    const std::uint64_t n = n_;
    return n * (n - 1) / 2 - edges_.size();
  }

  friend bool operator==(const Graph&, const Graph&) = default;

  friend Graph build_graph(std::span<const Edge> edge_list, std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<Edge> edges_;
};

/// Builds a Graph from an arbitrary edge list. Duplicates and both
/// orientations collapse to one edge; self-loops are dropped.
inline Graph build_graph(std::span<const Edge> edge_list, std::size_t n) {
  if (n == 0) throw InputError("graph must have at least one node");
  std::vector<Edge> canon;
  canon.reserve(edge_list.size());
  for (const Edge& e : edge_list) {
    if (e.u >= n || e.v >= n) {
      throw InputError("edge " + to_string(e) + " out of range for n=" +
                       std::to_string(n));
    }
    if (e.u == e.v) continue;
    canon.push_back(e.canonical());
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.n_ = n;
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : canon) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.resize(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // canon is sorted by (u, v): the first pass appends each node's smaller
  // neighbors in ascending order, the second its larger ones.
  for (const Edge& e : canon) g.neighbors_[cursor[e.v]++] = e.u;
  for (const Edge& e : canon) g.neighbors_[cursor[e.u]++] = e.v;
  g.edges_ = std::move(canon);
  return g;
}

inline Graph build_graph(const std::vector<Edge>& edge_list, std::size_t n) {
  return build_graph(std::span<const Edge>(edge_list), n);
}

/// Symmetric normalized adjacency D̃^(-1/2) (A + I) D̃^(-1/2) in CSR form.
struct NormAdj {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  std::vector<NodeId> cols;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return values.size(); }

  /// Entry (i, j), zero when not stored.
  double at(NodeId i, NodeId j) const noexcept {
    auto first = cols.begin() + static_cast<std::ptrdiff_t>(offsets[i]);
    auto last = cols.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values[static_cast<std::size_t>(it - cols.begin())];
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
        d(i, cols[k]) = values[k];
      }
    }
    return d;
  }
};

inline NormAdj normalize_adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  NormAdj a;
  a.n = n;
  a.offsets.assign(n + 1, 0);
  a.cols.reserve(2 * g.num_edges() + n);
  a.values.reserve(2 * g.num_edges() + n);
  // The product of two integer degrees is exact, so (i,j) and (j,i) see the
  // same operands and come out bit-identical.
  auto entry = [&](NodeId i, NodeId j) {
    const double di = static_cast<double>(g.degree(i) + 1);
    const double dj = static_cast<double>(g.degree(j) + 1);
    return 1.0 / std::sqrt(di * dj);
  };
  for (NodeId i = 0; i < n; ++i) {
    bool diag_done = false;
    for (NodeId j : g.neighbors(i)) {
      if (!diag_done && j > i) {
        a.cols.push_back(i);
        a.values.push_back(entry(i, i));
        diag_done = true;
      }
      a.cols.push_back(j);
      a.values.push_back(entry(i, j));
    }
    if (!diag_done) {
      a.cols.push_back(i);
      a.values.push_back(entry(i, i));
    }
    a.offsets[i + 1] = a.cols.size();
  }
  return a;
}

/// Sparse-dense product Â·X. Each output row accumulates in ascending column
/// order of Â.
inline DenseMatrix spmm(const NormAdj& a, const DenseMatrix& x) {
  if (a.n != x.rows()) {
    throw InputError("spmm: adjacency has " + std::to_string(a.n) +
                     " rows but operand has " + std::to_string(x.rows()));
  }
  DenseMatrix out(a.n, x.cols());
  for (std::size_t i = 0; i < a.n; ++i) {
    auto dst = out.row(i);
    for (std::size_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k) {
      const double w = a.values[k];
      auto src = x.row(a.cols[k]);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

}  // namespace clnk
