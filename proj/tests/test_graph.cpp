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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "clnk/graph.hpp"
#include "oracles.hpp"

namespace clnk {
namespace {

TEST(BuildGraph, DeduplicatesAndSymmetrizes) {
  const Graph g = build_graph({{0, 1}, {1, 0}, {0, 1}}, 2);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 1u);
  EXPECT_TRUE(g.has_edge(1, 0));
}

TEST(BuildGraph, EmptyEdgeList) {
  const Graph g = build_graph(std::vector<Edge>{}, 3);
  EXPECT_EQ(g.num_edges(), 0u);
  for (NodeId i = 0; i < 3; ++i) EXPECT_EQ(g.degree(i), 0u);
  EXPECT_EQ(g.num_non_edges(), 3u);
}

TEST(BuildGraph, DropsSelfLoops) {
  const Graph g = build_graph({{0, 0}, {0, 1}}, 2);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_FALSE(g.has_edge(0, 0));
}

TEST(BuildGraph, RejectsBadInput) {
  EXPECT_THROW(build_graph(std::vector<Edge>{}, 0), InputError);
  try {
    build_graph({{0, 7}}, 3);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,7)"), std::string::npos) << e.what();
  }
}

TEST(BuildGraph, NeighborListsSortedAndConsistent) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = oracle::random_graph(30, 0.2, seed);
    std::size_t degree_sum = 0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      auto nb = g.neighbors(i);
      EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
      for (NodeId j : nb) EXPECT_TRUE(g.has_edge(j, i));
      degree_sum += g.degree(i);
    }
    EXPECT_EQ(degree_sum, 2 * g.num_edges());
  }
}

TEST(Normalize, SingleEdge) {
  const NormAdj a = normalize_adjacency(build_graph({{0, 1}}, 2));
  for (NodeId i = 0; i < 2; ++i)
    for (NodeId j = 0; j < 2; ++j) EXPECT_EQ(a.at(i, j), 0.5);
}

TEST(Normalize, IsolatedSingleNode) {
  const NormAdj a = normalize_adjacency(build_graph(std::vector<Edge>{}, 1));
  EXPECT_EQ(a.at(0, 0), 1.0);
}

TEST(Normalize, PathEntry) {
  const Graph g = build_graph({{0, 1}, {1, 2}}, 3);
  const NormAdj a = normalize_adjacency(g);
  const auto dense = oracle::normalized_adjacency(g);
  EXPECT_NEAR(a.at(0, 1), 1.0 / std::sqrt(6.0), 1e-12);
  EXPECT_NEAR(a.at(0, 1), dense[0][1], 1e-12);
}

TEST(Normalize, MatchesDenseOracleAndIsSymmetric) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = oracle::random_graph(5 + seed % 40, 0.15, seed);
    const NormAdj a = normalize_adjacency(g);
    const auto dense = oracle::normalized_adjacency(g);
    const DenseMatrix m = a.to_dense();
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      for (NodeId j = 0; j < g.num_nodes(); ++j) {
        EXPECT_EQ(m(i, j), m(j, i));
        EXPECT_NEAR(m(i, j), dense[i][j], 1e-14);
      }
    }
  }
}

TEST(Spmm, IdentityAndZeroOperands) {
  const Graph g = oracle::random_graph(10, 0.3, 4);
  const NormAdj a = normalize_adjacency(g);
  EXPECT_EQ(spmm(a, DenseMatrix::identity(10)), a.to_dense());
  const DenseMatrix z = spmm(a, DenseMatrix(10, 3));
  for (double v : z.values()) EXPECT_EQ(v, 0.0);
}

TEST(Spmm, MatchesDenseProduct) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 2 + seed % 49;
    const Graph g = oracle::random_graph(n, 0.2, seed);
    const DenseMatrix x = oracle::random_matrix(n, 4, seed + 1000);
    const DenseMatrix got = spmm(normalize_adjacency(g), x);
    const auto want = oracle::mul(oracle::normalized_adjacency(g), oracle::from(x));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(got(i, c), want[i][c], 1e-12);
  }
}

TEST(Spmm, DimensionMismatch) {
  const NormAdj a = normalize_adjacency(build_graph({{0, 1}}, 2));
  EXPECT_THROW(spmm(a, DenseMatrix(3, 1)), InputError);
}

TEST(DenseMatrix, ProductsAgreeWithOracle) {
  const DenseMatrix a = oracle::random_matrix(5, 3, 1), b = oracle::random_matrix(3, 4, 2);
  const auto want = oracle::mul(oracle::from(a), oracle::from(b));
  const DenseMatrix got = matmul(a, b);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(got(i, j), want[i][j], 1e-14);

  const DenseMatrix c = oracle::random_matrix(5, 4, 3);
  const DenseMatrix tn = matmul_tn(a, c);  // 3x4
  const DenseMatrix nt = matmul_nt(c, b);  // 5x3
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < 5; ++r) s += a(r, i) * c(r, j);
      EXPECT_NEAR(tn(i, j), s, 1e-14);
    }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < 4; ++r) s += c(i, r) * b(j, r);
      EXPECT_NEAR(nt(i, j), s, 1e-14);
    }
}

}  // namespace
}  // namespace clnk
