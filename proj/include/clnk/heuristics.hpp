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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clnk/error.hpp"
#include "clnk/graph.hpp"

namespace clnk {

enum class HeuristicMethod { CommonNeighbors, Jaccard, AdamicAdar, PreferentialAttachment };

inline constexpr std::array<HeuristicMethod, 4> kAllHeuristics = {
    HeuristicMethod::CommonNeighbors, HeuristicMethod::Jaccard,
    HeuristicMethod::AdamicAdar, HeuristicMethod::PreferentialAttachment};

inline std::string_view heuristic_name(HeuristicMethod m) noexcept {
  switch (m) {
    case HeuristicMethod::CommonNeighbors: return "common-neighbors";
    case HeuristicMethod::Jaccard: return "jaccard";
    case HeuristicMethod::AdamicAdar: return "adamic-adar";
    case HeuristicMethod::PreferentialAttachment: return "preferential-attachment";
  }
  return "?";
}

inline HeuristicMethod parse_heuristic(std::string_view name) {
  for (HeuristicMethod m : kAllHeuristics) {
    if (heuristic_name(m) == name) return m;
  }
  throw InputError("unknown heuristic '" + std::string(name) + "'");
}

namespace detail {

inline void check_pair(const Graph& g, NodeId i, NodeId j) {
  if (i >= g.num_nodes() || j >= g.num_nodes()) {
    throw InputError("pair " + to_string(Edge{i, j}) + " out of range for n=" +
                     std::to_string(g.num_nodes()));
  }
  if (i == j) throw InputError("pair " + to_string(Edge{i, j}) + " is a self-pair");
}

/// Walks the intersection of two sorted neighbor lists in ascending order.
template <typename Visit>
void for_each_common(std::span<const NodeId> a, std::span<const NodeId> b,
                     Visit&& visit) {
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] < b[y]) {
      ++x;
    } else if (b[y] < a[x]) {
      ++y;
    } else {
      visit(a[x]);
      ++x;
      ++y;
    }
  }
}

}  // namespace detail

inline double heuristic_score(const Graph& g, NodeId i, NodeId j,
                              HeuristicMethod m) {
  detail::check_pair(g, i, j);
  switch (m) {
    case HeuristicMethod::CommonNeighbors: {
      std::size_t c = 0;
      detail::for_each_common(g.neighbors(i), g.neighbors(j), [&](NodeId) { ++c; });
      return static_cast<double>(c);
    }
    case HeuristicMethod::Jaccard: {
      std::size_t c = 0;
      detail::for_each_common(g.neighbors(i), g.neighbors(j), [&](NodeId) { ++c; });
      const std::size_t uni = g.degree(i) + g.degree(j) - c;
      return uni == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(uni);
    }
    case HeuristicMethod::AdamicAdar: {
      // deg(z) = 1 would divide by ln 1 = 0; such z contribute nothing.
      double s = 0.0;
      detail::for_each_common(g.neighbors(i), g.neighbors(j), [&](NodeId z) {
        const std::size_t d = g.degree(z);
        if (d > 1) s += 1.0 / std::log(static_cast<double>(d));
      });
      return s;
    }
    case HeuristicMethod::PreferentialAttachment:
      return static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j));
  }
  throw InternalError("unhandled heuristic");
}

inline std::vector<double> score_pairs(const Graph& g, std::span<const Edge> pairs,
                                       HeuristicMethod m) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const Edge& e : pairs) out.push_back(heuristic_score(g, e.u, e.v, m));
  return out;
}

/// Min-max scales scores into [0, 1]. A constant score list maps to 0.5.
inline std::vector<double> min_max_scale(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  if (out.empty()) return out;
  double lo = out.front(), hi = out.front();
  for (double s : out) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  for (double& s : out) s = hi > lo ? (s - lo) / (hi - lo) : 0.5;
  return out;
}

}  // namespace clnk
