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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clnk/dense_matrix.hpp"
#include "clnk/error.hpp"
#include "clnk/graph.hpp"
#include "clnk/rng.hpp"
#include "clnk/splitter.hpp"

namespace clnk {

inline double sigmoid(double x) noexcept {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline constexpr double kProbClip = 1e-12;

inline double clip_probability(double p) noexcept {
  return std::min(std::max(p, kProbClip), 1.0 - kProbClip);
}

struct MfConfig {
  std::size_t k = 16;
  double lr = 0.05;
  std::size_t epochs = 200;
  double l2 = 1e-4;
  double neg_ratio = 1.0;
};

/// Logistic matrix factorization: P(i~j) = σ(uᵢ·uⱼ + bᵢ + bⱼ).
struct MfModel {
  DenseMatrix embeddings;
  std::vector<double> bias;
  std::uint64_t seed = 0;
  std::vector<double> loss_trace;

  std::size_t num_nodes() const noexcept { return embeddings.rows(); }
  std::size_t dim() const noexcept { return embeddings.cols(); }
  double final_loss() const noexcept {
    return loss_trace.empty() ? 0.0 : loss_trace.back();
  }
};

inline double score_mf(const MfModel& m, NodeId i, NodeId j) {
  if (i >= m.num_nodes() || j >= m.num_nodes()) {
    throw InputError("pair " + to_string(Edge{i, j}) + " out of range for n=" +
                     std::to_string(m.num_nodes()));
  }
  // Bias sum is formed first so that (i,j) and (j,i) round identically.
  return sigmoid(dot(m.embeddings.row(i), m.embeddings.row(j)) +
                 (m.bias[i] + m.bias[j]));
}

/// Per-pair objective: BCE on the pair plus (l2/2)(|uᵢ|² + |uⱼ|²).
inline double mf_pair_loss(std::span<const double> ui, std::span<const double> uj,
                           double bi, double bj, int label, double l2) {
  const double p = clip_probability(sigmoid(dot(ui, uj) + (bi + bj)));
  const double bce = label == 1 ? -std::log(p) : -std::log(1.0 - p);
  return bce + 0.5 * l2 * (dot(ui, ui) + dot(uj, uj));
}

struct MfPairGradient {
  std::vector<double> du_i, du_j;
  double db_i = 0.0, db_j = 0.0;
};

inline MfPairGradient mf_pair_gradient(std::span<const double> ui,
                                       std::span<const double> uj, double bi,
                                       double bj, int label, double l2) {
  const double g = sigmoid(dot(ui, uj) + (bi + bj)) - (label == 1 ? 1.0 : 0.0);
  MfPairGradient out;
  out.du_i.resize(ui.size());
  out.du_j.resize(uj.size());
  for (std::size_t c = 0; c < ui.size(); ++c) {
    out.du_i[c] = g * uj[c] + l2 * ui[c];
    out.du_j[c] = g * ui[c] + l2 * uj[c];
  }
  out.db_i = g;
  out.db_j = g;
  return out;
}

/// Sequential SGD over training positives and negatives that are resampled
/// every epoch. The loss trace holds each epoch's mean BCE, measured on the
/// fly before each update.
inline MfModel train_mf(const EdgeSplit& split, const Graph& g_train,
                        const MfConfig& cfg, std::uint64_t seed) {
  if (cfg.k < 1) throw InputError("matrix factorization needs k >= 1");
  if (!(cfg.lr >= 0)) throw InputError("matrix factorization needs lr >= 0");
  if (cfg.epochs < 1) throw InputError("matrix factorization needs epochs >= 1");
  if (split.train_pos.empty()) throw InputError("no training positives");

  const std::size_t n = g_train.num_nodes();
  MfModel m;
  m.seed = seed;
  m.embeddings = DenseMatrix(n, cfg.k);
  m.bias.assign(n, 0.0);
  {
    Rng init(derive_seed(seed, fnv1a64("mf/init")));
    const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.k));
    for (double& v : m.embeddings.values()) v = init.uniform(-bound, bound);
  }

  const PairSet exclude = training_exclusions(split);
  const std::size_t neg_count = negative_count(cfg.neg_ratio, split.train_pos.size());
  Rng order_rng(derive_seed(seed, fnv1a64("mf/order")));
  const std::uint64_t neg_stream = derive_seed(seed, fnv1a64("mf/negatives"));

  struct Example {
    Edge pair;
    int label;
  };
  std::vector<Example> examples;
  std::vector<double> ui_old(cfg.k);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    examples.clear();
    for (const Edge& e : split.train_pos) examples.push_back({e, 1});
    for (const Edge& e : sample_negatives(g_train, neg_count,
                                          derive_seed(neg_stream, epoch), exclude)) {
      examples.push_back({e, 0});
    }
    shuffle(std::span<Example>(examples), order_rng);

    double loss_sum = 0.0;
    for (const Example& ex : examples) {
      const NodeId i = ex.pair.u, j = ex.pair.v;
      auto ui = m.embeddings.row(i);
      auto uj = m.embeddings.row(j);
      const double p = sigmoid(dot(ui, uj) + (m.bias[i] + m.bias[j]));
      const double pc = clip_probability(p);
      loss_sum += ex.label == 1 ? -std::log(pc) : -std::log(1.0 - pc);
      const double g = p - (ex.label == 1 ? 1.0 : 0.0);
      std::copy(ui.begin(), ui.end(), ui_old.begin());
      for (std::size_t c = 0; c < cfg.k; ++c) {
        ui[c] -= cfg.lr * (g * uj[c] + cfg.l2 * ui[c]);
        uj[c] -= cfg.lr * (g * ui_old[c] + cfg.l2 * uj[c]);
      }
      m.bias[i] -= cfg.lr * g;
      m.bias[j] -= cfg.lr * g;
    }
    m.loss_trace.push_back(loss_sum / static_cast<double>(examples.size()));
  }
  return m;
}

}  // namespace clnk
