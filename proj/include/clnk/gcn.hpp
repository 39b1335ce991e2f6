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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clnk/dense_matrix.hpp"
#include "clnk/error.hpp"
#include "clnk/graph.hpp"
#include "clnk/matfact.hpp"
#include "clnk/metrics.hpp"
#include "clnk/rng.hpp"
#include "clnk/splitter.hpp"

namespace clnk {

enum class DecoderKind { DotProduct, Mlp };
enum class WeightMode { InverseFrequency, Uniform };

inline std::string_view decoder_name(DecoderKind d) noexcept {
  return d == DecoderKind::DotProduct ? "dot" : "mlp";
}
inline DecoderKind parse_decoder(std::string_view s) {
  if (s == "dot") return DecoderKind::DotProduct;
  if (s == "mlp") return DecoderKind::Mlp;
  throw InputError("unknown decoder '" + std::string(s) + "' (expected dot or mlp)");
}
inline std::string_view weight_mode_name(WeightMode w) noexcept {
  return w == WeightMode::InverseFrequency ? "inverse-frequency" : "uniform";
}
inline WeightMode parse_weight_mode(std::string_view s) {
  if (s == "inverse-frequency") return WeightMode::InverseFrequency;
  if (s == "uniform") return WeightMode::Uniform;
  throw InputError("unknown weight mode '" + std::string(s) +
                   "' (expected inverse-frequency or uniform)");
}

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  std::size_t epochs = 200;
  double learning_rate = 0.01;
  std::size_t hidden = 64;
  std::size_t embed = 32;
  DecoderKind decoder = DecoderKind::DotProduct;
  WeightMode weight_mode = WeightMode::InverseFrequency;
  AdamConfig adam;
  std::uint64_t seed = 0;
  /// Return the parameters of the epoch with the best validation AUC
  /// instead of the last epoch. Ignored when the split has no usable
  /// validation pairs.
  bool select_on_validation = true;
};

namespace detail {
inline std::uint64_t next_param_version() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}
}  // namespace detail

/// Two-layer GCN encoder weights plus the edge decoder.
///
/// `version` changes whenever the weights change so a forward cache can be
/// matched to the parameters it was computed from.
struct GcnParams {
  DenseMatrix w0;  // d_in x hidden
  DenseMatrix w1;  // hidden x embed
  DecoderKind decoder = DecoderKind::DotProduct;
  DenseMatrix w2;  // 3*embed x 1, Mlp only
  double b2 = 0.0;
  std::uint64_t version = detail::next_param_version();

  std::size_t input_dim() const noexcept { return w0.rows(); }
  std::size_t hidden_dim() const noexcept { return w0.cols(); }
  std::size_t embed_dim() const noexcept { return w1.cols(); }

  void touch() { version = detail::next_param_version(); }

  bool same_weights(const GcnParams& o) const {
    return w0 == o.w0 && w1 == o.w1 && decoder == o.decoder && w2 == o.w2 && b2 == o.b2;
  }
};

/// Gradient (or Adam moment) buffers shaped like GcnParams.
struct GcnGradients {
  DenseMatrix w0, w1, w2;
  double b2 = 0.0;

  static GcnGradients zeros_like(const GcnParams& p) {
    return {DenseMatrix(p.w0.rows(), p.w0.cols()), DenseMatrix(p.w1.rows(), p.w1.cols()),
            DenseMatrix(p.w2.rows(), p.w2.cols()), 0.0};
  }
};

struct AdamState {
  GcnGradients m, v;
  std::uint64_t t = 0;

  static AdamState for_params(const GcnParams& p) {
    return {GcnGradients::zeros_like(p), GcnGradients::zeros_like(p), 0};
  }
};

struct ClassWeights {
  double pos = 1.0;
  double neg = 1.0;
};

/// Glorot-uniform initialization, bound sqrt(6 / (fan_in + fan_out)).
inline GcnParams init_gcn_params(std::size_t d_in, std::size_t hidden, std::size_t embed,
                                 DecoderKind decoder, std::uint64_t seed) {
  if (d_in == 0 || hidden == 0 || embed == 0) {
    throw InputError("GCN dimensions must be positive");
  }
  Rng rng(derive_seed(seed, fnv1a64("gcn/init")));
  auto glorot = [&](std::size_t fan_in, std::size_t fan_out) {
    DenseMatrix m(fan_in, fan_out);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.values()) v = rng.uniform(-bound, bound);
    return m;
  };
  GcnParams p;
  p.w0 = glorot(d_in, hidden);
  p.w1 = glorot(hidden, embed);
  p.decoder = decoder;
  if (decoder == DecoderKind::Mlp) p.w2 = glorot(3 * embed, 1);
  p.b2 = 0.0;
  return p;
}

/// Row-wise [X | S].
inline DenseMatrix concat_side_info(const DenseMatrix& x, const DenseMatrix& s) {
  if (x.rows() != s.rows()) {
    throw InputError("side information has " + std::to_string(s.rows()) +
                     " rows, features have " + std::to_string(x.rows()));
  }
  DenseMatrix out(x.rows(), x.cols() + s.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(x.row(r).begin(), x.row(r).end(), dst.begin());
    std::copy(s.row(r).begin(), s.row(r).end(),
              dst.begin() + static_cast<std::ptrdiff_t>(x.cols()));
  }
  return out;
}

/// Degree as a single feature column.
inline DenseMatrix degree_features(const Graph& g) {
  DenseMatrix x(g.num_nodes(), 1);
  for (NodeId i = 0; i < g.num_nodes(); ++i) x(i, 0) = static_cast<double>(g.degree(i));
  return x;
}

/// Intermediates kept by the forward pass. Holds pointers to the adjacency
/// and feature matrix, which must outlive it.
struct GcnCache {
  const NormAdj* adj = nullptr;
  const DenseMatrix* x = nullptr;
  DenseMatrix z0;  // Â X W0
  DenseMatrix h1;  // relu(z0)
  DenseMatrix p1;  // Â h1
  DenseMatrix h;   // p1 W1, the embeddings
  std::uint64_t version = 0;
};

/// H1 = relu(Â X W0), H = Â H1 W1.
inline GcnCache gcn_forward(const GcnParams& params, const NormAdj& a, const DenseMatrix& x) {
  if (x.cols() != params.input_dim()) {
    throw InputError("feature matrix has " + std::to_string(x.cols()) +
                     " columns, model expects " + std::to_string(params.input_dim()));
  }
  if (x.rows() != a.n) {
    throw InputError("feature matrix has " + std::to_string(x.rows()) +
                     " rows, graph has " + std::to_string(a.n) + " nodes");
  }
  GcnCache c;
  c.adj = &a;
  c.x = &x;
  c.version = params.version;
  c.z0 = spmm(a, matmul(x, params.w0));
  c.h1 = c.z0;
  for (double& v : c.h1.values()) v = v > 0.0 ? v : 0.0;
  c.p1 = spmm(a, c.h1);
  c.h = matmul(c.p1, params.w1);
  return c;
}

namespace detail {

inline void check_pairs(std::size_t n, std::span<const Edge> pairs) {
  for (const Edge& e : pairs) {
    if (e.u >= n || e.v >= n) {
      throw InputError("pair " + to_string(e) + " out of range for n=" + std::to_string(n));
    }
  }
}

inline double sign(double v) noexcept { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

/// Pre-sigmoid decoder output. The Mlp reads the symmetric pair features
/// [a∘b | a+b | |a−b|], so both decoders are symmetric in (i, j).
inline double decoder_logit(const GcnParams& params, std::span<const double> a,
                            std::span<const double> b) {
  if (params.decoder == DecoderKind::DotProduct) return dot(a, b);
  const std::size_t p = a.size();
  auto w = params.w2.values();
  double s = 0.0;
  for (std::size_t c = 0; c < p; ++c) s += w[c] * (a[c] * b[c]);
  for (std::size_t c = 0; c < p; ++c) s += w[p + c] * (a[c] + b[c]);
  for (std::size_t c = 0; c < p; ++c) s += w[2 * p + c] * std::abs(a[c] - b[c]);
  return s + params.b2;
}

}  // namespace detail

inline std::vector<double> decode(const DenseMatrix& h, std::span<const Edge> pairs,
                                  const GcnParams& params) {
  detail::check_pairs(h.rows(), pairs);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const Edge& e : pairs) {
    out.push_back(sigmoid(detail::decoder_logit(params, h.row(e.u), h.row(e.v))));
  }
  return out;
}

/// w_c = N / (2 N_c): each class carries half of the total weight.
inline ClassWeights class_weights(std::span<const int> labels) {
  if (labels.empty()) throw InputError("class weights need at least one label");
  const auto pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const auto n = static_cast<double>(labels.size());
  const double neg = n - pos;
  if (pos == 0 || neg == 0) {
    throw InputError("class weights are undefined when only one class is present");
  }
  return {n / (2.0 * pos), n / (2.0 * neg)};
}

/// −(1/N) Σ [w₊ y log ŷ + w₋ (1−y) log(1−ŷ)] with ŷ clipped to
/// [1e-12, 1 − 1e-12].
inline double weighted_bce(std::span<const double> probs, std::span<const int> labels,
                           ClassWeights w) {
  if (probs.size() != labels.size()) {
    throw InputError("weighted_bce: " + std::to_string(probs.size()) + " predictions but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (probs.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = clip_probability(probs[k]);
    sum += labels[k] == 1 ? w.pos * std::log(p) : w.neg * std::log(1.0 - p);
  }
  return -sum / static_cast<double>(probs.size());
}

/// Gradients of weighted_bce ∘ decode ∘ gcn_forward. Per-sample logit
/// gradient is w_k (ŷ_k − y_k) / N, the exact derivative wherever clipping
/// is inactive. ReLU'(0) is taken as 0.
inline GcnGradients gcn_backward(const GcnParams& params, const GcnCache& cache,
                                 std::span<const Edge> pairs, std::span<const int> labels,
                                 ClassWeights w) {
  if (cache.version != params.version || cache.adj == nullptr || cache.x == nullptr) {
    throw InternalError("gcn_backward: forward cache does not match current parameters");
  }
  if (pairs.size() != labels.size()) {
    throw InputError("gcn_backward: " + std::to_string(pairs.size()) + " pairs but " +
                     std::to_string(labels.size()) + " labels");
  }
  detail::check_pairs(cache.h.rows(), pairs);

  const std::size_t p = params.embed_dim();
  const double inv_n = pairs.empty() ? 0.0 : 1.0 / static_cast<double>(pairs.size());
  GcnGradients g = GcnGradients::zeros_like(params);
  DenseMatrix dh(cache.h.rows(), p);

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const NodeId i = pairs[k].u, j = pairs[k].v;
    auto a = cache.h.row(i);
    auto b = cache.h.row(j);
    const double y = labels[k] == 1 ? 1.0 : 0.0;
    const double wk = labels[k] == 1 ? w.pos : w.neg;
    const double ds = wk * (sigmoid(detail::decoder_logit(params, a, b)) - y) * inv_n;
    auto da = dh.row(i);
    auto db = dh.row(j);
    if (params.decoder == DecoderKind::DotProduct) {
      for (std::size_t c = 0; c < p; ++c) {
        da[c] += ds * b[c];
        db[c] += ds * a[c];
      }
    } else {
      auto w2 = params.w2.values();
      auto gw2 = g.w2.values();
      for (std::size_t c = 0; c < p; ++c) {
        const double sg = detail::sign(a[c] - b[c]);
        gw2[c] += ds * (a[c] * b[c]);
        gw2[p + c] += ds * (a[c] + b[c]);
        gw2[2 * p + c] += ds * std::abs(a[c] - b[c]);
        const double common = w2[p + c];
        da[c] += ds * (w2[c] * b[c] + common + w2[2 * p + c] * sg);
        db[c] += ds * (w2[c] * a[c] + common - w2[2 * p + c] * sg);
      }
      g.b2 += ds;
    }
  }

  // H = P1 W1 with P1 = Â H1.
  g.w1 = matmul_tn(cache.p1, dh);
  // Â is symmetric, so Âᵀ dP1 = Â dP1.
  DenseMatrix dh1 = spmm(*cache.adj, matmul_nt(dh, params.w1));
  auto z0 = cache.z0.values();
  auto d = dh1.values();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!(z0[k] > 0.0)) d[k] = 0.0;
  }
  // Z0 = Â (X W0)  =>  dW0 = Xᵀ Â dZ0.
  g.w0 = matmul_tn(*cache.x, spmm(*cache.adj, dh1));
  return g;
}

/// One Adam update with bias correction on a flat buffer.
inline void adam_update(std::span<double> theta, std::span<const double> grad,
                        std::span<double> m, std::span<double> v, std::uint64_t t, double lr,
                        const AdamConfig& cfg) {
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t k = 0; k < theta.size(); ++k) {
    m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grad[k];
    v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
    const double m_hat = m[k] / c1;
    const double v_hat = v[k] / c2;
    theta[k] -= lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

inline void adam_step(GcnParams& params, const GcnGradients& grads, AdamState& state, double lr,
                      const AdamConfig& cfg = {}) {
  auto same = [](const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols();
  };
  if (!same(params.w0, grads.w0) || !same(params.w1, grads.w1) ||
      !same(params.w2, grads.w2) || !same(params.w0, state.m.w0) ||
      !same(params.w1, state.m.w1) || !same(params.w2, state.m.w2)) {
    throw InternalError("adam_step: gradient or state shape does not match parameters");
  }
  ++state.t;
  adam_update(params.w0.values(), grads.w0.values(), state.m.w0.values(),
              state.v.w0.values(), state.t, lr, cfg);
  adam_update(params.w1.values(), grads.w1.values(), state.m.w1.values(),
              state.v.w1.values(), state.t, lr, cfg);
  if (params.decoder == DecoderKind::Mlp) {
    adam_update(params.w2.values(), grads.w2.values(), state.m.w2.values(),
                state.v.w2.values(), state.t, lr, cfg);
    adam_update(std::span<double>(&params.b2, 1), std::span<const double>(&grads.b2, 1),
                std::span<double>(&state.m.b2, 1), std::span<double>(&state.v.b2, 1), state.t,
                lr, cfg);
  }
  params.touch();
}

struct GcnTrainResult {
  GcnParams params;
  std::vector<double> loss_trace;
  /// Validation AUC per epoch; empty when selection is off.
  std::vector<double> val_auc_trace;
  /// Epoch whose entering parameters were returned.
  std::size_t selected_epoch = 0;
  ClassWeights weights;
};

/// Full-batch training on the training positives and training negatives of
/// `split`, propagating over `g_train`. The loss recorded for an epoch is the
/// loss of the parameters entering that epoch. With validation selection on,
/// the returned parameters are those with the highest validation AUC (first
/// such epoch on ties, the final parameters also being a candidate).
inline GcnTrainResult train_gcn(const Graph& g_train, const DenseMatrix& x, const EdgeSplit& split,
                                const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw InputError("GCN training needs epochs >= 1");
  if (!(cfg.learning_rate >= 0)) throw InputError("GCN learning rate must be >= 0");
  if (x.rows() != g_train.num_nodes()) {
    throw InputError("feature matrix has " + std::to_string(x.rows()) +
                     " rows, graph has " + std::to_string(g_train.num_nodes()) + " nodes");
  }
  std::vector<Edge> pairs(split.train_pos);
  pairs.insert(pairs.end(), split.train_neg.begin(), split.train_neg.end());
  std::vector<int> labels(split.train_pos.size(), 1);
  labels.resize(pairs.size(), 0);
  if (split.train_pos.empty() || split.train_neg.empty()) {
    throw InputError("GCN training needs both positive and negative training pairs");
  }

  GcnTrainResult r;
  r.weights = cfg.weight_mode == WeightMode::InverseFrequency ? class_weights(labels)
                                                              : ClassWeights{1.0, 1.0};
  r.params = init_gcn_params(x.cols(), cfg.hidden, cfg.embed, cfg.decoder, cfg.seed);
  const NormAdj a = normalize_adjacency(g_train);
  AdamState state = AdamState::for_params(r.params);

  std::vector<Edge> val_pairs(split.val_pos);
  val_pairs.insert(val_pairs.end(), split.val_neg.begin(), split.val_neg.end());
  std::vector<int> val_labels(split.val_pos.size(), 1);
  val_labels.resize(val_pairs.size(), 0);
  const bool select = cfg.select_on_validation && !split.val_pos.empty() &&
                      !split.val_neg.empty();
  GcnParams best;
  double best_auc = -1.0;
  auto consider = [&](const DenseMatrix& h, const GcnParams& params, std::size_t epoch) {
    const double v = auc(decode(h, val_pairs, params), val_labels);
    if (epoch < cfg.epochs) r.val_auc_trace.push_back(v);
    if (v > best_auc) {
      best_auc = v;
      best = params;
      r.selected_epoch = epoch;
    }
  };

  r.loss_trace.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const GcnCache cache = gcn_forward(r.params, a, x);
    r.loss_trace.push_back(weighted_bce(decode(cache.h, pairs, r.params), labels, r.weights));
    if (select) consider(cache.h, r.params, epoch);
    const GcnGradients grads = gcn_backward(r.params, cache, pairs, labels, r.weights);
    adam_step(r.params, grads, state, cfg.learning_rate, cfg.adam);
  }
  if (select) {
    consider(gcn_forward(r.params, a, x).h, r.params, cfg.epochs);
    r.params = std::move(best);
  } else {
    r.selected_epoch = cfg.epochs;
  }
  return r;
}

inline std::vector<double> predict_links(const GcnParams& params, const NormAdj& a,
                                         const DenseMatrix& x, std::span<const Edge> pairs) {
  const GcnCache cache = gcn_forward(params, a, x);
  return decode(cache.h, pairs, params);
}

}  // namespace clnk
