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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clnk/error.hpp"
#include "clnk/gcn.hpp"
#include "clnk/graph.hpp"
#include "clnk/heuristics.hpp"
#include "clnk/matfact.hpp"
#include "clnk/metrics.hpp"
#include "clnk/models.hpp"
#include "clnk/rng.hpp"
#include "clnk/splitter.hpp"
#include "clnk/text.hpp"
#include "clnk/trees.hpp"

namespace clnk {

/// The methods compared by the benchmark, in report order.
enum class Method {
  CommonNeighbors,
  Jaccard,
  AdamicAdar,
  PreferentialAttachment,
  MatrixFactorization,
  DecisionTree,
  RandomForest,
  StandardGcn,
  WeightedGcn,
};

inline constexpr std::array<Method, 9> kAllMethods = {
    Method::CommonNeighbors,     Method::Jaccard,      Method::AdamicAdar,
    Method::PreferentialAttachment, Method::MatrixFactorization, Method::DecisionTree,
    Method::RandomForest,        Method::StandardGcn,  Method::WeightedGcn};

struct MethodInfo {
  std::string_view key;
  std::string_view display;
};

inline MethodInfo method_info(Method m) noexcept {
  switch (m) {
    case Method::CommonNeighbors: return {"common-neighbors", "Common Neighbors"};
    case Method::Jaccard: return {"jaccard", "Jaccard's Coefficient"};
    case Method::AdamicAdar: return {"adamic-adar", "Adamic/Adar Index"};
    case Method::PreferentialAttachment:
      return {"preferential-attachment", "Preferential Attachment"};
    case Method::MatrixFactorization: return {"matrix-factorization", "Matrix Factorization"};
    case Method::DecisionTree: return {"decision-tree", "Decision Trees"};
    case Method::RandomForest: return {"random-forest", "Random Forests"};
    case Method::StandardGcn: return {"gcn-standard", "Standard GCN"};
    case Method::WeightedGcn: return {"gcn-weighted", "Weighted GCN + Side Info"};
  }
  return {"?", "?"};
}

inline Method parse_method(std::string_view key) {
  for (Method m : kAllMethods) {
    if (method_info(m).key == key) return m;
  }
  std::string known;
  for (Method m : kAllMethods) known += (known.empty() ? "" : ", ") + std::string(method_info(m).key);
  throw InputError("unknown method '" + std::string(key) + "' (known: " + known + ")");
}

inline std::optional<HeuristicMethod> as_heuristic(Method m) noexcept {
  switch (m) {
    case Method::CommonNeighbors: return HeuristicMethod::CommonNeighbors;
    case Method::Jaccard: return HeuristicMethod::Jaccard;
    case Method::AdamicAdar: return HeuristicMethod::AdamicAdar;
    case Method::PreferentialAttachment: return HeuristicMethod::PreferentialAttachment;
    default: return std::nullopt;
  }
}

inline std::size_t method_index(Method m) noexcept { return static_cast<std::size_t>(m); }

/// The benchmark method a stored model belongs to. GCN models trained with
/// uniform weights and no side information are the standard GCN.
inline Method infer_method(const Model& model) {
  if (const auto* h = std::get_if<HeuristicModel>(&model)) {
    for (Method m : kAllMethods) {
      if (as_heuristic(m) == h->method) return m;
    }
  }
  if (std::holds_alternative<MfModel>(model)) return Method::MatrixFactorization;
  if (std::holds_alternative<TreeModel>(model)) return Method::DecisionTree;
  if (std::holds_alternative<ForestModel>(model)) return Method::RandomForest;
  const auto& g = std::get<GcnModel>(model);
  return g.config.weight_mode == WeightMode::Uniform && !g.features.side_info
             ? Method::StandardGcn
             : Method::WeightedGcn;
}

/// Seed for a method's stochastic components: the method index mixed into
/// the master seed.
inline std::uint64_t method_seed(std::uint64_t master, Method m) noexcept {
  return derive_seed(master, 1000 + method_index(m));
}

/// Everything that determines a benchmark run.
struct BenchmarkConfig {
  std::uint64_t seed = 0;
  SplitRatios ratios;
  NegativeRatios negatives;
  MfConfig mf;
  TreeConfig tree;
  ForestConfig forest;
  /// Shared GCN settings; each GCN method fixes its own weight mode unless
  /// `weight_mode_override` is set.
  TrainConfig gcn;
  std::optional<WeightMode> weight_mode_override;
  double threshold = 0.5;
};

inline WeightMode gcn_weight_mode(Method m, const BenchmarkConfig& cfg) {
  if (cfg.weight_mode_override) return *cfg.weight_mode_override;
  return m == Method::WeightedGcn ? WeightMode::InverseFrequency : WeightMode::Uniform;
}

/// Canonical description of the configuration a method ran with; its hash
/// is stamped into the report.
inline std::string method_config_text(Method m, const BenchmarkConfig& cfg, bool side_info) {
  using text::format_double;
  std::string s = std::string(method_info(m).key) + ";seed=" + std::to_string(cfg.seed) +
                  ";threshold=" + format_double(cfg.threshold);
  switch (m) {
    case Method::MatrixFactorization:
      s += ";k=" + std::to_string(cfg.mf.k) + ";lr=" + format_double(cfg.mf.lr) +
           ";epochs=" + std::to_string(cfg.mf.epochs) + ";l2=" + format_double(cfg.mf.l2) +
           ";neg_ratio=" + format_double(cfg.mf.neg_ratio);
      break;
    case Method::DecisionTree:
      s += ";max_depth=" + std::to_string(cfg.tree.max_depth) +
           ";min_leaf=" + std::to_string(cfg.tree.min_leaf);
      break;
    case Method::RandomForest:
      s += ";n_trees=" + std::to_string(cfg.forest.n_trees) +
           ";max_depth=" + std::to_string(cfg.forest.max_depth) +
           ";min_leaf=" + std::to_string(cfg.forest.min_leaf) +
           ";feature_subsample=" + std::to_string(cfg.forest.feature_subsample) +
           ";bootstrap=" + std::to_string(cfg.forest.bootstrap);
      break;
    case Method::StandardGcn:
    case Method::WeightedGcn:
      s += ";epochs=" + std::to_string(cfg.gcn.epochs) +
           ";lr=" + format_double(cfg.gcn.learning_rate) +
           ";hidden=" + std::to_string(cfg.gcn.hidden) + ";embed=" + std::to_string(cfg.gcn.embed) +
           ";decoder=" + std::string(decoder_name(cfg.gcn.decoder)) +
           ";weight_mode=" + std::string(weight_mode_name(gcn_weight_mode(m, cfg))) +
           ";side_info=" + std::to_string(m == Method::WeightedGcn && side_info) +
           ";select_on_validation=" + std::to_string(cfg.gcn.select_on_validation);
      break;
    default:
      break;
  }
  return s;
}

inline std::vector<Edge> labelled_pairs(std::span<const Edge> pos, std::span<const Edge> neg,
                                        std::vector<int>& labels) {
  std::vector<Edge> pairs(pos.begin(), pos.end());
  pairs.insert(pairs.end(), neg.begin(), neg.end());
  labels.assign(pos.size(), 1);
  labels.resize(pairs.size(), 0);
  return pairs;
}

struct TrainedMethod {
  Model model;
  /// Per-epoch training loss for iterative methods, empty otherwise.
  std::vector<double> loss_trace;
};

/// Trains `m` on the training partition of `split`. `side` is optional node
/// side information; only the weighted GCN consumes it.
inline TrainedMethod train_method(Method m, const EdgeSplit& split, const DenseMatrix* side,
                                  const BenchmarkConfig& cfg) {
  const Graph g_train = train_graph(split);
  const std::uint64_t seed = method_seed(cfg.seed, m);
  if (auto h = as_heuristic(m)) return {HeuristicModel{*h}, {}};

  switch (m) {
    case Method::MatrixFactorization: {
      MfModel mf = train_mf(split, g_train, cfg.mf, seed);
      std::vector<double> trace = mf.loss_trace;
      return {std::move(mf), std::move(trace)};
    }
    case Method::DecisionTree:
    case Method::RandomForest: {
      std::vector<int> labels;
      const auto pairs = labelled_pairs(split.train_pos, split.train_neg, labels);
      const DenseMatrix x = pair_feature_matrix(g_train, pairs);
      if (m == Method::DecisionTree) return {train_tree(x, labels, cfg.tree), {}};
      return {train_forest(x, labels, cfg.forest, seed), {}};
    }
    case Method::StandardGcn:
    case Method::WeightedGcn: {
      GcnModel model;
      model.features.base = BaseFeatures::OneHot;
      model.features.side_info = m == Method::WeightedGcn && side != nullptr;
      model.features.side_dim = model.features.side_info ? side->cols() : 0;
      model.config = cfg.gcn;
      model.config.weight_mode = gcn_weight_mode(m, cfg);
      model.config.seed = seed;
      const DenseMatrix x = build_node_features(g_train, model.features, side);
      GcnTrainResult trained = train_gcn(g_train, x, split, model.config);
      model.params = std::move(trained.params);
      return {std::move(model), std::move(trained.loss_trace)};
    }
    default:
      throw InternalError("unhandled method");
  }
}

/// Scores the test partition. Heuristic scores are min-max scaled for the
/// thresholded metrics; AUC always uses the raw scores.
inline EvalReport evaluate_model(const Model& model, Method m, const EdgeSplit& split,
                                 const DenseMatrix* side, const BenchmarkConfig& cfg) {
  const Graph g_train = train_graph(split);
  std::vector<int> labels;
  const auto pairs = labelled_pairs(split.test_pos, split.test_neg, labels);
  if (split.test_pos.empty() || split.test_neg.empty()) {
    throw InputError("test partition needs both positive and negative pairs");
  }

  std::vector<double> scores;
  std::vector<double> probs;
  std::visit(
      [&](const auto& mdl) {
        using T = std::decay_t<decltype(mdl)>;
        if constexpr (std::is_same_v<T, HeuristicModel>) {
          scores = score_pairs(g_train, pairs, mdl.method);
          probs = min_max_scale(scores);
        } else if constexpr (std::is_same_v<T, MfModel>) {
          if (mdl.num_nodes() != split.num_nodes) {
            throw InputError("model node count does not match the split");
          }
          for (const Edge& e : pairs) scores.push_back(score_mf(mdl, e.u, e.v));
        } else if constexpr (std::is_same_v<T, TreeModel> || std::is_same_v<T, ForestModel>) {
          for (const Edge& e : pairs) {
            const EdgeFeatureVector f = edge_features(g_train, e.u, e.v);
            scores.push_back(predict(mdl, f));
          }
        } else {
          const DenseMatrix x = build_node_features(g_train, mdl.features, side);
          scores = predict_links(mdl.params, normalize_adjacency(g_train), x, pairs);
        }
      },
      model);
  if (probs.empty()) probs = scores;

  const BinaryMetrics bm = binary_metrics(probs, labels, cfg.threshold);
  const ThresholdChoice best = best_f1_threshold(probs, labels);
  EvalReport r;
  r.method = std::string(method_info(m).key);
  r.display_name = std::string(method_info(m).display);
  r.precision = bm.precision;
  r.recall = bm.recall;
  r.f1 = bm.f1;
  r.precision_undefined = bm.precision_undefined;
  r.counts = bm.counts;
  r.auc = auc(scores, labels);
  r.threshold = cfg.threshold;
  r.best_threshold = best.threshold;
  r.best_f1 = best.f1;
  r.seed = cfg.seed;
  r.config_hash = fnv1a64(method_config_text(m, cfg, side != nullptr));
  return r;
}

/// One split, every method, reports in kAllMethods order.
inline std::vector<EvalReport> run_benchmark(const Graph& g, const DenseMatrix* side,
                                             const BenchmarkConfig& cfg,
                                             std::span<const Method> methods = kAllMethods) {
  if (side != nullptr && side->rows() != g.num_nodes()) {
    throw InputError("side information has " + std::to_string(side->rows()) +
                     " rows, graph has " + std::to_string(g.num_nodes()) + " nodes");
  }
  const EdgeSplit split = make_split(g, cfg.ratios, cfg.negatives, cfg.seed);
  std::vector<EvalReport> reports;
  for (Method m : methods) {
    const TrainedMethod trained = train_method(m, split, side, cfg);
    reports.push_back(evaluate_model(trained.model, m, split, side, cfg));
  }
  return reports;
}

}  // namespace clnk
