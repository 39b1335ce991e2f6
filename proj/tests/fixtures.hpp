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

// Randomized model builders and structural equality shared by the unit and
// acceptance suites.

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "clnk/models.hpp"
#include "oracles.hpp"

namespace clnk::fixtures {

inline bool same_config(const TrainConfig& a, const TrainConfig& b) {
  return a.epochs == b.epochs && a.learning_rate == b.learning_rate && a.hidden == b.hidden &&
         a.embed == b.embed && a.decoder == b.decoder && a.weight_mode == b.weight_mode &&
         a.adam.beta1 == b.adam.beta1 && a.adam.beta2 == b.adam.beta2 &&
         a.adam.epsilon == b.adam.epsilon && a.seed == b.seed &&
         a.select_on_validation == b.select_on_validation;
}

inline bool model_equal(const Model& a, const Model& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, HeuristicModel>) {
          return x.method == y.method;
        } else if constexpr (std::is_same_v<T, MfModel>) {
          return x.embeddings == y.embeddings && x.bias == y.bias && x.seed == y.seed &&
                 x.loss_trace == y.loss_trace;
        } else if constexpr (std::is_same_v<T, GcnModel>) {
          return x.params.same_weights(y.params) && same_config(x.config, y.config) &&
                 x.features.base == y.features.base &&
                 x.features.side_info == y.features.side_info &&
                 x.features.side_dim == y.features.side_dim;
        } else {
          return x == y;
        }
      },
      a);
}

inline Model round_trip(const Model& m) {
  std::stringstream ss;
  save_model(m, ss);
  return load_model(ss);
}

inline std::string serialize(const Model& m) {
  std::ostringstream ss;
  save_model(m, ss);
  return ss.str();
}

inline double awkward(std::mt19937_64& gen) {
  // Values that need all 17 significant digits, plus the odd exact zero.
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double v = u(gen) * std::pow(10.0, static_cast<int>(gen() % 9) - 4);
  return gen() % 17 == 0 ? 0.0 : v;
}

inline TreeModel random_tree(std::mt19937_64& gen, std::size_t features) {
  TreeModel t;
  t.num_features = features;
  // A random full binary tree in preorder.
  std::function<int(int)> grow = [&](int depth) -> int {
    const int idx = static_cast<int>(t.nodes.size());
    t.nodes.push_back({});
    t.nodes.back().probability = std::uniform_real_distribution<double>(0, 1)(gen);
    if (depth < 3 && gen() % 3 != 0) {
      const int f = static_cast<int>(gen() % features);
      const double thr = awkward(gen);
      const int l = grow(depth + 1);
      const int r = grow(depth + 1);
      TreeNode& n = t.nodes[static_cast<std::size_t>(idx)];
      n.feature = f;
      n.threshold = thr;
      n.left = l;
      n.right = r;
    }
    return idx;
  };
  grow(0);
  return t;
}

inline std::vector<Model> random_models(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Model> out;
  out.push_back(HeuristicModel{kAllHeuristics[gen() % 4]});

  MfModel mf;
  mf.seed = gen();
  mf.embeddings = DenseMatrix(3 + gen() % 10, 1 + gen() % 5);
  for (double& v : mf.embeddings.values()) v = awkward(gen);
  for (std::size_t i = 0; i < mf.embeddings.rows(); ++i) mf.bias.push_back(awkward(gen));
  for (std::size_t e = 0; e < gen() % 6; ++e) mf.loss_trace.push_back(std::abs(awkward(gen)));
  out.push_back(mf);

  out.push_back(random_tree(gen, 7));

  ForestModel f;
  f.num_features = 1 + gen() % 7;
  for (std::size_t t = 0; t < 1 + gen() % 4; ++t) {
    f.trees.push_back(random_tree(gen, f.num_features));
    f.tree_seeds.push_back(gen());
  }
  out.push_back(f);

  for (DecoderKind d : {DecoderKind::DotProduct, DecoderKind::Mlp}) {
    GcnModel g;
    const std::size_t n = 2 + gen() % 8, h = 1 + gen() % 6, p = 1 + gen() % 4;
    g.params = init_gcn_params(n, h, p, d, gen());
    for (double& v : g.params.w0.values()) v = awkward(gen);
    if (d == DecoderKind::Mlp) g.params.b2 = awkward(gen);
    g.config.decoder = d;
    g.config.hidden = h;
    g.config.embed = p;
    g.config.epochs = gen() % 500 + 1;
    g.config.learning_rate = std::abs(awkward(gen));
    g.config.weight_mode = gen() % 2 ? WeightMode::Uniform : WeightMode::InverseFrequency;
    g.config.seed = gen();
    g.config.select_on_validation = gen() % 2;
    g.features.base = gen() % 2 ? BaseFeatures::OneHot : BaseFeatures::Degree;
    g.features.side_info = gen() % 2;
    g.features.side_dim = g.features.side_info ? 1 + gen() % 3 : 0;
    out.push_back(g);
  }
  return out;
}

}  // namespace clnk::fixtures
