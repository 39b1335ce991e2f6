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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clnk/cli.hpp"
#include "clnk/clnk.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using namespace clnk;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v, int digits = 4) { return text::format_fixed(v, digits); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (DecoderKind d : {DecoderKind::DotProduct, DecoderKind::Mlp}) {
      worst = std::max(worst, oracle::gcn_gradient_error(d, 1000 + seed));
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 10.0,
          "max relative error " + sci(worst) + ", " + fmt(secs, 2) + " s"};
}

Outcome normalization() {
  const auto t0 = Clock::now();
  bool symmetric = true;
  double radius = 0.0;
  std::mt19937_64 gen(21);
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::size_t n = 1 + gen() % 50;
    const double p = std::uniform_real_distribution<double>(0.0, 0.5)(gen);
    const Graph g = oracle::random_graph(n, p, 500 + k);
    const DenseMatrix a = normalize_adjacency(g).to_dense();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) symmetric = symmetric && a(i, j) == a(j, i);
    radius = std::max(radius, oracle::spectral_radius(oracle::from(a), 200, k));
  }
  const double entry = normalize_adjacency(build_graph({{0, 1}, {1, 2}}, 3)).at(0, 1);
  const double path_err = std::abs(entry - 1.0 / std::sqrt(6.0));
  const double secs = seconds_since(t0);
  return {symmetric && radius <= 1.0 + 1e-9 && path_err <= 1e-12 && secs < 5.0,
          std::string("symmetric=") + (symmetric ? "yes" : "no") + ", max spectral radius " +
              fmt(radius, 12) + ", path entry error " + sci(path_err) + ", " +
              fmt(secs, 2) + " s"};
}

Outcome heuristic_oracle() {
  std::mt19937_64 gen(31);
  std::size_t checked = 0, mismatches = 0;
  while (checked < 1000) {
    const std::size_t n = 2 + gen() % 49;
    const Graph g = oracle::random_graph(n, 0.05 + (gen() % 40) / 100.0, gen());
    const auto a2 = oracle::mul(oracle::adjacency(g), oracle::adjacency(g));
    for (int k = 0; k < 50 && checked < 1000; ++k, ++checked) {
      const NodeId i = gen() % n;
      NodeId j = gen() % n;
      if (i == j) j = (j + 1) % n;
      const auto want = oracle::brute_heuristics(g, i, j);
      const double cn = heuristic_score(g, i, j, HeuristicMethod::CommonNeighbors);
      mismatches += cn != want.cn || cn != a2[i][j] ||
                    heuristic_score(g, i, j, HeuristicMethod::Jaccard) != want.jaccard ||
                    heuristic_score(g, i, j, HeuristicMethod::AdamicAdar) != want.aa ||
                    heuristic_score(g, i, j, HeuristicMethod::PreferentialAttachment) != want.pa;
    }
  }
  return {mismatches == 0, std::to_string(checked) + " pairs, " + std::to_string(mismatches) +
                               " mismatches"};
}

Outcome auc_oracle() {
  std::mt19937_64 gen(41);
  std::size_t mismatches = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t n = 2 + gen() % 999;
    const std::size_t levels = 2 + gen() % 50;  // few levels force ties
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = inst % 2 ? static_cast<double>(gen() % levels) / static_cast<double>(levels)
                      : std::uniform_real_distribution<double>(0, 1)(gen);
      y[k] = static_cast<int>(gen() % 2);
    }
    y[0] = 1;
    y[1] = 0;
    if (inst % 2 == 0) s[1] = s[0];  // at least one tie in the continuous case
    mismatches += auc(s, y) != oracle::brute_auc(s, y);
  }
  const double worked =
      auc(std::vector<double>{0.9, 0.4, 0.5, 0.1}, std::vector<int>{1, 1, 0, 0});
  return {mismatches == 0 && worked == 0.75,
          "200 instances, " + std::to_string(mismatches) + " mismatches, worked example " +
              text::format_double(worked)};
}

Outcome loss_identities() {
  std::mt19937_64 gen(51);
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 1 + gen() % 200;
    std::vector<double> p(n);
    std::vector<int> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      p[k] = std::uniform_real_distribution<double>(0.001, 0.999)(gen);
      y[k] = static_cast<int>(gen() % 2);
    }
    double plain = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      plain += y[k] * std::log(p[k]) + (1 - y[k]) * std::log(1 - p[k]);
    }
    plain = -plain / static_cast<double>(n);
    worst = std::max(worst, std::abs(weighted_bce(p, y, {1.0, 1.0}) - plain));
  }
  const ClassWeights balanced = class_weights(std::vector<int>{1, 0, 1, 0, 0, 1});
  const double ln2 = weighted_bce(std::vector<double>{0.5, 0.5}, std::vector<int>{1, 0}, {1, 1});
  const bool ok = worst <= 1e-15 && balanced.pos == 1.0 && balanced.neg == 1.0 &&
                  std::abs(ln2 - std::log(2.0)) <= 1e-12;
  return {ok, "uniform vs unweighted max diff " + sci(worst) + ", balanced weights (" +
                  text::format_double(balanced.pos) + "," + text::format_double(balanced.neg) +
                  "), ln2 error " + sci(std::abs(ln2 - std::log(2.0)))};
}

// One seeded block-model run shared by the ordering and training checks.
struct SbmRun {
  double best_heuristic_auc = 0.0;
  double standard_auc = 0.0;
  double weighted_auc = 0.0;
  std::vector<double> weighted_loss;
};

SbmRun sbm_run(std::uint64_t seed) {
  SyntheticConfig sc;  // n=400, k=4, p_in=0.15, p_out=0.01
  sc.seed = seed;
  const SyntheticData d = generate_synthetic(sc);
  BenchmarkConfig cfg;
  cfg.seed = seed;
  const EdgeSplit split = make_split(d.graph, cfg.ratios, cfg.negatives, seed);
  SbmRun r;
  for (HeuristicMethod h : kAllHeuristics) {
    const Method m = parse_method(heuristic_name(h));
    const auto t = train_method(m, split, &d.features, cfg);
    r.best_heuristic_auc =
        std::max(r.best_heuristic_auc, evaluate_model(t.model, m, split, &d.features, cfg).auc);
  }
  const auto standard = train_method(Method::StandardGcn, split, &d.features, cfg);
  r.standard_auc = evaluate_model(standard.model, Method::StandardGcn, split, &d.features, cfg).auc;
  const auto weighted = train_method(Method::WeightedGcn, split, &d.features, cfg);
  r.weighted_auc = evaluate_model(weighted.model, Method::WeightedGcn, split, &d.features, cfg).auc;
  r.weighted_loss = weighted.loss_trace;
  return r;
}

std::vector<SbmRun> sbm_runs;
double sbm_seconds = 0.0;

void run_sbm() {
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 0; seed < 10; ++seed) sbm_runs.push_back(sbm_run(seed));
  sbm_seconds = seconds_since(t0);
}

Outcome directional_ordering() {
  if (sbm_runs.empty()) run_sbm();
  double heuristic = 0.0, standard = 0.0, weighted = 0.0;
  for (const SbmRun& r : sbm_runs) {
    heuristic += r.best_heuristic_auc / 10;
    standard += r.standard_auc / 10;
    weighted += r.weighted_auc / 10;
  }
  const bool ok = weighted - standard >= -0.01 && standard - heuristic >= -0.01 &&
                  weighted >= 0.80 && standard >= 0.80 && sbm_seconds < 120.0;
  return {ok, "mean AUC weighted+side " + fmt(weighted) + ", standard " + fmt(standard) +
                  ", best heuristic " + fmt(heuristic) + ", " + fmt(sbm_seconds, 1) + " s"};
}

Outcome imbalance_sensitivity() {
  double f1_if = 0.0, f1_uniform = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticConfig sc;
    sc.seed = seed;
    const SyntheticData d = generate_synthetic(sc);
    BenchmarkConfig cfg;
    cfg.seed = seed;
    cfg.negatives.train = 10.0;
    const EdgeSplit split = make_split(d.graph, cfg.ratios, cfg.negatives, seed);
    for (WeightMode w : {WeightMode::InverseFrequency, WeightMode::Uniform}) {
      cfg.weight_mode_override = w;
      const auto t = train_method(Method::StandardGcn, split, nullptr, cfg);
      const double f1 = evaluate_model(t.model, Method::StandardGcn, split, nullptr, cfg).f1;
      (w == WeightMode::InverseFrequency ? f1_if : f1_uniform) += f1 / 10;
    }
  }
  return {f1_if >= f1_uniform - 0.01,
          "mean test F1 inverse-frequency " + fmt(f1_if) + ", uniform " + fmt(f1_uniform)};
}

Outcome training_sanity() {
  if (sbm_runs.empty()) run_sbm();
  std::size_t violations = 0;
  double worst_step = -1e300;
  for (const SbmRun& r : sbm_runs) {
    std::vector<double> means;
    for (std::size_t w = 0; w < 5; ++w) {
      double s = 0.0;
      for (std::size_t e = 10 * w; e < 10 * w + 10; ++e) s += r.weighted_loss[e];
      means.push_back(s / 10);
    }
    for (std::size_t w = 1; w < means.size(); ++w) {
      worst_step = std::max(worst_step, means[w] - means[w - 1]);
      if (!(means[w] < means[w - 1] + 1e-6)) ++violations;
    }
  }
  return {violations == 0, "10 seeds, " + std::to_string(violations) +
                               " non-decreasing windows, largest window change " +
                               sci(worst_step)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "clnk_acceptance";
  fs::create_directories(dir);
  std::string outputs[2];
  for (int k = 0; k < 2; ++k) {
    cli::RunConfig cfg;
    cfg.bench.seed = 7;
    cfg.out = (dir / ("bench" + std::to_string(k) + ".txt")).string();
    cli::cmd_benchmark(cfg);
    std::ifstream in(cfg.out, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    outputs[k] = ss.str();
  }
  fs::remove_all(dir);
  return {!outputs[0].empty() && outputs[0] == outputs[1],
          std::to_string(outputs[0].size()) + " bytes, runs " +
              (outputs[0] == outputs[1] ? "identical" : "differ")};
}

Outcome tree_forest() {
  const DenseMatrix x1(4, 1, std::vector<double>{0, 1, 2, 3});
  const TreeModel stump = train_tree(x1, std::vector<int>{0, 0, 1, 1}, {1, 1});
  const bool threshold_ok = stump.nodes.size() == 3 && stump.nodes[0].threshold == 1.5;

  std::mt19937_64 gen(61);
  std::normal_distribution<double> nd;
  DenseMatrix x(300, 7);
  std::vector<int> y(300);
  for (std::size_t r = 0; r < 300; ++r) {
    y[r] = static_cast<int>(gen() % 2);
    for (std::size_t c = 0; c < 7; ++c) x(r, c) = nd(gen) + (c < 3 ? 0.7 * y[r] : 0.0);
  }
  ForestConfig single;
  single.n_trees = 1;
  single.bootstrap = false;
  single.feature_subsample = 7;
  const ForestModel f1 = train_forest(x, y, single, 3);
  const TreeModel t = train_tree(x, y, {single.max_depth, single.min_leaf});
  bool degenerate_ok = true;
  for (std::size_t r = 0; r < 300; ++r) degenerate_ok = degenerate_ok && predict(f1, x.row(r)) == predict(t, x.row(r));
  std::vector<double> probe(7);
  for (int k = 0; k < 1000; ++k) {
    for (double& v : probe) v = 2 * nd(gen);
    degenerate_ok = degenerate_ok && predict(f1, probe) == predict(t, probe);
  }

  ForestConfig fc;
  fc.n_trees = 40;
  const ForestModel f = train_forest(x, y, fc, 5);
  double worst = 0.0;
  for (std::size_t r = 0; r < 300; ++r) {
    double s = 0.0;
    for (const TreeModel& tree : f.trees) s += predict(tree, x.row(r));
    worst = std::max(worst, std::abs(predict(f, x.row(r)) - s / 40.0));
  }
  return {threshold_ok && degenerate_ok && worst <= 1e-15,
          "stump threshold " + text::format_double(stump.nodes[0].threshold) +
              ", one-tree forest " + (degenerate_ok ? "equals" : "differs from") +
              " tree, mean-of-trees max error " + sci(worst)};
}

Outcome round_trips() {
  std::size_t models = 0, model_failures = 0, graphs = 0, graph_failures = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (const Model& m : fixtures::random_models(seed)) {
      ++models;
      model_failures += !fixtures::model_equal(m, fixtures::round_trip(m));
    }
    std::mt19937_64 gen(seed);
    const Graph g = oracle::random_graph(1 + gen() % 80, (gen() % 50) / 100.0, seed);
    std::stringstream ss;
    save_edge_list(g, ss);
    ++graphs;
    graph_failures += !(load_edge_list(ss) == g);
  }
  return {model_failures == 0 && graph_failures == 0,
          std::to_string(models) + " models (" + std::to_string(model_failures) + " failed), " +
              std::to_string(graphs) + " graphs (" + std::to_string(graph_failures) + " failed)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient-oracle", gradient_oracle},
      {"normalization", normalization},
      {"heuristic-oracle", heuristic_oracle},
      {"auc-oracle", auc_oracle},
      {"loss-identities", loss_identities},
      {"directional-ordering", directional_ordering},
      {"imbalance-sensitivity", imbalance_sensitivity},
      {"training-sanity", training_sanity},
      {"determinism", determinism},
      {"tree-forest", tree_forest},
      {"round-trips", round_trips},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
