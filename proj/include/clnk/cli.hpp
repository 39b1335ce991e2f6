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

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clnk/error.hpp"
#include "clnk/io.hpp"
#include "clnk/models.hpp"
#include "clnk/pipeline.hpp"
#include "clnk/report.hpp"

namespace clnk::cli {

/// Options shared by every subcommand. Paths are interpreted per command.
struct RunConfig {
  std::string input;
  std::string features;
  std::string model;
  std::string out;
  std::string trace;
  std::string method;
  ReportFormat format = ReportFormat::Table;
  BenchmarkConfig bench;
  SyntheticConfig synthetic;
  std::size_t min_cooccurrence = 1;
};

/// Runs `fn`, prefixing any error with the pipeline stage it came from.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError(name + ": " + e.what());
  } catch (const InternalError& e) {
    throw InternalError(name + ": " + e.what());
  }
}

namespace detail {

inline void require(const std::string& value, const char* flag, const char* command) {
  if (value.empty()) throw InputError(std::string(command) + " requires " + flag);
}

inline void write_text(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << content;
}

inline std::optional<DenseMatrix> maybe_features(const std::string& path, std::size_t n) {
  if (path.empty()) return std::nullopt;
  return stage("load features", [&] { return load_features(path, n); });
}

}  // namespace detail

/// Writes <out>.edges, <out>.features.csv and <out>.labels.
inline void cmd_generate(const RunConfig& cfg) {
  detail::require(cfg.out, "--out", "generate");
  SyntheticConfig sc = cfg.synthetic;
  sc.seed = cfg.bench.seed;
  const SyntheticData d = stage("generate", [&] { return generate_synthetic(sc); });
  stage("write graph", [&] { save_edge_list(d.graph, cfg.out + ".edges"); });
  stage("write features", [&] { save_features(d.features, cfg.out + ".features.csv"); });
  stage("write labels", [&] {
    std::ofstream out(cfg.out + ".labels", std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + cfg.out + ".labels' for writing");
    save_labels(d.blocks, out);
  });
}

/// Writes <out>.edges and <out>.ids.csv.
inline void cmd_ingest(const RunConfig& cfg) {
  detail::require(cfg.input, "--input", "ingest");
  detail::require(cfg.out, "--out", "ingest");
  const EventLog log = stage("load events", [&] { return load_event_log(cfg.input); });
  const IngestResult r =
      stage("ingest", [&] { return ingest_events(log, cfg.min_cooccurrence); });
  stage("write graph", [&] { save_edge_list(r.graph, cfg.out + ".edges"); });
  stage("write id map", [&] {
    std::ofstream out(cfg.out + ".ids.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + cfg.out + ".ids.csv' for writing");
    save_id_map(r.node_ids, out);
  });
}

inline void cmd_split(const RunConfig& cfg) {
  detail::require(cfg.input, "--input", "split");
  detail::require(cfg.out, "--out", "split");
  const Graph g = stage("load graph", [&] { return load_edge_list(cfg.input); });
  const EdgeSplit s = stage("split", [&] {
    return make_split(g, cfg.bench.ratios, cfg.bench.negatives, cfg.bench.seed);
  });
  stage("write split", [&] { save_split(s, cfg.out); });
}

/// Trains one method on a split file. Writes the model to --out and the
/// per-epoch loss to --trace (default <out>.loss).
inline void cmd_train(const RunConfig& cfg) {
  detail::require(cfg.input, "--input", "train");
  detail::require(cfg.out, "--out", "train");
  detail::require(cfg.method, "--method", "train");
  const Method m = parse_method(cfg.method);
  const EdgeSplit s = stage("load split", [&] { return load_split(cfg.input); });
  const auto side = detail::maybe_features(cfg.features, s.num_nodes);
  const TrainedMethod trained =
      stage("train " + cfg.method, [&] { return train_method(m, s, side ? &*side : nullptr, cfg.bench); });
  stage("write model", [&] { save_model(trained.model, cfg.out); });
  std::string trace = "epoch,loss\n";
  for (std::size_t e = 0; e < trained.loss_trace.size(); ++e) {
    trace += std::to_string(e) + ',' + text::format_double(trained.loss_trace[e]) + '\n';
  }
  stage("write loss trace",
        [&] { detail::write_text(cfg.trace.empty() ? cfg.out + ".loss" : cfg.trace, trace); });
}

inline EvalReport evaluate(const RunConfig& cfg) {
  detail::require(cfg.input, "--input", "evaluate");
  detail::require(cfg.model, "--model", "evaluate");
  const EdgeSplit s = stage("load split", [&] { return load_split(cfg.input); });
  const Model model = stage("load model", [&] { return load_model(cfg.model); });
  const Method m = cfg.method.empty() ? infer_method(model) : parse_method(cfg.method);
  const auto side = detail::maybe_features(cfg.features, s.num_nodes);
  return stage("evaluate", [&] {
    return evaluate_model(model, m, s, side ? &*side : nullptr, cfg.bench);
  });
}

inline void cmd_evaluate(const RunConfig& cfg) {
  const EvalReport r = evaluate(cfg);
  stage("write report", [&] {
    detail::write_text(cfg.out, format_reports(std::span<const EvalReport>(&r, 1), cfg.format));
  });
}

inline std::vector<EvalReport> benchmark(const RunConfig& cfg) {
  Graph g;
  std::optional<DenseMatrix> side;
  if (!cfg.input.empty()) {
    g = stage("load graph", [&] { return load_edge_list(cfg.input); });
    side = detail::maybe_features(cfg.features, g.num_nodes());
  } else {
    SyntheticConfig sc = cfg.synthetic;
    sc.seed = cfg.bench.seed;
    SyntheticData d = stage("generate", [&] { return generate_synthetic(sc); });
    g = std::move(d.graph);
    side = std::move(d.features);
  }
  return stage("benchmark", [&] { return run_benchmark(g, side ? &*side : nullptr, cfg.bench); });
}

/// All nine methods on one dataset (--input graph, or a synthetic graph when
/// no input is given).
inline void cmd_benchmark(const RunConfig& cfg) {
  const auto reports = benchmark(cfg);
  stage("write report", [&] { detail::write_text(cfg.out, format_reports(reports, cfg.format)); });
}

}  // namespace clnk::cli
