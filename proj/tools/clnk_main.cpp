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

// clnk: link prediction benchmark command-line tool.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "clnk/cli.hpp"

namespace {

using clnk::InputError;
using clnk::cli::RunConfig;

clnk::SplitRatios parse_ratios(const std::string& s) {
  const auto parts = clnk::text::split(s, ',');
  clnk::SplitRatios r;
  if (parts.size() != 3 || !clnk::text::parse_double(parts[0], r.train) ||
      !clnk::text::parse_double(parts[1], r.val) || !clnk::text::parse_double(parts[2], r.test)) {
    throw InputError("--ratios expects three comma-separated numbers, got '" + s + "'");
  }
  return r;
}

struct RawFlags {
  std::string ratios = "0.85,0.05,0.10";
  std::string decoder = "dot";
  std::string weight_mode;
  std::string format = "table";
};

void add_common(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--seed", cfg.bench.seed, "Master seed")->capture_default_str();
}

void add_training(CLI::App& cmd, RunConfig& cfg, RawFlags& raw) {
  cmd.add_option("--features", cfg.features, "Side-information feature file (CSV)");
  cmd.add_option("--mf-neg-ratio", cfg.bench.mf.neg_ratio,
                 "Negatives per positive resampled each matrix-factorization epoch")
      ->capture_default_str();
  cmd.add_option("--decoder", raw.decoder, "GCN decoder: dot or mlp")->capture_default_str();
  cmd.add_option("--weight-mode", raw.weight_mode,
                 "Override GCN loss weighting: inverse-frequency or uniform");
  cmd.add_option("--epochs", cfg.bench.gcn.epochs, "GCN epochs")->capture_default_str();
  cmd.add_option("--lr", cfg.bench.gcn.learning_rate, "GCN learning rate")->capture_default_str();
  cmd.add_option("--hidden", cfg.bench.gcn.hidden, "GCN hidden width")->capture_default_str();
  cmd.add_option("--embed", cfg.bench.gcn.embed, "GCN embedding width")->capture_default_str();
  cmd.add_flag("!--no-validation-selection", cfg.bench.gcn.select_on_validation,
               "Keep the last GCN epoch instead of the best validation epoch");
  cmd.add_option("--mf-epochs", cfg.bench.mf.epochs, "Matrix factorization epochs")
      ->capture_default_str();
  cmd.add_option("--trees", cfg.bench.forest.n_trees, "Random forest size")->capture_default_str();
}

void add_split(CLI::App& cmd, RunConfig& cfg, RawFlags& raw) {
  cmd.add_option("--ratios", raw.ratios, "train,val,test edge fractions")->capture_default_str();
  cmd.add_option("--neg-ratio", cfg.bench.negatives.train,
                 "Training negatives per positive")
      ->capture_default_str();
  cmd.add_option("--eval-neg-ratio", cfg.bench.negatives.eval,
                 "Validation/test negatives per positive")
      ->capture_default_str();
}

void add_synthetic(CLI::App& cmd, RunConfig& cfg) {
  auto& s = cfg.synthetic;
  cmd.add_option("--nodes", s.n, "Synthetic node count")->capture_default_str();
  cmd.add_option("--blocks", s.k, "Synthetic block count")->capture_default_str();
  cmd.add_option("--p-in", s.p_in, "Intra-block edge probability")->capture_default_str();
  cmd.add_option("--p-out", s.p_out, "Inter-block edge probability")->capture_default_str();
  cmd.add_option("--feature-dim", s.feature_dim, "Synthetic feature columns")
      ->capture_default_str();
  cmd.add_option("--noise", s.feature_noise, "Gaussian noise on synthetic features")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clnk: link prediction on sparse undirected networks"};
  app.set_config("--config", "", "TOML/INI configuration file; flags take precedence");
  app.require_subcommand(1);

  RunConfig cfg;
  RawFlags raw;

  auto* generate = app.add_subcommand("generate", "Write a synthetic block-model graph");
  generate->add_option("--out", cfg.out, "Output path prefix")->required();
  add_common(*generate, cfg);
  add_synthetic(*generate, cfg);

  auto* ingest = app.add_subcommand("ingest", "Project an event log onto a person graph");
  ingest->add_option("--input", cfg.input, "Event log CSV")->required();
  ingest->add_option("--out", cfg.out, "Output path prefix")->required();
  ingest->add_option("--min-cooccurrence", cfg.min_cooccurrence,
                     "Shared events needed for an edge")
      ->capture_default_str();

  auto* split = app.add_subcommand("split", "Split a graph into train/val/test pairs");
  split->add_option("--input", cfg.input, "Edge-list file")->required();
  split->add_option("--out", cfg.out, "Split file")->required();
  add_common(*split, cfg);
  add_split(*split, cfg, raw);

  auto* train = app.add_subcommand("train", "Train one method on a split");
  train->add_option("--input", cfg.input, "Split file")->required();
  train->add_option("--method", cfg.method, "Method key")->required();
  train->add_option("--out", cfg.out, "Model file")->required();
  train->add_option("--trace", cfg.trace, "Loss trace file (default <out>.loss)");
  add_common(*train, cfg);
  add_training(*train, cfg, raw);

  auto* evaluate = app.add_subcommand("evaluate", "Score a model on a split's test pairs");
  evaluate->add_option("--input", cfg.input, "Split file")->required();
  evaluate->add_option("--model", cfg.model, "Model file")->required();
  evaluate->add_option("--method", cfg.method, "Method key (inferred from the model if omitted)");
  evaluate->add_option("--out", cfg.out, "Report file (stdout if omitted)");
  evaluate->add_option("--format", raw.format, "table or json")->capture_default_str();
  add_common(*evaluate, cfg);
  add_training(*evaluate, cfg, raw);

  auto* bench = app.add_subcommand("benchmark", "Compare all methods on one dataset");
  bench->add_option("--input", cfg.input, "Edge-list file (synthetic graph if omitted)");
  bench->add_option("--out", cfg.out, "Report file (stdout if omitted)");
  bench->add_option("--format", raw.format, "table or json")->capture_default_str();
  add_common(*bench, cfg);
  add_split(*bench, cfg, raw);
  add_training(*bench, cfg, raw);
  add_synthetic(*bench, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    cfg.bench.ratios = parse_ratios(raw.ratios);
    cfg.bench.gcn.decoder = clnk::parse_decoder(raw.decoder);
    if (!raw.weight_mode.empty()) {
      cfg.bench.weight_mode_override = clnk::parse_weight_mode(raw.weight_mode);
    }
    cfg.format = clnk::parse_report_format(raw.format);

    if (*generate) clnk::cli::cmd_generate(cfg);
    else if (*ingest) clnk::cli::cmd_ingest(cfg);
    else if (*split) clnk::cli::cmd_split(cfg);
    else if (*train) clnk::cli::cmd_train(cfg);
    else if (*evaluate) clnk::cli::cmd_evaluate(cfg);
    else if (*bench) clnk::cli::cmd_benchmark(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
