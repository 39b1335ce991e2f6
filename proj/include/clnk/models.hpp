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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <variant>
#include <vector>

#include "clnk/dense_matrix.hpp"
#include "clnk/error.hpp"
#include "clnk/gcn.hpp"
#include "clnk/heuristics.hpp"
#include "clnk/matfact.hpp"
#include "clnk/text.hpp"
#include "clnk/trees.hpp"

namespace clnk {

enum class BaseFeatures { OneHot, Degree };

/// How a GCN's input matrix is assembled from the graph and optional side
/// information.
struct FeatureSpec {
  BaseFeatures base = BaseFeatures::OneHot;
  bool side_info = false;
  /// Column count of the side information the model was trained with.
  std::size_t side_dim = 0;
};

inline DenseMatrix build_node_features(const Graph& g, const FeatureSpec& spec,
                                       const DenseMatrix* side) {
  DenseMatrix base = spec.base == BaseFeatures::OneHot ? DenseMatrix::identity(g.num_nodes())
                                                       : degree_features(g);
  if (!spec.side_info) return base;
  if (side == nullptr) throw InputError("model was trained with side information; pass --features");
  if (side->cols() != spec.side_dim) {
    throw InputError("side information has " + std::to_string(side->cols()) +
                     " columns, model expects " + std::to_string(spec.side_dim));
  }
  return concat_side_info(base, *side);
}

struct HeuristicModel {
  HeuristicMethod method = HeuristicMethod::CommonNeighbors;
};

struct GcnModel {
  GcnParams params;
  TrainConfig config;
  FeatureSpec features;
};

using Model = std::variant<HeuristicModel, MfModel, TreeModel, ForestModel, GcnModel>;

inline std::string_view model_kind(const Model& m) {
  static constexpr std::string_view kinds[] = {"heuristic", "mf", "tree", "forest", "gcn"};
  return kinds[m.index()];
}

inline constexpr std::string_view kModelMagic = "CLNK1";

// Container layout, one item per line:
//   CLNK1
//   kind=<heuristic|mf|tree|forest|gcn>
//   key=value ...
//   matrix <name> <rows> <cols>   followed by <rows> lines of values
//   end
// Numbers are written in shortest round-trip form, so load(save(m)) == m.

namespace detail {

class ModelWriter {
 public:
  explicit ModelWriter(std::ostream& out) : out_(out) {}

  void field(std::string_view key, std::string_view value) {
    out_ << key << '=' << value << '\n';
  }
  void field(std::string_view key, double value) { field(key, text::format_double(value)); }
  void field(std::string_view key, std::uint64_t value) { field(key, std::to_string(value)); }

  void matrix(std::string_view name, const DenseMatrix& m) {
    out_ << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c) out_ << ' ';
        out_ << text::format_double(m(r, c));
      }
      out_ << '\n';
    }
  }

  void tree(const TreeModel& t) {
    out_ << "tree " << t.num_features << ' ' << t.nodes.size() << '\n';
    for (const TreeNode& n : t.nodes) {
      out_ << n.feature << ' ' << text::format_double(n.threshold) << ' '
           << text::format_double(n.probability) << ' ' << n.left << ' ' << n.right << '\n';
    }
  }

 private:
  std::ostream& out_;
};

class ModelReader {
 public:
  explicit ModelReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines_.push_back(std::move(line));
    }
    if (lines_.empty() || lines_[0] != kModelMagic) {
      const std::string found = lines_.empty() ? "empty file" : "'" + lines_[0] + "'";
      throw InputError("not a clnk model: expected magic '" + std::string(kModelMagic) +
                       "', found " + found);
    }
    if (lines_.size() < 2 || lines_.back() != "end") {
      throw InputError("model file is truncated (missing 'end' marker)");
    }
    lines_.pop_back();
    pos_ = 1;
  }

  std::string field(std::string_view key) {
    const std::string& line = next("field '" + std::string(key) + "'");
    if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
        line[key.size()] != '=') {
      throw InputError(where() + "expected field '" + std::string(key) + "', found '" + line + "'");
    }
    return line.substr(key.size() + 1);
  }
  std::uint64_t uint_field(std::string_view key) {
    const std::string v = field(key);
    std::uint64_t out = 0;
    if (!text::parse_uint(v, out)) throw InputError(where() + "bad integer '" + v + "'");
    return out;
  }
  double double_field(std::string_view key) {
    const std::string v = field(key);
    double out = 0;
    if (!text::parse_double(v, out)) throw InputError(where() + "bad number '" + v + "'");
    return out;
  }

  DenseMatrix matrix(std::string_view name) {
    const std::string& header = next("matrix '" + std::string(name) + "'");
    const auto parts = text::split_ws(header);
    std::uint64_t rows = 0, cols = 0;
    if (parts.size() != 4 || parts[0] != "matrix" || parts[1] != name ||
        !text::parse_uint(parts[2], rows) || !text::parse_uint(parts[3], cols)) {
      throw InputError(where() + "expected matrix '" + std::string(name) + "', found '" +
                       header + "'");
    }
    std::vector<double> values;
    values.reserve(rows * cols);
    for (std::uint64_t r = 0; r < rows; ++r) {
      const auto cells = text::split_ws(next("matrix row"));
      if (cells.size() != cols) throw InputError(where() + "matrix row has wrong width");
      for (auto cell : cells) {
        double v = 0;
        if (!text::parse_double(cell, v)) throw InputError(where() + "bad matrix value");
        values.push_back(v);
      }
    }
    return DenseMatrix(rows, cols, std::move(values));
  }

  TreeModel tree() {
    const auto parts = text::split_ws(next("tree"));
    std::uint64_t features = 0, count = 0;
    if (parts.size() != 3 || parts[0] != "tree" || !text::parse_uint(parts[1], features) ||
        !text::parse_uint(parts[2], count) || count == 0) {
      throw InputError(where() + "bad tree header");
    }
    TreeModel t;
    t.num_features = features;
    for (std::uint64_t k = 0; k < count; ++k) {
      const std::string line = next("tree node");
      std::istringstream ss(line);
      std::string f, thr, prob, l, r;
      ss >> f >> thr >> prob >> l >> r;
      TreeNode n;
      if (!parse_int(f, n.feature) || !text::parse_double(thr, n.threshold) ||
          !text::parse_double(prob, n.probability) || !parse_int(l, n.left) ||
          !parse_int(r, n.right)) {
        throw InputError(where() + "bad tree node '" + line + "'");
      }
      const auto limit = static_cast<int>(count);
      if (n.feature >= static_cast<int>(features) ||
          (n.feature >= 0 && (n.left <= 0 || n.left >= limit || n.right <= 0 || n.right >= limit))) {
        throw InputError(where() + "tree node references are out of range");
      }
      t.nodes.push_back(n);
    }
    return t;
  }

  void finish() {
    if (pos_ != lines_.size()) throw InputError(where() + "unexpected trailing content");
  }

 private:
  static bool parse_int(const std::string& s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
  }

  const std::string& next(const std::string& what) {
    if (pos_ >= lines_.size()) throw InputError("model file ended while reading " + what);
    return lines_[pos_++];
  }
  std::string where() const { return "model line " + std::to_string(pos_ + 1) + ": "; }

  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline void save_model(const Model& model, std::ostream& out) {
  detail::ModelWriter w(out);
  out << kModelMagic << '\n';
  w.field("kind", model_kind(model));
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HeuristicModel>) {
          w.field("method", heuristic_name(m.method));
        } else if constexpr (std::is_same_v<T, MfModel>) {
          w.field("seed", m.seed);
          w.matrix("embeddings", m.embeddings);
          w.matrix("bias", DenseMatrix(m.bias.size(), 1, m.bias));
          w.matrix("loss_trace", DenseMatrix(m.loss_trace.size(), 1, m.loss_trace));
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          w.tree(m);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          w.field("features", static_cast<std::uint64_t>(m.num_features));
          w.field("trees", static_cast<std::uint64_t>(m.trees.size()));
          for (std::size_t t = 0; t < m.trees.size(); ++t) {
            w.field("tree_seed", m.tree_seeds[t]);
            w.tree(m.trees[t]);
          }
        } else {
          const TrainConfig& c = m.config;
          w.field("decoder", decoder_name(m.params.decoder));
          w.field("base_features", m.features.base == BaseFeatures::OneHot ? "onehot" : "degree");
          w.field("side_info", static_cast<std::uint64_t>(m.features.side_info));
          w.field("side_dim", static_cast<std::uint64_t>(m.features.side_dim));
          w.field("epochs", static_cast<std::uint64_t>(c.epochs));
          w.field("learning_rate", c.learning_rate);
          w.field("weight_mode", weight_mode_name(c.weight_mode));
          w.field("adam_beta1", c.adam.beta1);
          w.field("adam_beta2", c.adam.beta2);
          w.field("adam_epsilon", c.adam.epsilon);
          w.field("seed", c.seed);
          w.field("select_on_validation", static_cast<std::uint64_t>(c.select_on_validation));
          w.field("b2", m.params.b2);
          w.matrix("w0", m.params.w0);
          w.matrix("w1", m.params.w1);
          w.matrix("w2", m.params.w2);
        }
      },
      model);
  out << "end\n";
}

inline Model load_model(std::istream& in) {
  detail::ModelReader r(in);
  const std::string kind = r.field("kind");
  Model result;
  if (kind == "heuristic") {
    result = HeuristicModel{parse_heuristic(r.field("method"))};
  } else if (kind == "mf") {
    MfModel m;
    m.seed = r.uint_field("seed");
    m.embeddings = r.matrix("embeddings");
    const DenseMatrix bias = r.matrix("bias");
    if (bias.rows() != m.embeddings.rows() || bias.cols() != 1) {
      throw InputError("mf model: bias shape does not match embeddings");
    }
    m.bias.assign(bias.values().begin(), bias.values().end());
    const DenseMatrix trace = r.matrix("loss_trace");
    m.loss_trace.assign(trace.values().begin(), trace.values().end());
    result = std::move(m);
  } else if (kind == "tree") {
    result = r.tree();
  } else if (kind == "forest") {
    ForestModel f;
    f.num_features = r.uint_field("features");
    const std::uint64_t count = r.uint_field("trees");
    if (count == 0) throw InputError("forest model has no trees");
    for (std::uint64_t t = 0; t < count; ++t) {
      f.tree_seeds.push_back(r.uint_field("tree_seed"));
      f.trees.push_back(r.tree());
      if (f.trees.back().num_features != f.num_features) {
        throw InputError("forest tree feature count mismatch");
      }
    }
    result = std::move(f);
  } else if (kind == "gcn") {
    GcnModel m;
    m.params.decoder = parse_decoder(r.field("decoder"));
    m.config.decoder = m.params.decoder;
    const std::string base = r.field("base_features");
    if (base != "onehot" && base != "degree") throw InputError("unknown base features '" + base + "'");
    m.features.base = base == "onehot" ? BaseFeatures::OneHot : BaseFeatures::Degree;
    m.features.side_info = r.uint_field("side_info") != 0;
    m.features.side_dim = r.uint_field("side_dim");
    m.config.epochs = r.uint_field("epochs");
    m.config.learning_rate = r.double_field("learning_rate");
    m.config.weight_mode = parse_weight_mode(r.field("weight_mode"));
    m.config.adam.beta1 = r.double_field("adam_beta1");
    m.config.adam.beta2 = r.double_field("adam_beta2");
    m.config.adam.epsilon = r.double_field("adam_epsilon");
    m.config.seed = r.uint_field("seed");
    m.config.select_on_validation = r.uint_field("select_on_validation") != 0;
    m.params.b2 = r.double_field("b2");
    m.params.w0 = r.matrix("w0");
    m.params.w1 = r.matrix("w1");
    m.params.w2 = r.matrix("w2");
    if (m.params.w0.cols() != m.params.w1.rows() || m.params.w0.rows() == 0 ||
        m.params.w1.cols() == 0 ||
        (m.params.decoder == DecoderKind::Mlp &&
         (m.params.w2.rows() != 3 * m.params.w1.cols() || m.params.w2.cols() != 1))) {
      throw InputError("gcn model: inconsistent weight shapes");
    }
    m.config.hidden = m.params.w0.cols();
    m.config.embed = m.params.w1.cols();
    m.params.touch();
    result = std::move(m);
  } else {
    throw InputError("unknown model kind '" + kind + "'");
  }
  r.finish();
  return result;
}

inline void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  save_model(model, out);
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  try {
    return load_model(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace clnk
