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
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "clnk/dense_matrix.hpp"
#include "clnk/error.hpp"
#include "clnk/graph.hpp"
#include "clnk/rng.hpp"
#include "clnk/splitter.hpp"
#include "clnk/text.hpp"

namespace clnk {

namespace detail {

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

inline std::string line_error(std::size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Edge lists: "n=<count>" header, then one "i j" pair per line.

inline void save_edge_list(const Graph& g, std::ostream& out) {
  out << "n=" << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline Graph load_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t n = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = text::trim(line);
    if (body.empty()) continue;
    if (!have_header) {
      if (body.substr(0, 2) != "n=" || !text::parse_uint(body.substr(2), n)) {
        throw InputError(detail::line_error(line_no, "expected header 'n=<count>'"));
      }
      if (n == 0) throw InputError(detail::line_error(line_no, "node count must be >= 1"));
      have_header = true;
      continue;
    }
    const auto parts = text::split_ws(body);
    std::uint64_t u = 0, v = 0;
    if (parts.size() != 2 || !text::parse_uint(parts[0], u) || !text::parse_uint(parts[1], v)) {
      throw InputError(detail::line_error(line_no, "expected 'i j', found '" + line + "'"));
    }
    if (u >= n || v >= n) {
      throw InputError(detail::line_error(
          line_no, "node index out of range in '" + std::string(body) + "' (n=" +
                       std::to_string(n) + ")"));
    }
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  if (!have_header) throw InputError("edge list is missing the 'n=<count>' header");
  return build_graph(edges, static_cast<std::size_t>(n));
}

inline void save_edge_list(const Graph& g, const std::string& path) {
  auto out = detail::open_out(path);
  save_edge_list(g, out);
}

inline Graph load_edge_list(const std::string& path) {
  auto in = detail::open_in(path);
  try {
    return load_edge_list(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Feature files: comma-separated reals, one node per line, no header.

inline DenseMatrix load_features(std::istream& in, std::size_t n) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(line, ',');
    if (rows == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw InputError(detail::line_error(line_no, "expected " + std::to_string(width) +
                                                       " columns, found " +
                                                       std::to_string(cells.size())));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!text::parse_double(cells[c], v)) {
        throw InputError("row " + std::to_string(rows + 1) + ", column " +
                         std::to_string(c + 1) + ": not a number: '" +
                         std::string(text::trim(cells[c])) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows != n) {
    throw InputError("feature file has " + std::to_string(rows) + " rows, expected " +
                     std::to_string(n));
  }
  return DenseMatrix(rows, width, std::move(values));
}

inline DenseMatrix load_features(const std::string& path, std::size_t n) {
  auto in = detail::open_in(path);
  try {
    return load_features(in, n);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void save_features(const DenseMatrix& x, std::ostream& out) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (c) out << ',';
      out << text::format_double(x(r, c));
    }
    out << '\n';
  }
}

inline void save_features(const DenseMatrix& x, const std::string& path) {
  auto out = detail::open_out(path);
  save_features(x, out);
}

// ---------------------------------------------------------------------------
// Event logs and the person co-occurrence projection.

struct EventRow {
  std::string event_id;
  std::string person_id;
  std::vector<std::string> attributes;
};

struct EventLog {
  std::vector<std::string> attribute_names;
  std::vector<EventRow> rows;
};

/// CSV with header "event_id,person_id[,attr...]". Quoting is not supported.
inline EventLog load_event_log(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(line, ',');
    if (!have_header) {
      if (cells.size() < 2 || text::trim(cells[0]) != "event_id" ||
          text::trim(cells[1]) != "person_id") {
        throw InputError(detail::line_error(line_no, "expected header 'event_id,person_id[,...]'"));
      }
      for (std::size_t c = 2; c < cells.size(); ++c) {
        log.attribute_names.emplace_back(text::trim(cells[c]));
      }
      width = cells.size();
      have_header = true;
      continue;
    }
    if (cells.size() != width) {
      throw InputError(detail::line_error(line_no, "expected " + std::to_string(width) +
                                                       " columns, found " +
                                                       std::to_string(cells.size())));
    }
    EventRow row{std::string(text::trim(cells[0])), std::string(text::trim(cells[1])), {}};
    if (row.event_id.empty() || row.person_id.empty()) {
      throw InputError(detail::line_error(line_no, "empty event or person id"));
    }
    for (std::size_t c = 2; c < cells.size(); ++c) {
      row.attributes.emplace_back(text::trim(cells[c]));
    }
    log.rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError("event log is empty (no header)");
  return log;
}

inline EventLog load_event_log(const std::string& path) {
  auto in = detail::open_in(path);
  try {
    return load_event_log(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct IngestResult {
  Graph graph;
  /// node index -> person id, in order of first appearance.
  std::vector<std::string> node_ids;
};

/// Persons become nodes; (a, b) is an edge when they appear together in at
/// least `min_cooccurrence` distinct events.
inline IngestResult ingest_events(const EventLog& log, std::size_t min_cooccurrence) {
  if (log.rows.empty()) throw InputError("event log has no rows");
  if (min_cooccurrence < 1) throw InputError("min co-occurrence must be >= 1");

  IngestResult r;
  std::unordered_map<std::string, NodeId> person_index;
  std::map<std::string, std::vector<NodeId>> members;
  for (const EventRow& row : log.rows) {
    auto [it, fresh] = person_index.try_emplace(row.person_id, r.node_ids.size());
    if (fresh) r.node_ids.push_back(row.person_id);
    members[row.event_id].push_back(it->second);
  }
  std::map<Edge, std::size_t> together;
  for (auto& [event, people] : members) {
    std::sort(people.begin(), people.end());
    people.erase(std::unique(people.begin(), people.end()), people.end());
    for (std::size_t a = 0; a < people.size(); ++a) {
      for (std::size_t b = a + 1; b < people.size(); ++b) ++together[{people[a], people[b]}];
    }
  }
  std::vector<Edge> edges;
  for (const auto& [pair, count] : together) {
    if (count >= min_cooccurrence) edges.push_back(pair);
  }
  r.graph = build_graph(edges, r.node_ids.size());
  return r;
}

inline void save_id_map(const std::vector<std::string>& node_ids, std::ostream& out) {
  out << "node,person_id\n";
  for (std::size_t i = 0; i < node_ids.size(); ++i) out << i << ',' << node_ids[i] << '\n';
}

// ---------------------------------------------------------------------------
// Synthetic stochastic block model.

struct SyntheticConfig {
  std::size_t n = 400;
  std::size_t k = 4;
  double p_in = 0.15;
  double p_out = 0.01;
  /// Columns of the feature matrix; the first k are block indicators.
  std::size_t feature_dim = 4;
  double feature_noise = 0.5;
  /// Training negatives per positive when this dataset is benchmarked.
  double imbalance_ratio = 1.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Graph graph;
  DenseMatrix features;
  std::vector<std::size_t> blocks;
};

/// Node i belongs to block floor(i k / n). Every unordered pair (i < j), in
/// lexicographic order, consumes one uniform draw from the graph stream;
/// features come from a separate stream.
inline SyntheticData generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.k < 1 || cfg.n < cfg.k) throw InputError("synthetic config needs n >= k >= 1");
  if (!(cfg.p_out >= 0 && cfg.p_out <= cfg.p_in && cfg.p_in <= 1)) {
    throw InputError("synthetic config needs 0 <= p_out <= p_in <= 1");
  }
  if (cfg.feature_dim < cfg.k) {
    throw InputError("synthetic feature_dim must be at least the block count");
  }
  if (!(cfg.feature_noise >= 0)) throw InputError("synthetic feature_noise must be >= 0");

  SyntheticData d;
  d.blocks.resize(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) d.blocks[i] = i * cfg.k / cfg.n;

  Rng edge_rng(derive_seed(cfg.seed, fnv1a64("synthetic/edges")));
  std::vector<Edge> edges;
  for (NodeId i = 0; i < cfg.n; ++i) {
    for (NodeId j = i + 1; j < cfg.n; ++j) {
      const double p = d.blocks[i] == d.blocks[j] ? cfg.p_in : cfg.p_out;
      if (edge_rng.uniform() < p) edges.push_back({i, j});
    }
  }
  d.graph = build_graph(edges, cfg.n);

  Rng feature_rng(derive_seed(cfg.seed, fnv1a64("synthetic/features")));
  d.features = DenseMatrix(cfg.n, cfg.feature_dim);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    for (std::size_t c = 0; c < cfg.feature_dim; ++c) {
      const double base = c == d.blocks[i] ? 1.0 : 0.0;
      d.features(i, c) = cfg.feature_noise > 0 ? base + cfg.feature_noise * feature_rng.normal()
                                               : base;
    }
  }
  return d;
}

inline void save_labels(const std::vector<std::size_t>& blocks, std::ostream& out) {
  for (std::size_t b : blocks) out << b << '\n';
}

// ---------------------------------------------------------------------------
// Split files: header with n, seed and ratios, then one section per partition.

inline constexpr std::array<const char*, 6> kSplitSections = {
    "train_pos", "train_neg", "val_pos", "val_neg", "test_pos", "test_neg"};

namespace detail {
inline std::vector<Edge>& split_section(EdgeSplit& s, std::string_view name) {
  if (name == "train_pos") return s.train_pos;
  if (name == "train_neg") return s.train_neg;
  if (name == "val_pos") return s.val_pos;
  if (name == "val_neg") return s.val_neg;
  if (name == "test_pos") return s.test_pos;
  if (name == "test_neg") return s.test_neg;
  throw InputError("unknown split section [" + std::string(name) + "]");
}
}  // namespace detail

inline void save_split(const EdgeSplit& s, std::ostream& out) {
  out << "# clnk edge split\n";
  out << "n=" << s.num_nodes << '\n';
  out << "seed=" << s.seed << '\n';
  out << "ratios=" << text::format_double(s.ratios.train) << ' '
      << text::format_double(s.ratios.val) << ' ' << text::format_double(s.ratios.test) << '\n';
  EdgeSplit copy = s;
  for (const char* name : kSplitSections) {
    out << '[' << name << "]\n";
    for (const Edge& e : detail::split_section(copy, name)) out << e.u << ' ' << e.v << '\n';
  }
}

inline EdgeSplit load_split(std::istream& in) {
  EdgeSplit s;
  std::string line;
  std::size_t line_no = 0;
  std::vector<Edge>* section = nullptr;
  bool have_n = false, have_seed = false, have_ratios = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw InputError(detail::line_error(line_no, "bad section header"));
      try {
        section = &detail::split_section(s, body.substr(1, body.size() - 2));
      } catch (const InputError& e) {
        throw InputError(detail::line_error(line_no, e.what()));
      }
      continue;
    }
    if (section == nullptr) {
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw InputError(detail::line_error(line_no, "expected key=value header"));
      }
      const std::string_view key = body.substr(0, eq), value = body.substr(eq + 1);
      std::uint64_t u = 0;
      if (key == "n" && text::parse_uint(value, u) && u > 0) {
        s.num_nodes = static_cast<std::size_t>(u);
        have_n = true;
      } else if (key == "seed" && text::parse_uint(value, u)) {
        s.seed = u;
        have_seed = true;
      } else if (key == "ratios") {
        const auto parts = text::split_ws(value);
        if (parts.size() != 3 || !text::parse_double(parts[0], s.ratios.train) ||
            !text::parse_double(parts[1], s.ratios.val) ||
            !text::parse_double(parts[2], s.ratios.test)) {
          throw InputError(detail::line_error(line_no, "expected three ratios"));
        }
        have_ratios = true;
      } else {
        throw InputError(detail::line_error(line_no, "bad header entry '" + line + "'"));
      }
      continue;
    }
    const auto parts = text::split_ws(body);
    std::uint64_t u = 0, v = 0;
    if (parts.size() != 2 || !text::parse_uint(parts[0], u) || !text::parse_uint(parts[1], v)) {
      throw InputError(detail::line_error(line_no, "expected 'i j', found '" + line + "'"));
    }
    if (u >= s.num_nodes || v >= s.num_nodes || u == v) {
      throw InputError(detail::line_error(line_no, "invalid pair '" + std::string(body) + "'"));
    }
    section->push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  if (!have_n || !have_seed || !have_ratios) {
    throw InputError("split file header must define n, seed and ratios");
  }
  return s;
}

inline void save_split(const EdgeSplit& s, const std::string& path) {
  auto out = detail::open_out(path);
  save_split(s, out);
}

inline EdgeSplit load_split(const std::string& path) {
  auto in = detail::open_in(path);
  try {
    return load_split(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace clnk
