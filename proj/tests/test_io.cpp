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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "clnk/io.hpp"
#include "clnk/models.hpp"
#include "clnk/text.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace clnk {
namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(Text, ShortestRoundTrip) {
  std::mt19937_64 gen(1);
  for (int k = 0; k < 2000; ++k) {
    const double v = fixtures::awkward(gen);
    double back = 0;
    ASSERT_TRUE(text::parse_double(text::format_double(v), back));
    EXPECT_EQ(back, v);
  }
  double out = 0;
  EXPECT_FALSE(text::parse_double("1.5x", out));
  EXPECT_FALSE(text::parse_double("", out));
  EXPECT_FALSE(text::parse_double("nan", out));
  std::uint64_t u = 0;
  EXPECT_FALSE(text::parse_uint("-1", u));
  EXPECT_TRUE(text::parse_uint("42", u));
  EXPECT_EQ(u, 42u);
}

TEST(EdgeList, Parse) {
  std::istringstream path("n=3\n0 1\n1 2\n");
  const Graph g = load_edge_list(path);
  EXPECT_EQ(g, build_graph({{0, 1}, {1, 2}}, 3));
  std::istringstream empty("n=2\n");
  const Graph e = load_edge_list(empty);
  EXPECT_EQ(e.num_nodes(), 2u);
  EXPECT_EQ(e.num_edges(), 0u);
}

TEST(EdgeList, Errors) {
  const std::string range = error_of([] {
    std::istringstream in("n=3\n2 5\n");
    load_edge_list(in);
  });
  EXPECT_NE(range.find("line 2"), std::string::npos) << range;
  const std::string malformed = error_of([] {
    std::istringstream in("n=3\n0 1\n0 x\n");
    load_edge_list(in);
  });
  EXPECT_NE(malformed.find("line 3"), std::string::npos) << malformed;
  EXPECT_NE(error_of([] {
              std::istringstream in("0 1\n");
              load_edge_list(in);
            }),
            "");
  EXPECT_NE(error_of([] { load_edge_list(std::string("/nonexistent/graph.edges")); }), "");
}

TEST(EdgeList, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = oracle::random_graph(1 + seed * 3, 0.2, seed);
    std::stringstream ss;
    save_edge_list(g, ss);
    EXPECT_EQ(load_edge_list(ss), g);
  }
}

TEST(Features, Parse) {
  std::istringstream in("1,0\n0,1\n0,0\n");
  const DenseMatrix x = load_features(in, 3);
  EXPECT_EQ(x, DenseMatrix(3, 2, std::vector<double>{1, 0, 0, 1, 0, 0}));
}

TEST(Features, Errors) {
  const std::string rows = error_of([] {
    std::istringstream in("1,0\n0,1\n");
    load_features(in, 3);
  });
  EXPECT_NE(rows.find('3'), std::string::npos) << rows;
  EXPECT_NE(rows.find('2'), std::string::npos) << rows;
  const std::string cell = error_of([] {
    std::istringstream in("1,0\n0,abc\n");
    load_features(in, 2);
  });
  EXPECT_NE(cell.find("row 2"), std::string::npos) << cell;
  EXPECT_NE(cell.find("column 2"), std::string::npos) << cell;
  EXPECT_NE(error_of([] {
              std::istringstream in("1,0\n0\n");
              load_features(in, 2);
            }),
            "");
}

TEST(Features, RoundTrip) {
  std::mt19937_64 gen(3);
  DenseMatrix x(7, 3);
  for (double& v : x.values()) v = fixtures::awkward(gen);
  std::stringstream ss;
  save_features(x, ss);
  EXPECT_EQ(load_features(ss, 7), x);
}

EventLog events(const std::string& csv) {
  std::istringstream in(csv);
  return load_event_log(in);
}

TEST(Ingest, CoOccurrenceThreshold) {
  const std::string csv = "event_id,person_id\ne1,a\ne1,b\ne2,a\ne2,b\ne3,a\ne3,c\n";
  const IngestResult strict = ingest_events(events(csv), 2);
  EXPECT_EQ(strict.node_ids, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(strict.graph, build_graph({{0, 1}}, 3));
  const IngestResult loose = ingest_events(events(csv), 1);
  EXPECT_EQ(loose.graph, build_graph({{0, 1}, {0, 2}}, 3));
}

TEST(Ingest, SingletonEvents) {
  const IngestResult r = ingest_events(events("event_id,person_id,role\ne1,a,x\ne2,b,y\n"), 1);
  EXPECT_EQ(r.graph.num_nodes(), 2u);
  EXPECT_EQ(r.graph.num_edges(), 0u);
}

TEST(Ingest, RepeatedRowsCountOnce) {
  const IngestResult r = ingest_events(events("event_id,person_id\ne1,a\ne1,b\ne1,b\n"), 2);
  EXPECT_EQ(r.graph.num_edges(), 0u);
}

TEST(Ingest, RowOrderOnlyRelabels) {
  std::mt19937_64 gen(4);
  std::vector<std::string> rows;
  for (int k = 0; k < 60; ++k) {
    rows.push_back("e" + std::to_string(gen() % 15) + ",p" + std::to_string(gen() % 20));
  }
  auto build = [&](const std::vector<std::string>& r) {
    std::string csv = "event_id,person_id\n";
    for (const auto& line : r) csv += line + "\n";
    return ingest_events(events(csv), 1);
  };
  const IngestResult a = build(rows);
  std::shuffle(rows.begin(), rows.end(), gen);
  const IngestResult b = build(rows);
  auto named = [](const IngestResult& r) {
    std::set<std::pair<std::string, std::string>> s;
    for (const Edge& e : r.graph.edges()) {
      s.insert(std::minmax(r.node_ids[e.u], r.node_ids[e.v]));
    }
    return s;
  };
  EXPECT_EQ(named(a), named(b));
}

TEST(Ingest, Errors) {
  EXPECT_THROW(events(""), InputError);
  EXPECT_THROW(events("person,event\n"), InputError);
  EXPECT_THROW(ingest_events(events("event_id,person_id\n"), 1), InputError);
  const std::string width = error_of([] { events("event_id,person_id\ne1,a,extra\n"); });
  EXPECT_NE(width.find("line 2"), std::string::npos) << width;
}

TEST(Synthetic, DeterministicLimits) {
  SyntheticConfig sc;
  sc.n = 4;
  sc.k = 2;
  sc.p_in = 1.0;
  sc.p_out = 0.0;
  sc.feature_dim = 2;
  EXPECT_EQ(generate_synthetic(sc).graph, build_graph({{0, 1}, {2, 3}}, 4));
  sc.p_in = 0.0;
  EXPECT_EQ(generate_synthetic(sc).graph.num_edges(), 0u);
  sc.p_in = 0.5;
  sc.p_out = 0.6;
  EXPECT_THROW(generate_synthetic(sc), InputError);
  sc.p_out = 0.1;
  sc.feature_dim = 1;
  EXPECT_THROW(generate_synthetic(sc), InputError);
}

TEST(Synthetic, FeaturesAreNoisyBlockIndicators) {
  SyntheticConfig sc;
  sc.feature_noise = 0.0;
  sc.feature_dim = 6;
  const SyntheticData d = generate_synthetic(sc);
  for (std::size_t i = 0; i < sc.n; ++i)
    for (std::size_t c = 0; c < 6; ++c) EXPECT_EQ(d.features(i, c), c == d.blocks[i] ? 1.0 : 0.0);
}

TEST(Synthetic, IntraBlockEdgeCountMatchesBinomial) {
  SyntheticConfig sc;  // n=400, k=4, p_in=0.15, p_out=0.01
  const double pairs_in = 4.0 * 100 * 99 / 2;
  const double mean = pairs_in * sc.p_in;
  const double sd = std::sqrt(pairs_in * sc.p_in * (1 - sc.p_in));
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    sc.seed = seed;
    const SyntheticData d = generate_synthetic(sc);
    std::size_t intra = 0;
    for (const Edge& e : d.graph.edges()) intra += d.blocks[e.u] == d.blocks[e.v];
    EXPECT_LT(std::abs(intra - mean), 5 * sd) << "seed " << seed;
    total += static_cast<double>(intra);
  }
  EXPECT_LT(std::abs(total / 30 - mean), 3 * sd / std::sqrt(30.0));
}

TEST(SplitFile, RoundTrip) {
  const Graph g = oracle::random_graph(40, 0.15, 2);
  const EdgeSplit s = make_split(g, {0.7, 0.1, 0.2}, {3.0, 1.0}, 99);
  std::stringstream ss;
  save_split(s, ss);
  EXPECT_EQ(load_split(ss), s);
}

TEST(SplitFile, Errors) {
  auto load = [](const std::string& body) {
    std::istringstream in(body);
    load_split(in);
  };
  EXPECT_THROW(load("n=3\nseed=1\n[train_pos]\n0 1\n"), InputError);
  const std::string bad = error_of([&] { load("n=3\nseed=1\nratios=1 0 0\n[train_pos]\n0 3\n"); });
  EXPECT_NE(bad.find("line 5"), std::string::npos) << bad;
  EXPECT_THROW(load("n=3\nseed=1\nratios=1 0 0\n[bogus]\n"), InputError);
}

TEST(ModelFile, RandomizedRoundTrips) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    for (const Model& m : fixtures::random_models(seed)) {
      const Model back = fixtures::round_trip(m);
      EXPECT_TRUE(fixtures::model_equal(m, back)) << model_kind(m) << " seed " << seed;
      EXPECT_EQ(fixtures::serialize(back), fixtures::serialize(m));
    }
  }
}

TEST(ModelFile, TruncationIsAnError) {
  for (const Model& m : fixtures::random_models(5)) {
    const std::string full = fixtures::serialize(m);
    for (std::size_t cut : {full.size() / 3, full.size() / 2, full.size() - 5}) {
      std::istringstream in(full.substr(0, cut));
      EXPECT_THROW(load_model(in), InputError) << model_kind(m) << " cut at " << cut;
    }
  }
}

TEST(ModelFile, BadMagicAndKind) {
  std::istringstream magic("CLNK9\nkind=tree\nend\n");
  const std::string e = error_of([&] { load_model(magic); });
  EXPECT_NE(e.find("CLNK9"), std::string::npos) << e;
  std::istringstream kind("CLNK1\nkind=svm\nend\n");
  const std::string k = error_of([&] { load_model(kind); });
  EXPECT_NE(k.find("svm"), std::string::npos) << k;
}

}  // namespace
}  // namespace clnk
