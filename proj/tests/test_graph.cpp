#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cgmn/error.hpp"
#include "cgmn/ged.hpp"
#include "cgmn/graph.hpp"
#include "cgmn/graph_io.hpp"
#include "cgmn/split.hpp"
#include "cgmn/synthetic.hpp"
#include "support.hpp"

using namespace cgmn;
using cgmn::testing::make_graph;

namespace {

std::vector<Graph> parse(const std::string& body) {
  std::istringstream in("{\"format\":\"cgmn-graphs\",\"version\":1}\n" + body);
  return read_graphs(in, "mem");
}

std::string error_of(const std::string& body) {
  try {
    parse(body);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(LoadGraphs, SingleNode) {
  const auto gs = parse(R"({"id":"a","n":1,"edges":[],"features":[[1.0]]})");
  ASSERT_EQ(gs.size(), 1u);
  EXPECT_EQ(gs[0].adjacency(), Matrix({{0.0}}));
}

TEST(LoadGraphs, SelfLoopRejected) {
  const auto msg = error_of(R"({"id":"a","n":2,"edges":[[0,0]],"features":[[1],[1]]})");
  EXPECT_NE(msg.find("self-loop"), std::string::npos) << msg;
  EXPECT_NE(msg.find("mem:2"), std::string::npos) << msg;
}

TEST(LoadGraphs, Triangle) {
  const auto gs = parse(R"({"id":"t","n":3,"edges":[[0,1],[1,2],[0,2]],"features":[[1],[1],[1]]})");
  EXPECT_EQ(gs[0].num_edges(), 3u);
  const auto a = gs[0].adjacency();
  EXPECT_EQ(a, a.transposed());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a(i, i), 0.0);
}

TEST(LoadGraphs, InvariantErrorsNameGraphAndRule) {
  EXPECT_NE(error_of(R"({"id":"dup","n":2,"edges":[[0,1],[1,0]],"features":[[1],[1]]})").find("'dup'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"id":"dup","n":2,"edges":[[0,1],[1,0]],"features":[[1],[1]]})").find("duplicate"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"id":"r","n":2,"edges":[[0,2]],"features":[[1],[1]]})").find("out of range"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"id":"f","n":2,"edges":[],"features":[[1]]})").find("rows"), std::string::npos);
  EXPECT_NE(error_of("{\"id\":\"x\"").find("mem:2"), std::string::npos);
}

TEST(LoadGraphs, MixedFeatureDimensionsRejected) {
  const auto msg = error_of(
      "{\"id\":\"a\",\"n\":1,\"edges\":[],\"features\":[[1]]}\n"
      "{\"id\":\"b\",\"n\":1,\"edges\":[],\"features\":[[1,2]]}");
  EXPECT_NE(msg.find("dimension"), std::string::npos) << msg;
}

TEST(LoadGraphs, MissingHeader) {
  std::istringstream in(R"({"id":"a","n":1,"edges":[],"features":[[1.0]]})");
  EXPECT_THROW(read_graphs(in, "mem"), DataError);
}

TEST(LoadGraphs, LabelsBecomeOneHot) {
  const auto gs = parse(
      "{\"id\":\"a\",\"n\":2,\"edges\":[[0,1]],\"labels\":[0,2]}\n"
      "{\"id\":\"b\",\"n\":1,\"edges\":[],\"labels\":[1]}");
  EXPECT_EQ(gs[0].features, Matrix({{1, 0, 0}, {0, 0, 1}}));
  EXPECT_EQ(gs[1].features, Matrix({{0, 1, 0}}));
}

TEST(LoadGraphs, UnlabeledWithoutFeaturesGetsConstantOne) {
  const auto gs = parse(R"({"id":"a","n":3,"edges":[[0,1]]})");
  EXPECT_EQ(gs[0].features, Matrix(3, 1, 1.0));
}

TEST(LoadGraphs, MissingFileIsIoError) {
  EXPECT_THROW(load_graphs("/nonexistent/graphs.jsonl"), IoError);
}

TEST(GraphIo, RoundTrip) {
  SyntheticConfig sc;
  sc.count = 10;
  sc.seed = 4;
  auto data = generate_synthetic_pairs(sc).dataset;
  std::ostringstream out;
  write_graphs(out, data.graphs);
  std::istringstream in(out.str());
  const auto back = read_graphs(in);
  ASSERT_EQ(back.size(), data.graphs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].id, data.graphs[i].id);
    EXPECT_EQ(back[i].n, data.graphs[i].n);
    EXPECT_EQ(back[i].edges, data.graphs[i].edges);
    EXPECT_EQ(back[i].features, data.graphs[i].features);
    EXPECT_EQ(back[i].labels, data.graphs[i].labels);
  }

  std::ostringstream pout;
  write_pairs(pout, data.pairs, data.graphs);
  std::istringstream pin(pout.str());
  const auto pairs = read_pairs(pin, back);
  ASSERT_EQ(pairs.size(), data.pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(pairs[i].g1, data.pairs[i].g1);
    EXPECT_EQ(pairs[i].g2, data.pairs[i].g2);
    EXPECT_EQ(pairs[i].ged, data.pairs[i].ged);
  }
}

TEST(GraphIo, WriteIsByteStable) {
  const auto gs = parse(R"({"id":"t","n":3,"edges":[[0,1],[1,2],[0,2]],"features":[[0.1],[1e-300],[3]]})");
  std::ostringstream a, b;
  write_graphs(a, gs);
  std::istringstream in(a.str());
  write_graphs(b, read_graphs(in));
  EXPECT_EQ(a.str(), b.str());
}

TEST(ReadPairs, Validation) {
  const std::vector<Graph> gs{make_graph("a", 1, {}), make_graph("b", 1, {})};
  auto pairs = [&](const std::string& body) {
    std::istringstream in("{\"format\":\"cgmn-pairs\",\"version\":1}\n" + body);
    return read_pairs(in, gs, "p");
  };
  EXPECT_EQ(pairs(R"({"g1":"a","g2":"b","label":-1})")[0].label, -1);
  EXPECT_THROW(pairs(R"({"g1":"a","g2":"zz"})"), DataError);
  EXPECT_THROW(pairs(R"({"g1":"a","g2":"b","ged":-1})"), DataError);
  EXPECT_THROW(pairs(R"({"g1":"a","g2":"b","label":0})"), DataError);
}

TEST(PermuteNodes, MovesFeaturesAndEdges) {
  auto g = make_graph("p", 3, {{0, 1}});
  g.features = Matrix({{1}, {2}, {3}});
  const auto h = permute_nodes(g, {2, 0, 1});
  EXPECT_EQ(h.features, Matrix({{2}, {3}, {1}}));
  EXPECT_TRUE(h.has_edge(2, 0));
  EXPECT_EQ(h.num_edges(), 1u);
}

// ---- split ---------------------------------------------------------------

TEST(Split, DefaultFractions) {
  const auto s = split_dataset(100, {0.6, 0.2, 0.2}, 7);
  EXPECT_EQ(s.train.size(), 60u);
  EXPECT_EQ(s.valid.size(), 20u);
  EXPECT_EQ(s.test.size(), 20u);
}

TEST(Split, DegenerateFractions) {
  const auto s = split_dataset(10, {1.0, 0.0, 0.0}, 1);
  EXPECT_EQ(s.train.size(), 10u);
  EXPECT_TRUE(s.valid.empty());
  EXPECT_TRUE(s.test.empty());
}

TEST(Split, RoundingRule) {
  const auto s = split_dataset(5, {0.6, 0.2, 0.2}, 3);
  EXPECT_EQ(s.train.size(), 3u);
  EXPECT_EQ(s.valid.size(), 1u);
  EXPECT_EQ(s.test.size(), 1u);
}

TEST(Split, PartitionAndDeterminism) {
  for (std::size_t n : {1u, 2u, 7u, 33u, 250u}) {
    const auto s = split_dataset(n, {0.5, 0.3, 0.2}, 11);
    std::vector<std::size_t> all;
    for (const auto* part : {&s.train, &s.valid, &s.test}) all.insert(all.end(), part->begin(), part->end());
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(all[i], i);
    const auto again = split_dataset(n, {0.5, 0.3, 0.2}, 11);
    EXPECT_EQ(again.train, s.train);
    EXPECT_EQ(again.test, s.test);
  }
  EXPECT_NE(split_dataset(50, {}, 1).train, split_dataset(50, {}, 2).train);
}

TEST(Split, Errors) {
  EXPECT_THROW(split_dataset(0, {}, 1), DataError);
  EXPECT_THROW(split_dataset(10, {0.5, 0.5, 0.5}, 1), ConfigError);
  EXPECT_THROW(split_dataset(10, {1.2, -0.2, 0.0}, 1), ConfigError);
}

// ---- synthetic -----------------------------------------------------------

TEST(Synthetic, ZeroBudgetMeansZeroGed) {
  SyntheticConfig sc;
  sc.count = 20;
  sc.edit_budget = 0;
  const auto out = generate_synthetic_pairs(sc);
  for (const auto& p : out.dataset.pairs) EXPECT_EQ(p.ged, 0);
}

TEST(Synthetic, TriangleMinusEdge) {
  const auto t = cgmn::testing::triangle();
  const auto u = make_graph("tri-1", 3, {{0, 1}, {1, 2}});
  EXPECT_EQ(ged_exact(t, u).cost, 1);
}

TEST(Synthetic, DeterministicBytes) {
  SyntheticConfig sc;
  sc.count = 50;
  sc.seed = 99;
  auto dump = [&] {
    const auto d = generate_synthetic_pairs(sc).dataset;
    std::ostringstream os;
    write_graphs(os, d.graphs);
    write_pairs(os, d.pairs, d.graphs);
    return os.str();
  };
  EXPECT_EQ(dump(), dump());
}

TEST(Synthetic, OracleNeverExceedsAppliedEdits) {
  SyntheticConfig sc;
  sc.count = 60;
  sc.seed = 5;
  sc.edit_budget = 5;
  const auto out = generate_synthetic_pairs(sc);
  ASSERT_EQ(out.applied_edits.size(), out.dataset.pairs.size());
  for (std::size_t i = 0; i < out.applied_edits.size(); ++i) {
    ASSERT_TRUE(out.dataset.pairs[i].ged);
    EXPECT_LE(*out.dataset.pairs[i].ged, out.applied_edits[i]);
  }
}

TEST(Synthetic, GraphsAreValidAndSized) {
  SyntheticConfig sc;
  sc.count = 40;
  const auto d = generate_synthetic_pairs(sc).dataset;
  EXPECT_EQ(d.graphs.size(), 80u);
  for (const auto& g : d.graphs) {
    EXPECT_NO_THROW(g.validate());
    EXPECT_GE(g.n, sc.n_min);
    EXPECT_LE(g.n, sc.n_max);
  }
  EXPECT_NO_THROW(d.check_feature_dims());
}

TEST(Synthetic, ThreadCountDoesNotChangeLabels) {
  SyntheticConfig sc;
  sc.count = 30;
  sc.seed = 8;
  const auto a = generate_synthetic_pairs(sc).dataset;
  sc.threads = 4;
  const auto b = generate_synthetic_pairs(sc).dataset;
  for (std::size_t i = 0; i < a.pairs.size(); ++i) EXPECT_EQ(a.pairs[i].ged, b.pairs[i].ged);
}

TEST(Synthetic, BsdPairsAlternate) {
  BsdConfig bc;
  bc.count = 10;
  const auto d = generate_bsd_pairs(bc);
  ASSERT_EQ(d.pairs.size(), 10u);
  for (std::size_t i = 0; i < d.pairs.size(); ++i) {
    EXPECT_EQ(d.pairs[i].label, i % 2 == 0 ? 1 : -1);
    const auto& a = d.graphs[d.pairs[i].g1];
    const auto& b = d.graphs[d.pairs[i].g2];
    if (i % 2 == 0) {
      EXPECT_EQ(a.n, b.n);
      for (const auto& e : b.edges) EXPECT_TRUE(a.has_edge(e.u, e.v));
    }
  }
}
