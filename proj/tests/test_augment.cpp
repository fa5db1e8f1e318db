#include <gtest/gtest.h>

#include <algorithm>

#include "cgmn/augment.hpp"
#include "cgmn/error.hpp"
#include "support.hpp"

using namespace cgmn;

namespace {

Graph featured(int n, std::size_t d, double p, std::uint64_t seed) {
  Rng rng(seed);
  return cgmn::testing::random_featured("g", n, d, p, rng);
}

Graph graph_with_edges(std::size_t m) {
  Graph g;
  g.id = "many";
  g.n = 20;
  for (int a = 0; a < g.n && g.edges.size() < m; ++a)
    for (int b = a + 1; b < g.n && g.edges.size() < m; ++b) g.edges.emplace_back(a, b);
  g.features = Matrix(20, 2, 1.0);
  return g;
}

}  // namespace

TEST(Augment, IdentityWhenProbabilitiesZero) {
  const auto g = featured(6, 3, 0.5, 1);
  const auto [a, b] = make_views(g, {0.0, 0.0, 42});
  for (const auto* v : {&a, &b}) {
    EXPECT_EQ(v->graph.features, g.features);
    EXPECT_EQ(v->graph.edges, g.edges);
    EXPECT_TRUE(v->dropped_edges.empty());
    EXPECT_EQ(v->base_id, g.id);
  }
}

TEST(Augment, TotalMask) {
  const auto g = featured(6, 3, 0.5, 2);
  for (auto gran : {MaskGranularity::column, MaskGranularity::entry}) {
    const auto [a, b] = make_views(g, {1.0, 0.0, 3, gran});
    EXPECT_EQ(a.graph.features, Matrix(6, 3, 0.0));
    EXPECT_EQ(b.graph.features, Matrix(6, 3, 0.0));
  }
}

TEST(Augment, DropRateMonteCarlo) {
  const auto g = graph_with_edges(50);
  ASSERT_EQ(g.edges.size(), 50u);
  const AugmentConfig cfg{0.0, 0.2, 9};
  double dropped = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) dropped += static_cast<double>(make_view(g, cfg, t).dropped_edges.size());
  EXPECT_NEAR(dropped / (50.0 * trials), 0.2, 0.01);
}

TEST(Augment, StructuralInvariants) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto g = featured(7, 4, 0.5, s);
    const auto [a, b] = make_views(g, {0.3, 0.4, s});
    for (const auto* v : {&a, &b}) {
      EXPECT_EQ(v->graph.n, g.n);
      EXPECT_EQ(v->graph.features.rows(), g.features.rows());
      std::vector<Edge> all = v->graph.edges;
      all.insert(all.end(), v->dropped_edges.begin(), v->dropped_edges.end());
      std::sort(all.begin(), all.end());
      EXPECT_EQ(all, g.edges);
      EXPECT_NO_THROW(v->graph.validate());
    }
  }
}

TEST(Augment, ColumnMaskRecoverable) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto g = featured(5, 6, 0.5, s);
    const auto v = make_view(g, {0.4, 0.0, s}, 0);
    const auto cols = v.masked_dims.front();
    for (std::size_t r = 0; r < 5; ++r) {
      EXPECT_EQ(v.masked_dims[r], cols);
      for (std::size_t c = 0; c < 6; ++c) {
        const bool masked = std::find(cols.begin(), cols.end(), static_cast<int>(c)) != cols.end();
        EXPECT_EQ(v.graph.features(r, c), masked ? 0.0 : g.features(r, c));
      }
    }
  }
}

TEST(Augment, EntryMaskRecordsPerNode) {
  const auto g = featured(8, 6, 0.5, 4);
  const auto v = make_view(g, {0.5, 0.0, 4, MaskGranularity::entry}, 0);
  bool differs = false;
  for (std::size_t r = 0; r < 8; ++r) {
    differs = differs || v.masked_dims[r] != v.masked_dims[0];
    for (int c : v.masked_dims[r]) EXPECT_EQ(v.graph.features(r, static_cast<std::size_t>(c)), 0.0);
  }
  EXPECT_TRUE(differs);
}

TEST(Augment, DeterministicAndDecorrelated) {
  const auto g = featured(8, 5, 0.6, 5);
  const AugmentConfig cfg{0.3, 0.3, 77};
  const auto [a1, b1] = make_views(g, cfg);
  const auto [a2, b2] = make_views(g, cfg);
  EXPECT_EQ(a1.graph.features, a2.graph.features);
  EXPECT_EQ(a1.graph.edges, a2.graph.edges);
  EXPECT_EQ(b1.dropped_edges, b2.dropped_edges);

  int identical = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto [a, b] = make_views(g, {0.3, 0.3, s});
    identical += (a.graph.edges == b.graph.edges && a.masked_dims == b.masked_dims) ? 1 : 0;
  }
  EXPECT_LT(identical, 10);
}

TEST(Augment, InvalidProbabilities) {
  const auto g = featured(3, 2, 0.5, 6);
  EXPECT_THROW(make_views(g, {1.5, 0.0, 0}), ConfigError);
  EXPECT_THROW(make_views(g, {0.0, -0.1, 0}), ConfigError);
}

TEST(Augment, IdentityView) {
  const auto g = featured(4, 2, 0.5, 7);
  const auto v = identity_view(g);
  EXPECT_EQ(v.graph.features, g.features);
  EXPECT_EQ(v.graph.edges, g.edges);
  EXPECT_TRUE(v.dropped_edges.empty());
}
