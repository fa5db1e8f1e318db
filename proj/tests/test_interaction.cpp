#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cgmn/error.hpp"
#include "cgmn/interaction.hpp"
#include "cgmn/matrix.hpp"
#include "cgmn/rng.hpp"
#include "cgmn/tape.hpp"

using namespace cgmn;
using diff::Tape;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(-1.0, 1.0);
  return m;
}

double loss_value(const Matrix& a, const Matrix& b, double tau, NegativeSet neg) {
  Tape t;
  return contrastive_loss(t.constant(a), t.constant(b), tau, neg).scalar();
}

// Direct evaluation of the per-node terms from cosines.
double reference_loss(const Matrix& a, const Matrix& b, double tau, NegativeSet neg) {
  const std::size_t n = a.rows();
  auto one_direction = [&](const Matrix& x, const Matrix& y, std::size_t u) {
    std::vector<double> negs;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == u) continue;
      negs.push_back(cosine(x.row(u), y.row(k)));
      if (neg == NegativeSet::both) negs.push_back(cosine(x.row(u), x.row(k)));
    }
    return contrastive_term(cosine(x.row(u), y.row(u)), negs, tau);
  };
  double total = 0.0;
  for (std::size_t u = 0; u < n; ++u) total += 0.5 * (one_direction(a, b, u) + one_direction(b, a, u));
  return total / static_cast<double>(n);
}

}  // namespace

TEST(Sim, IdenticalVectors) {
  const std::vector<double> v{0.3, -1.2, 2.0};
  EXPECT_NEAR(sim(v, v, 0.5), std::exp(2.0), 1e-12);
}

TEST(Sim, Orthogonal) {
  const std::vector<double> a{1, 0}, b{0, 3};
  for (double tau : {0.1, 0.5, 7.0}) EXPECT_EQ(sim(a, b, tau), 1.0);
}

TEST(Sim, HandValue) {
  const std::vector<double> a{1, 1}, b{1, 0};
  EXPECT_NEAR(sim(a, b, 1.0), 2.0281149816474724, 1e-12);
}

TEST(Sim, ZeroVector) {
  const std::vector<double> a{0, 0}, b{1, 0};
  EXPECT_THROW(sim(a, b, 1.0), DegenerateError);
}

TEST(Sim, SymmetricScaleInvariantAndBounded) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(5), b(5);
    for (auto& x : a) x = rng.uniform(-1, 1);
    for (auto& x : b) x = rng.uniform(-1, 1);
    const double tau = rng.uniform(0.1, 2.0);
    const double s = sim(a, b, tau);
    EXPECT_EQ(s, sim(b, a, tau));
    auto scaled = a;
    const double c = rng.uniform(0.01, 100.0);
    for (auto& x : scaled) x *= c;
    EXPECT_NEAR(sim(scaled, b, tau), s, 1e-12 * s);
    EXPECT_GE(s, std::exp(-1.0 / tau) * (1 - 1e-12));
    EXPECT_LE(s, std::exp(1.0 / tau) * (1 + 1e-12));
  }
}

TEST(Sim, LargeTemperatureTendsToOne) {
  const std::vector<double> a{1, 2}, b{-3, 1};
  EXPECT_NEAR(sim(a, b, 1e9), 1.0, 1e-8);
}

TEST(CrossView, Examples) {
  Tape t;
  EXPECT_EQ(cross_view_interact(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{1, 0}})).value(),
            (Matrix{{1, 0, 1, 0}}));
  EXPECT_EQ(cross_view_interact(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{0, 1}})).value(),
            (Matrix{{1, 0, 0, 0}}));
  EXPECT_EQ(cross_view_interact(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{1, 0}, {0, 1}})).value(),
            (Matrix{{1, 0, 1, 0}}));
}

TEST(CrossView, ZeroRowIsDegenerate) {
  Tape t;
  EXPECT_THROW(cross_view_interact(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{0, 0}})), DegenerateError);
}

TEST(CrossView, OwnCounterpartWeightIsMaximal) {
  Rng rng(8);
  Tape t;
  const auto h = t.constant(random_matrix(6, 4, rng));
  const auto w = diff::cosine_matrix(h, h).value();
  for (std::size_t u = 0; u < 6; ++u)
    for (std::size_t v = 0; v < 6; ++v) EXPECT_LE(w(u, v), w(u, u) + 1e-15);
}

TEST(CrossGraph, VectorMode) {
  Tape t;
  const auto out = cross_graph_interact(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{1, 0}}),
                                        t.constant(Matrix{{0, 1}}), CrossGraphMode::vector);
  EXPECT_EQ(out.value(), (Matrix{{1, 0, 1, 0, 0, 0}}));
}

TEST(CrossGraph, ScalarMode) {
  Tape t;
  const auto out = cross_graph_interact(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{1, 0}}),
                                        t.constant(Matrix{{0, 1}}), CrossGraphMode::scalar);
  EXPECT_EQ(out.value(), (Matrix{{1, 0, 1, 0}}));
}

TEST(CrossGraph, Widths) {
  Rng rng(2);
  Tape t;
  const auto e = t.constant(random_matrix(3, 8, rng));
  const auto pa = t.constant(random_matrix(4, 8, rng));
  const auto pb = t.constant(random_matrix(4, 8, rng));
  EXPECT_EQ(cross_graph_interact(e, pa, pb, CrossGraphMode::vector).cols(), 24u);
  EXPECT_EQ(cross_graph_interact(e, pa, pb, CrossGraphMode::scalar).cols(), 10u);
  EXPECT_THROW(cross_graph_interact(e, t.constant(random_matrix(4, 7, rng)), pb, CrossGraphMode::vector),
               ShapeError);
}

TEST(ContrastiveTerm, HandValue) {
  const std::vector<double> negs{0.0, 0.0};
  EXPECT_NEAR(contrastive_term(1.0, negs, 1.0), -std::log(std::exp(1.0) / (std::exp(1.0) + 2.0)), 1e-15);
  EXPECT_NEAR(contrastive_term(1.0, negs, 1.0), 0.5514447139320511, 1e-12);
}

TEST(ContrastiveTerm, MonotoneInPositiveCosine) {
  const std::vector<double> negs{0.3, -0.2, 0.8};
  for (double tau : {0.2, 0.5, 1.0}) {
    double prev = contrastive_term(1.0, negs, tau);
    for (int i = 1; i <= 40; ++i) {
      const double c = 1.0 - 0.05 * i;
      const double cur = contrastive_term(c, negs, tau);
      EXPECT_GT(cur, prev);
      prev = cur;
    }
  }
}

TEST(ContrastiveLoss, UniformSimilarity) {
  const Matrix same2(2, 3, 1.0);
  EXPECT_NEAR(loss_value(same2, same2, 0.5, NegativeSet::inter_only), std::log(2.0), 1e-12);
  // log(1 + N) for N in {1, 2, 10}
  EXPECT_NEAR(loss_value(same2, same2, 0.5, NegativeSet::inter_only), std::log(1.0 + 1.0), 1e-9);
  EXPECT_NEAR(loss_value(same2, same2, 0.5, NegativeSet::both), std::log(1.0 + 2.0), 1e-9);
  const Matrix same11(11, 3, 1.0);
  EXPECT_NEAR(loss_value(same11, same11, 0.5, NegativeSet::inter_only), std::log(1.0 + 10.0), 1e-9);
  const Matrix same6(6, 3, 1.0);
  EXPECT_NEAR(loss_value(same6, same6, 0.5, NegativeSet::both), std::log(1.0 + 10.0), 1e-9);
}

TEST(ContrastiveLoss, OrthogonalNegatives) {
  const auto e = Matrix::identity(3);
  EXPECT_NEAR(loss_value(e, e, 1.0, NegativeSet::inter_only), 0.5514447139320511, 1e-12);
}

TEST(ContrastiveLoss, MatchesReference) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_matrix(5, 4, rng), b = random_matrix(5, 4, rng);
    for (auto neg : {NegativeSet::both, NegativeSet::inter_only}) {
      const double got = loss_value(a, b, 0.5, neg);
      EXPECT_NEAR(got, reference_loss(a, b, 0.5, neg), 1e-12);
      EXPECT_GT(got, 0.0);
    }
  }
}

TEST(ContrastiveLoss, SwapSymmetry) {
  Rng rng(14);
  const auto a = random_matrix(6, 3, rng), b = random_matrix(6, 3, rng);
  EXPECT_NEAR(loss_value(a, b, 0.5, NegativeSet::both), loss_value(b, a, 0.5, NegativeSet::both), 1e-14);
}

TEST(ContrastiveLoss, NeedsTwoNodes) {
  Tape t;
  EXPECT_THROW(contrastive_loss(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{1, 0}}), 0.5), DataError);
}

TEST(InteractionConfig, Validation) {
  InteractionConfig c;
  c.tau = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(parse_cross_graph_mode("scalar"), CrossGraphMode::scalar);
  EXPECT_EQ(parse_negative_set("inter_only"), NegativeSet::inter_only);
  EXPECT_THROW(parse_negative_set("some"), ConfigError);
}
