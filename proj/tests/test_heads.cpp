#include <gtest/gtest.h>

#include <cmath>

#include "cgmn/error.hpp"
#include "cgmn/grad_check.hpp"
#include "cgmn/heads.hpp"
#include "cgmn/metrics.hpp"
#include "cgmn/rng.hpp"

using namespace cgmn;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(-1.0, 1.0);
  return m;
}

MlpParams ged_mlp(std::size_t z, std::uint64_t seed) {
  const std::size_t widths[] = {2 * z, 64, 16, 1};
  return MlpParams::init(widths, Activation::relu, seed);
}

double fit_mse(const Calibration& cal, const std::vector<double>& s, const std::vector<double>& y) {
  return mse(cal.apply(s), y);
}

}  // namespace

TEST(Pool, Examples) {
  EXPECT_EQ(pool(Matrix{{3, 4}}), (Matrix{{3, 4}}));
  EXPECT_EQ(pool(Matrix{{1, 2}, {3, 4}}), (Matrix{{2, 3}}));
  EXPECT_EQ(pool(Matrix(5, 3, 0.7)), Matrix(1, 3, 0.7));
}

TEST(Pool, PermutationInvariant) {
  Rng rng(3);
  const auto h = random_matrix(6, 4, rng);
  Matrix r(6, 4);
  const int order[] = {3, 5, 0, 2, 1, 4};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t c = 0; c < 4; ++c) r(i, c) = h(static_cast<std::size_t>(order[i]), c);
  const auto a = pool(h), b = pool(r);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(a(0, c), b(0, c), 1e-15);
}

TEST(Pool, EmptyIsError) { EXPECT_THROW(pool(Matrix(0, 3)), DataError); }

TEST(NormalizedGed, Examples) {
  EXPECT_EQ(normalized_ged(0, 3, 5), 1.0);
  EXPECT_NEAR(normalized_ged(1, 3, 3), 0.84648172489061413, 1e-12);
  EXPECT_NEAR(normalized_ged(12, 3, 3), 0.1353352832366127, 1e-12);
}

TEST(NormalizedGed, Monotonicity) {
  for (int n = 2; n < 12; ++n) {
    for (int g = 0; g < 20; ++g) {
      EXPECT_GT(normalized_ged(g, n, 3), normalized_ged(g + 1, n, 3));
      if (g > 0) EXPECT_LT(normalized_ged(g, n, 3), normalized_ged(g, n + 1, 3));
      EXPECT_GT(normalized_ged(g, n, 3), 0.0);
      EXPECT_LE(normalized_ged(g, n, 3), 1.0);
    }
  }
}

TEST(GedHead, ZeroWeightsGiveHalf) {
  auto mlp = ged_mlp(3, 1);
  for (auto& w : mlp.weights) w.fill(0.0);
  for (auto& b : mlp.biases) b.fill(0.0);
  Rng rng(1);
  EXPECT_EQ(ged_head(random_matrix(1, 3, rng), random_matrix(1, 3, rng), mlp), 0.5);
}

TEST(GedHead, RangeAndOrder) {
  Rng rng(2);
  const auto mlp = ged_mlp(5, 2);
  bool asymmetric = false;
  for (int t = 0; t < 20; ++t) {
    const auto z1 = random_matrix(1, 5, rng), z2 = random_matrix(1, 5, rng);
    const double y = ged_head(z1, z2, mlp);
    EXPECT_GT(y, 0.0);
    EXPECT_LT(y, 1.0);
    asymmetric = asymmetric || y != ged_head(z2, z1, mlp);
    EXPECT_NEAR(ged_head(z1, z2, mlp, true), ged_head(z2, z1, mlp, true), 1e-15);
  }
  EXPECT_TRUE(asymmetric);
}

TEST(GedHead, DimensionMismatch) {
  const auto mlp = ged_mlp(5, 2);
  EXPECT_THROW(ged_head(Matrix(1, 4), Matrix(1, 4), mlp), ShapeError);
}

TEST(GedHead, GradientMatchesFiniteDifferences) {
  Rng rng(6);
  const auto mlp = ged_mlp(3, 4);
  std::vector<Matrix> params;
  for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
    params.push_back(mlp.weights[l]);
    params.push_back(mlp.biases[l]);
  }
  const auto z1 = random_matrix(1, 3, rng), z2 = random_matrix(1, 3, rng);
  const auto r = diff::grad_check(
      [&](diff::Tape& t, std::span<const diff::Var> p) {
        MlpVars vars;
        for (std::size_t l = 0; l < p.size(); l += 2) {
          vars.weights.push_back(p[l]);
          vars.biases.push_back(p[l + 1]);
        }
        const auto y = ged_head(t.constant(z1), t.constant(z2), vars, Activation::relu, true);
        return diff::square(diff::add_scalar(y, -0.3));
      },
      params, {1e-5, 1e-4, 1e-6});
  EXPECT_TRUE(r.pass) << r.max_rel_error;
}

TEST(BsdHead, Examples) {
  const std::vector<double> a{1, 1}, b{1, 0}, c{0, 2};
  EXPECT_NEAR(bsd_head(a, a), 1.0, 1e-15);
  EXPECT_EQ(bsd_head(b, c), 0.0);
  EXPECT_EQ(bsd_label(bsd_head(b, c)), -1);
  EXPECT_NEAR(bsd_head(a, b), 0.70710678118654752, 1e-12);
  EXPECT_EQ(bsd_label(bsd_head(a, b)), 1);
  EXPECT_EQ(bsd_label(0.5, 0.6), -1);
}

TEST(BsdHead, SymmetricAndScaleInvariant) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(6), b(6);
    for (auto& x : a) x = rng.uniform(-1, 1);
    for (auto& x : b) x = rng.uniform(-1, 1);
    EXPECT_EQ(bsd_head(a, b), bsd_head(b, a));
    auto s = a;
    for (auto& x : s) x *= 3.5;
    EXPECT_NEAR(bsd_head(s, b), bsd_head(a, b), 1e-12);
  }
}

TEST(BsdHead, ZeroEmbedding) {
  const std::vector<double> z{0, 0}, a{1, 0};
  EXPECT_THROW(bsd_head(z, a), DegenerateError);
}

TEST(Calibrate, IdentityTargets) {
  std::vector<double> s;
  for (int i = 0; i < 40; ++i) s.push_back(0.2 + 0.6 * i / 39.0);
  const auto cal = calibrate(s, s);
  EXPECT_LE(fit_mse(cal, s, s), 1e-4);
}

TEST(Calibrate, ConstantTargets) {
  const std::vector<double> s{0.1, 0.5, 0.2, 0.9, -0.3};
  const std::vector<double> y(5, 0.37);
  const auto cal = calibrate(s, y);
  EXPECT_LE(fit_mse(cal, s, y), 1e-6);
}

TEST(Calibrate, AffineShiftImproves) {
  Rng rng(8);
  std::vector<double> s, y;
  for (int i = 0; i < 30; ++i) {
    s.push_back(rng.uniform(-1, 1));
    y.push_back(0.5 + 0.3 * s.back());
  }
  const double before = mse(s, y);
  EXPECT_LT(fit_mse(calibrate(s, y), s, y), before);
}

TEST(Calibrate, MapIsNonDecreasing) {
  // Targets that fall with the score cannot reverse the ranking.
  const std::vector<double> s{0.1, 0.4, 0.7, 0.9}, y{0.9, 0.6, 0.3, 0.1};
  const auto cal = calibrate(s, y);
  double prev = cal.apply(-2.0);
  for (int i = 0; i <= 100; ++i) {
    const double cur = cal.apply(-2.0 + 0.04 * i);
    EXPECT_GE(cur, prev);
    prev = cur;
  }
}

TEST(Calibrate, TwoPointsMinimum) {
  EXPECT_THROW(calibrate(std::vector<double>{0.5}, std::vector<double>{0.5}), DataError);
  EXPECT_NO_THROW(calibrate(std::vector<double>{0.5, 0.6}, std::vector<double>{0.5, 0.7}));
}

TEST(Calibrate, Deterministic) {
  const std::vector<double> s{0.1, 0.4, 0.7, 0.9}, y{0.2, 0.3, 0.6, 0.8};
  EXPECT_EQ(calibrate(s, y).apply(s), calibrate(s, y).apply(s));
}

TEST(Mlp, InitShapes) {
  const std::size_t widths[] = {1, 16, 1};
  const auto m = MlpParams::init(widths, Activation::tanh, 3, true);
  EXPECT_EQ(m.input_dim(), 1u);
  EXPECT_EQ(m.output_dim(), 1u);
  EXPECT_EQ(m.widths(), (std::vector<std::size_t>{1, 16, 1}));
  EXPECT_EQ(m.weights.back(), Matrix(16, 1, 0.0));
}
