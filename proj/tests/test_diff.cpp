#include <gtest/gtest.h>

#include <cmath>

#include "cgmn/error.hpp"
#include "cgmn/grad_check.hpp"
#include "cgmn/rng.hpp"
#include "cgmn/tape.hpp"

using namespace cgmn;
using namespace cgmn::diff;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

// Relu inputs kept at least 0.1 away from the kink.
Matrix away_from_zero(std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.data()) v = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(0.1, 1.0);
  return m;
}

// Weighted sum so every output coordinate gets a distinct adjoint.
Var weigh(Tape& t, Var x) {
  Matrix w(x.rows(), x.cols());
  for (std::size_t i = 0; i < w.data().size(); ++i) w.data()[i] = 0.3 + 0.17 * static_cast<double>(i % 7);
  return sum(hadamard(x, t.constant(w)));
}

void expect_grad_ok(const UnaryFn& f, const Matrix& at, double tol = 1e-6) {
  const auto r = grad_check(f, at, {1e-5, tol, 1e-6});
  EXPECT_TRUE(r.pass) << "max rel error " << r.max_rel_error << " analytic " << r.worst_analytic
                      << " numeric " << r.worst_numeric;
  EXPECT_TRUE(r.nondifferentiable.empty());
}

}  // namespace

TEST(Forward, MatmulIdentity) {
  Tape t;
  const Matrix a{{1, 2}, {3, 4}};
  EXPECT_EQ(matmul(t.constant(a), t.constant(Matrix::identity(2))).value(), a);
}

TEST(Forward, Relu) {
  Tape t;
  EXPECT_EQ(relu(t.constant(Matrix{{-1, 2}})).value(), (Matrix{{0, 2}}));
}

TEST(Forward, CosineRows) {
  Tape t;
  const auto c = cosine_rows(t.constant(Matrix{{1, 1}}), t.constant(Matrix{{1, 0}}));
  EXPECT_NEAR(c.scalar(), 0.70710678118654752, 1e-12);
}

TEST(Forward, ShapeMismatch) {
  Tape t;
  const auto a = t.constant(Matrix(2, 3));
  EXPECT_THROW(matmul(a, a), ShapeError);
  EXPECT_THROW(add(a, t.constant(Matrix(3, 2))), ShapeError);
  EXPECT_THROW(concat_cols(a, t.constant(Matrix(3, 1))), ShapeError);
}

TEST(Forward, DegenerateRowNamesIndex) {
  Tape t;
  try {
    l2_normalize_rows(t.constant(Matrix{{1, 0}, {0, 0}}));
    FAIL() << "expected DegenerateError";
  } catch (const DegenerateError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_NE(std::string(e.what()).find("degenerate embedding"), std::string::npos);
  }
}

TEST(Forward, NonFiniteIsError) {
  Tape t;
  EXPECT_THROW(log(t.constant(Matrix{{-1.0}})), NumericError);
  EXPECT_THROW(exp(t.constant(Matrix{{1000.0}})), NumericError);
}

TEST(Forward, BitwiseDeterministic) {
  Rng rng(3);
  const auto a = random_matrix(7, 5, rng), b = random_matrix(5, 9, rng), c = random_matrix(4, 9, rng);
  auto run = [&] {
    Tape t;
    return cosine_matrix(matmul(t.constant(a), t.constant(b)), t.constant(c)).value();
  };
  EXPECT_EQ(run(), run());
}

TEST(Backward, SumOfSquares) {
  Tape t;
  const auto x = t.variable(Matrix{{1, 2}});
  t.backward(sum(square(x)));
  EXPECT_EQ(x.grad(), (Matrix{{2, 4}}));
}

TEST(Backward, ConstantLossGivesZeroGrad) {
  Tape t;
  const auto x = t.variable(Matrix{{1, 2}});
  const auto c = t.constant(Matrix{{5.0}});
  t.backward(add(c, scalar_mul(sum(x), 0.0)));
  EXPECT_EQ(x.grad(), Matrix(1, 2, 0.0));
}

TEST(Backward, AccumulatesUntilReset) {
  Tape t;
  const auto x = t.variable(Matrix{{1, 2}});
  const auto loss = sum(square(x));
  t.backward(loss);
  t.backward(loss);
  EXPECT_EQ(x.grad(), (Matrix{{4, 8}}));
  t.zero_grad();
  EXPECT_EQ(x.grad(), Matrix(1, 2, 0.0));
}

TEST(Backward, NonScalarLoss) {
  Tape t;
  const auto x = t.variable(Matrix{{1, 2}});
  EXPECT_THROW(t.backward(square(x)), ShapeError);
}

TEST(Backward, LinearityOverIndependentSubgraphs) {
  Rng rng(17);
  const auto a0 = random_matrix(3, 4, rng), b0 = random_matrix(4, 2, rng);
  auto f = [](Var a, Var b) { return sum(tanh(matmul(a, b))); };
  auto g = [](Var a, Var b) { return mean(exp(scalar_mul(matmul(a, b), 0.5))); };

  Tape t;
  const auto a = t.variable(a0), b = t.variable(b0);
  t.backward(add(f(a, b), g(a, b)));

  Tape t1, t2;
  const auto a1 = t1.variable(a0), b1 = t1.variable(b0);
  t1.backward(f(a1, b1));
  const auto a2 = t2.variable(a0), b2 = t2.variable(b0);
  t2.backward(g(a2, b2));
  for (std::size_t i = 0; i < a0.data().size(); ++i) {
    EXPECT_NEAR(a.grad().data()[i], a1.grad().data()[i] + a2.grad().data()[i], 1e-14);
  }
  for (std::size_t i = 0; i < b0.data().size(); ++i) {
    EXPECT_NEAR(b.grad().data()[i], b1.grad().data()[i] + b2.grad().data()[i], 1e-14);
  }
}

TEST(Backward, SimMatchesFiniteDifferences) {
  Rng rng(5);
  const Matrix y = random_matrix(1, 4, rng);
  const double tau = 0.5;
  expect_grad_ok(
      [&](Tape& t, Var x) { return sum(exp(scalar_mul(cosine_rows(x, t.constant(y)), 1.0 / tau))); },
      random_matrix(1, 4, rng));
}

// ---- every primitive against central differences -------------------------

TEST(Primitives, UnaryOps) {
  Rng rng(21);
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, relu(x)); }, away_from_zero(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, sigmoid(x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, tanh(x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, exp(x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, log(x)); }, random_matrix(3, 4, rng, 0.5, 2.0));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, square(x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, scalar_mul(x, -1.7)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, add_scalar(x, 2.0)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, transpose(x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, row_mean(x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, row_sum(x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, diag(x)); }, random_matrix(4, 4, rng));
  expect_grad_ok([](Tape&, Var x) { return mean(x); }, random_matrix(3, 4, rng));
  expect_grad_ok([](Tape& t, Var x) { return weigh(t, l2_normalize_rows(x)); }, random_matrix(3, 4, rng));
}

TEST(Primitives, BinaryOps) {
  Rng rng(22);
  const Matrix other = random_matrix(3, 4, rng);
  const Matrix right = random_matrix(4, 2, rng);
  const Matrix rowv = random_matrix(1, 4, rng);
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, matmul(x, t.constant(right))); },
                 random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, matmul(t.constant(other), x)); },
                 random_matrix(4, 2, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, matmul(x, transpose(x))); }, random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, add(x, t.constant(other))); }, random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, sub(t.constant(other), x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, hadamard(x, x)); }, random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, add_row(t.constant(other), x)); }, rowv);
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, add_row(x, t.constant(rowv))); }, random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, concat_cols(x, square(x))); }, random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, cosine_rows(x, t.constant(other))); },
                 random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, cosine_matrix(x, t.constant(other))); },
                 random_matrix(3, 4, rng));
  expect_grad_ok([&](Tape& t, Var x) { return weigh(t, cosine_matrix(x, x)); }, random_matrix(3, 4, rng));
}

// ---- grad_check itself ------------------------------------------------------

TEST(GradCheck, QuadraticFormPasses) {
  const Matrix q{{2, 0.5, 0}, {0.5, 3, -1}, {0, -1, 4}};
  const auto r = grad_check(
      [&](Tape& t, Var x) { return sum(hadamard(x, matmul(x, t.constant(q)))); }, Matrix{{0.3, -0.7, 1.1}},
      {1e-5, 1e-6, 1e-6});
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_rel_error, 1e-6);
  EXPECT_EQ(r.checked, 3u);
}

TEST(GradCheck, ReluKinkIsFlaggedAndExcluded) {
  const auto r = grad_check([](Tape& t, Var x) { return weigh(t, relu(x)); }, Matrix{{0.0, 0.5, -0.5}});
  ASSERT_EQ(r.nondifferentiable.size(), 1u);
  EXPECT_EQ(r.nondifferentiable[0].index, 0u);
  EXPECT_EQ(r.checked, 2u);
  EXPECT_TRUE(r.pass);
}

TEST(GradCheck, DetectsWrongGradient) {
  // Custom op whose backward rule is off by a factor of two.
  auto bad_square = [](Var x) {
    Matrix v = x.value();
    for (double& e : v.data()) e *= e;
    const auto id = x.id;
    return x.tape->record(
        std::move(v), {id},
        [id](const Tape& tape, const Matrix& g, std::vector<Matrix>& adj) {
          const Matrix& xv = tape.value(id);
          if (adj[id].empty()) adj[id] = Matrix(xv.rows(), xv.cols());
          for (std::size_t i = 0; i < g.data().size(); ++i) adj[id].data()[i] += 4.0 * xv.data()[i] * g.data()[i];
        },
        "bad_square");
  };
  const auto r = grad_check([&](Tape&, Var x) { return sum(bad_square(x)); }, Matrix{{0.4, -1.2}});
  EXPECT_FALSE(r.pass);
  // |4x - 2x| / max(|4x|, |2x|)
  EXPECT_NEAR(r.max_rel_error, 0.5, 1e-6);
}

TEST(GradCheck, MultipleParameters) {
  Rng rng(9);
  const std::vector<Matrix> params{random_matrix(3, 4, rng), random_matrix(4, 2, rng)};
  const auto r = grad_check(
      [](Tape&, std::span<const Var> p) { return sum(tanh(matmul(p[0], p[1]))); }, params);
  EXPECT_TRUE(r.pass) << r.max_rel_error;
  EXPECT_EQ(r.checked, 20u);
}
