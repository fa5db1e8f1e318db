#include "cgmn/tape.hpp"

#include <cmath>
#include <string>

#include "cgmn/error.hpp"

namespace cgmn::diff {

const Matrix& Var::value() const { return tape->value(id); }
const Matrix& Var::grad() const { return tape->grad(id); }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) throw ShapeError("scalar(): node is " + v.shape_string());
  return v(0, 0);
}

Var Tape::constant(Matrix value) {
  if (!value.all_finite()) throw NumericError("constant: non-finite value");
  Node node;
  node.value = std::move(value);
  node.leaf = true;
  nodes_.push_back(std::move(node));
  return {this, nodes_.size() - 1};
}

Var Tape::variable(Matrix value) {
  if (!value.all_finite()) throw NumericError("variable: non-finite value");
  Node node;
  node.grad = Matrix(value.rows(), value.cols());
  node.value = std::move(value);
  node.leaf = true;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return {this, nodes_.size() - 1};
}

Var Tape::record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward,
                 const char* op_name) {
  if (!value.all_finite()) throw NumericError(std::string(op_name) + ": non-finite result");
  Node node;
  node.value = std::move(value);
  for (auto p : parents) node.requires_grad = node.requires_grad || nodes_[p].requires_grad;
  node.parents = std::move(parents);
  if (node.requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return {this, nodes_.size() - 1};
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw Error("backward: variable belongs to another tape");
  const Matrix& lv = nodes_.at(loss.id).value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ShapeError("backward: loss must be scalar, got " + lv.shape_string());
  }
  std::vector<Matrix> adj(loss.id + 1);
  adj[loss.id] = Matrix(1, 1, 1.0);
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (adj[i].empty() || !node.requires_grad) continue;
    if (node.leaf) {
      node.grad.add_scaled(adj[i]);
    } else {
      node.backward(*this, adj[i], adj);
    }
    adj[i] = Matrix();
  }
}

void Tape::zero_grad() {
  for (auto& node : nodes_)
    if (node.leaf && node.requires_grad) node.grad.fill(0.0);
}

namespace {

void check(bool ok, const char* op, const Var& a, const Var& b) {
  if (!ok) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.value().shape_string() + " vs " +
                     b.value().shape_string());
  }
}

void check_same_tape(const Var& a, const Var& b) {
  if (a.tape != b.tape) throw Error("operands recorded on different tapes");
}

// adj[p] += g, allocating on first touch. Parents that do not require
// gradients are skipped.
void accumulate(const Tape& tape, std::vector<Matrix>& adj, std::size_t p, const Matrix& g) {
  if (!tape.requires_grad(p)) return;
  if (adj[p].empty()) {
    adj[p] = g;
  } else {
    adj[p].add_scaled(g);
  }
}

void accumulate(const Tape& tape, std::vector<Matrix>& adj, std::size_t p, Matrix&& g) {
  if (!tape.requires_grad(p)) return;
  if (adj[p].empty()) {
    adj[p] = std::move(g);
  } else {
    adj[p].add_scaled(g);
  }
}

// A * B^T
Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ar = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      auto br = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < ar.size(); ++k) s += ar[k] * br[k];
      out(i, j) = s;
    }
  }
  return out;
}

// A^T * B
Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  Matrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    auto ar = a.row(k);
    auto br = b.row(k);
    for (std::size_t i = 0; i < ar.size(); ++i) {
      const double aki = ar[i];
      if (aki == 0.0) continue;
      auto orow = out.row(i);
      for (std::size_t j = 0; j < br.size(); ++j) orow[j] += aki * br[j];
    }
  }
  return out;
}

template <typename F>
Matrix map(const Matrix& m, F&& f) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = f(m.data()[i]);
  return out;
}

template <typename F>
Var unary(Var a, const char* name, Matrix value, F&& local_grad) {
  const std::size_t pa = a.id;
  return a.tape->record(
      std::move(value), {pa},
      [pa, local_grad = std::forward<F>(local_grad)](const Tape& t, const Matrix& g,
                                                     std::vector<Matrix>& adj) {
        const Matrix& x = t.value(pa);
        Matrix dx(x.rows(), x.cols());
        for (std::size_t i = 0; i < x.size(); ++i) dx.data()[i] = g.data()[i] * local_grad(x.data()[i]);
        accumulate(t, adj, pa, std::move(dx));
      },
      name);
}

}  // namespace

Var matmul(Var a, Var b) {
  check_same_tape(a, b);
  check(a.cols() == b.rows(), "matmul", a, b);
  const std::size_t pa = a.id, pb = b.id;
  return a.tape->record(
      cgmn::matmul(a.value(), b.value()), {pa, pb},
      [pa, pb](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        if (t.requires_grad(pa)) accumulate(t, adj, pa, matmul_nt(g, t.value(pb)));
        if (t.requires_grad(pb)) accumulate(t, adj, pb, matmul_tn(t.value(pa), g));
      },
      "matmul");
}

Var add(Var a, Var b) {
  check_same_tape(a, b);
  check(a.value().same_shape(b.value()), "add", a, b);
  Matrix out = a.value();
  out.add_scaled(b.value());
  const std::size_t pa = a.id, pb = b.id;
  return a.tape->record(
      std::move(out), {pa, pb},
      [pa, pb](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        accumulate(t, adj, pa, g);
        accumulate(t, adj, pb, g);
      },
      "add");
}

Var sub(Var a, Var b) {
  check_same_tape(a, b);
  check(a.value().same_shape(b.value()), "sub", a, b);
  Matrix out = a.value();
  out.add_scaled(b.value(), -1.0);
  const std::size_t pa = a.id, pb = b.id;
  return a.tape->record(
      std::move(out), {pa, pb},
      [pa, pb](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        accumulate(t, adj, pa, g);
        if (t.requires_grad(pb)) accumulate(t, adj, pb, map(g, [](double v) { return -v; }));
      },
      "sub");
}

Var hadamard(Var a, Var b) {
  check_same_tape(a, b);
  check(a.value().same_shape(b.value()), "hadamard", a, b);
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= b.value().data()[i];
  const std::size_t pa = a.id, pb = b.id;
  return a.tape->record(
      std::move(out), {pa, pb},
      [pa, pb](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        if (t.requires_grad(pa)) {
          Matrix d = g;
          for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] *= t.value(pb).data()[i];
          accumulate(t, adj, pa, std::move(d));
        }
        if (t.requires_grad(pb)) {
          Matrix d = g;
          for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] *= t.value(pa).data()[i];
          accumulate(t, adj, pb, std::move(d));
        }
      },
      "hadamard");
}

Var scalar_mul(Var a, double s) {
  const std::size_t pa = a.id;
  return a.tape->record(
      map(a.value(), [s](double v) { return v * s; }), {pa},
      [pa, s](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        accumulate(t, adj, pa, map(g, [s](double v) { return v * s; }));
      },
      "scalar_mul");
}

Var add_scalar(Var a, double s) {
  const std::size_t pa = a.id;
  return a.tape->record(
      map(a.value(), [s](double v) { return v + s; }), {pa},
      [pa](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) { accumulate(t, adj, pa, g); },
      "add_scalar");
}

Var add_row(Var a, Var b) {
  check_same_tape(a, b);
  check(b.rows() == 1 && b.cols() == a.cols(), "add_row", a, b);
  Matrix out = a.value();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += b.value()(0, c);
  }
  const std::size_t pa = a.id, pb = b.id;
  return a.tape->record(
      std::move(out), {pa, pb},
      [pa, pb](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        accumulate(t, adj, pa, g);
        if (t.requires_grad(pb)) {
          Matrix d(1, g.cols());
          for (std::size_t r = 0; r < g.rows(); ++r)
            for (std::size_t c = 0; c < g.cols(); ++c) d(0, c) += g(r, c);
          accumulate(t, adj, pb, std::move(d));
        }
      },
      "add_row");
}

Var concat_cols(Var a, Var b) {
  check_same_tape(a, b);
  check(a.rows() == b.rows(), "concat_cols", a, b);
  const std::size_t ca = a.cols(), cb = b.cols();
  Matrix out(a.rows(), ca + cb);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto dst = out.row(r);
    auto ra = a.value().row(r);
    auto rb = b.value().row(r);
    std::copy(ra.begin(), ra.end(), dst.begin());
    std::copy(rb.begin(), rb.end(), dst.begin() + static_cast<std::ptrdiff_t>(ca));
  }
  const std::size_t pa = a.id, pb = b.id;
  return a.tape->record(
      std::move(out), {pa, pb},
      [pa, pb, ca, cb](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        if (t.requires_grad(pa)) {
          Matrix d(g.rows(), ca);
          for (std::size_t r = 0; r < g.rows(); ++r)
            for (std::size_t c = 0; c < ca; ++c) d(r, c) = g(r, c);
          accumulate(t, adj, pa, std::move(d));
        }
        if (t.requires_grad(pb)) {
          Matrix d(g.rows(), cb);
          for (std::size_t r = 0; r < g.rows(); ++r)
            for (std::size_t c = 0; c < cb; ++c) d(r, c) = g(r, ca + c);
          accumulate(t, adj, pb, std::move(d));
        }
      },
      "concat_cols");
}

Var transpose(Var a) {
  const std::size_t pa = a.id;
  return a.tape->record(
      a.value().transposed(), {pa},
      [pa](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        accumulate(t, adj, pa, g.transposed());
      },
      "transpose");
}

Var relu(Var a) {
  return unary(a, "relu", map(a.value(), [](double v) { return v > 0.0 ? v : 0.0; }),
               [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(Var a) {
  auto sig = [](double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  };
  return unary(a, "sigmoid", map(a.value(), sig), [sig](double x) {
    const double s = sig(x);
    return s * (1.0 - s);
  });
}

Var tanh(Var a) {
  return unary(a, "tanh", map(a.value(), [](double v) { return std::tanh(v); }), [](double x) {
    const double t = std::tanh(x);
    return 1.0 - t * t;
  });
}

Var exp(Var a) {
  return unary(a, "exp", map(a.value(), [](double v) { return std::exp(v); }),
               [](double x) { return std::exp(x); });
}

Var log(Var a) {
  return unary(a, "log", map(a.value(), [](double v) { return std::log(v); }),
               [](double x) { return 1.0 / x; });
}

Var square(Var a) {
  return unary(a, "square", map(a.value(), [](double v) { return v * v; }),
               [](double x) { return 2.0 * x; });
}

Var row_mean(Var a) {
  const std::size_t n = a.rows();
  if (n == 0) throw ShapeError("row_mean: no rows");
  Matrix out(1, a.cols());
  for (std::size_t r = 0; r < n; ++r) {
    auto row = a.value().row(r);
    for (std::size_t c = 0; c < row.size(); ++c) out(0, c) += row[c];
  }
  for (double& v : out.data()) v /= static_cast<double>(n);
  const std::size_t pa = a.id;
  return a.tape->record(
      std::move(out), {pa},
      [pa, n](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        Matrix d(n, g.cols());
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < g.cols(); ++c) d(r, c) = g(0, c) / static_cast<double>(n);
        accumulate(t, adj, pa, std::move(d));
      },
      "row_mean");
}

Var row_sum(Var a) {
  Matrix out(a.rows(), 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double s = 0.0;
    for (double v : a.value().row(r)) s += v;
    out(r, 0) = s;
  }
  const std::size_t pa = a.id, cols = a.cols();
  return a.tape->record(
      std::move(out), {pa},
      [pa, cols](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        Matrix d(g.rows(), cols);
        for (std::size_t r = 0; r < g.rows(); ++r)
          for (std::size_t c = 0; c < cols; ++c) d(r, c) = g(r, 0);
        accumulate(t, adj, pa, std::move(d));
      },
      "row_sum");
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const std::size_t pa = a.id;
  return a.tape->record(
      Matrix(1, 1, s), {pa},
      [pa](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        const Matrix& x = t.value(pa);
        accumulate(t, adj, pa, Matrix(x.rows(), x.cols(), g(0, 0)));
      },
      "sum");
}

Var mean(Var a) {
  if (a.value().empty()) throw ShapeError("mean: empty operand");
  return scalar_mul(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var diag(Var a) {
  if (a.rows() != a.cols()) throw ShapeError("diag: operand is " + a.value().shape_string());
  const std::size_t n = a.rows();
  Matrix out(n, 1);
  for (std::size_t i = 0; i < n; ++i) out(i, 0) = a.value()(i, i);
  const std::size_t pa = a.id;
  return a.tape->record(
      std::move(out), {pa},
      [pa, n](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = g(i, 0);
        accumulate(t, adj, pa, std::move(d));
      },
      "diag");
}

Var l2_normalize_rows(Var a) {
  const Matrix& x = a.value();
  Matrix out(x.rows(), x.cols());
  std::vector<double> norms(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double nr = norm(x.row(r));
    if (nr == 0.0) {
      throw DegenerateError("degenerate embedding: zero-norm row " + std::to_string(r), r);
    }
    norms[r] = nr;
    auto src = x.row(r);
    auto dst = out.row(r);
    for (std::size_t c = 0; c < src.size(); ++c) dst[c] = src[c] / nr;
  }
  const std::size_t pa = a.id;
  const std::size_t self = a.tape->size();
  return a.tape->record(
      std::move(out), {pa},
      [pa, self, norms = std::move(norms)](const Tape& t, const Matrix& g, std::vector<Matrix>& adj) {
        const Matrix& y = t.value(self);
        Matrix d(y.rows(), y.cols());
        for (std::size_t r = 0; r < y.rows(); ++r) {
          auto yr = y.row(r);
          auto gr = g.row(r);
          const double gy = dot(gr, yr);
          auto dr = d.row(r);
          for (std::size_t c = 0; c < yr.size(); ++c) dr[c] = (gr[c] - yr[c] * gy) / norms[r];
        }
        accumulate(t, adj, pa, std::move(d));
      },
      "l2_normalize_rows");
}

Var cosine_rows(Var a, Var b) {
  check(a.value().same_shape(b.value()), "cosine_rows", a, b);
  return row_sum(hadamard(l2_normalize_rows(a), l2_normalize_rows(b)));
}

Var cosine_matrix(Var a, Var b) {
  check(a.cols() == b.cols(), "cosine_matrix", a, b);
  return matmul(l2_normalize_rows(a), transpose(l2_normalize_rows(b)));
}

}  // namespace cgmn::diff
