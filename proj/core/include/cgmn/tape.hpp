#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cgmn/matrix.hpp"

namespace cgmn::diff {

class Tape;

// Handle to a node on a tape. Cheap to copy; valid while the tape lives.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Matrix& value() const;
  const Matrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  // Value of a 1x1 node.
  double scalar() const;
};

// Reverse-mode recording of dense matrix operations. Nodes are appended in
// evaluation order, so parents always precede children.
class Tape {
 public:
  // Receives the adjoint of the node and accumulates into its parents'
  // adjoints (`adj` is indexed by node id).
  using BackwardFn = std::function<void(const Tape&, const Matrix& grad, std::vector<Matrix>& adj)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  // Leaf whose gradient is accumulated by backward().
  Var variable(Matrix value);

  // Records an op result. Throws NumericError if `value` has NaN/Inf.
  Var record(Matrix value, std::vector<std::size_t> parents, BackwardFn backward,
             const char* op_name);

  // Populates the gradient of every requires-grad leaf with d(loss)/d(leaf).
  // Repeated calls accumulate until zero_grad().
  void backward(Var loss);
  void zero_grad();

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  const Matrix& grad(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;  // populated for leaves only
    bool requires_grad = false;
    bool leaf = false;
    std::vector<std::size_t> parents;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

// Forward ops. Each one checks shapes and registers its backward rule.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
Var scalar_mul(Var a, double s);
Var add_scalar(Var a, double s);
// a (n x m) + b (1 x m) broadcast over rows.
Var add_row(Var a, Var b);
Var concat_cols(Var a, Var b);
Var transpose(Var a);
Var relu(Var a);
Var sigmoid(Var a);
Var tanh(Var a);
Var exp(Var a);
Var log(Var a);
Var square(Var a);
// Column-wise mean over rows: (n x m) -> (1 x m).
Var row_mean(Var a);
// Sum across columns: (n x m) -> (n x 1).
Var row_sum(Var a);
Var sum(Var a);
Var mean(Var a);
// Diagonal of a square matrix as a column: (n x n) -> (n x 1).
Var diag(Var a);
// Each row scaled to unit L2 norm. Zero rows raise DegenerateError.
Var l2_normalize_rows(Var a);
// Cosine between corresponding rows: (n x m), (n x m) -> (n x 1).
Var cosine_rows(Var a, Var b);
// All-pairs cosine: (n x m), (k x m) -> (n x k).
Var cosine_matrix(Var a, Var b);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, double s) { return scalar_mul(a, s); }
inline Var operator*(double s, Var a) { return scalar_mul(a, s); }

}  // namespace cgmn::diff
