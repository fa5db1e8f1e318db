#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cgmn/tape.hpp"

namespace cgmn::diff {

struct GradCheckOptions {
  double eps = 1e-5;
  double tol = 1e-6;
  // Denominator floor for the relative error, so coordinates whose true
  // gradient is zero are judged on absolute error.
  double abs_floor = 1e-6;
};

// Location of a coordinate within the checked parameter list.
struct Coord {
  std::size_t param = 0;
  std::size_t index = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  Coord worst;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
  // Coordinates where the one-sided slopes disagree (a kink within the step);
  // excluded from max_rel_error.
  std::vector<Coord> nondifferentiable;
  bool pass = false;
};

// Scalar function of a list of parameter matrices, recorded on `tape`.
using ParamFn = std::function<Var(Tape& tape, std::span<const Var> params)>;
using UnaryFn = std::function<Var(Tape& tape, Var x)>;

// Compares reverse-mode gradients of `f` against central differences for
// every coordinate of every parameter.
GradCheckReport grad_check(const ParamFn& f, std::span<const Matrix> params,
                           const GradCheckOptions& opts = {});
GradCheckReport grad_check(const UnaryFn& f, const Matrix& at, const GradCheckOptions& opts = {});

}  // namespace cgmn::diff
