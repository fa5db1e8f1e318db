#pragma once

#include <span>
#include <string>
#include <vector>

#include "cgmn/matrix.hpp"

namespace cgmn {

enum class OptimizerKind { sgd, adam };

std::string to_string(OptimizerKind k);
OptimizerKind parse_optimizer(const std::string& s);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First-order optimizer over a fixed list of parameter matrices.
class Optimizer {
 public:
  Optimizer(OptimizerConfig cfg, std::span<const Matrix> shapes);

  // params[i] -= update(grads[i]). Shapes must match construction.
  void step(std::span<Matrix* const> params, std::span<const Matrix> grads);

  long steps() const noexcept { return t_; }
  const OptimizerConfig& config() const noexcept { return cfg_; }

 private:
  OptimizerConfig cfg_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long t_ = 0;
};

}  // namespace cgmn
