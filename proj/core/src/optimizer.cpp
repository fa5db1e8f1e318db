#include "cgmn/optimizer.hpp"

#include <cmath>

#include "cgmn/error.hpp"

namespace cgmn {

std::string to_string(OptimizerKind k) { return k == OptimizerKind::adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw ConfigError("train.optimizer must be 'adam' or 'sgd', got '" + s + "'");
}

Optimizer::Optimizer(OptimizerConfig cfg, std::span<const Matrix> shapes) : cfg_(cfg) {
  if (!(cfg_.lr > 0.0)) throw ConfigError("learning rate must be > 0");
  if (cfg_.kind == OptimizerKind::adam) {
    for (const auto& s : shapes) {
      m_.emplace_back(s.rows(), s.cols());
      v_.emplace_back(s.rows(), s.cols());
    }
  }
}

void Optimizer::step(std::span<Matrix* const> params, std::span<const Matrix> grads) {
  if (params.size() != grads.size()) throw ShapeError("optimizer: params/grads count mismatch");
  ++t_;
  if (cfg_.kind == OptimizerKind::sgd) {
    for (std::size_t i = 0; i < params.size(); ++i) params[i]->add_scaled(grads[i], -cfg_.lr);
    return;
  }
  if (params.size() != m_.size()) throw ShapeError("optimizer: parameter count changed");
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix& g = grads[i];
    if (!p.same_shape(g) || !p.same_shape(m_[i])) throw ShapeError("optimizer: shape mismatch");
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double gk = g.data()[k];
      double& m = m_[i].data()[k];
      double& v = v_[i].data()[k];
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * gk;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * gk * gk;
      p.data()[k] -= cfg_.lr * (m / bc1) / (std::sqrt(v / bc2) + cfg_.eps);
    }
  }
}

}  // namespace cgmn
