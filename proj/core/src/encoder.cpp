#include "cgmn/encoder.hpp"

#include <cmath>

#include "cgmn/error.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "?";
}

Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity" || name == "linear") return Activation::identity;
  throw ConfigError("unknown activation '" + name + "'");
}

std::size_t GcnParams::input_dim() const {
  if (weights.empty()) throw ConfigError("GcnParams: no layers");
  return weights.front().rows();
}

std::size_t GcnParams::output_dim() const {
  if (weights.empty()) throw ConfigError("GcnParams: no layers");
  return weights.back().cols();
}

void GcnParams::validate() const {
  if (weights.empty()) throw ConfigError("GcnParams: at least one layer required");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (l > 0 && weights[l].rows() != weights[l - 1].cols()) {
      throw ShapeError("GcnParams: layer " + std::to_string(l) + " input width " +
                       std::to_string(weights[l].rows()) + " != previous output width " +
                       std::to_string(weights[l - 1].cols()));
    }
    if (!weights[l].all_finite()) throw NumericError("GcnParams: non-finite weight");
  }
}

GcnParams GcnParams::init(std::size_t input_dim, std::size_t hidden, std::size_t layers,
                          Activation activation, std::uint64_t seed) {
  if (layers < 1) throw ConfigError("model.layers must be >= 1");
  if (input_dim < 1 || hidden < 1) throw ConfigError("model dimensions must be >= 1");
  GcnParams p;
  p.activation = activation;
  Rng rng(derive_seed(seed, {0x6c1u}));
  std::size_t in = input_dim;
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix w(in, hidden);
    const double bound = std::sqrt(6.0 / static_cast<double>(in + hidden));
    for (double& v : w.data()) v = rng.uniform(-bound, bound);
    p.weights.push_back(std::move(w));
    in = hidden;
  }
  return p;
}

Matrix normalize_adjacency(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n);
  Matrix a = g.adjacency();
  for (std::size_t i = 0; i < n; ++i) a(i, i) += 1.0;
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (double v : a.row(i)) deg += v;
    inv_sqrt[i] = 1.0 / std::sqrt(deg);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv_sqrt[i] * inv_sqrt[j];
  return a;
}

diff::Var activate(diff::Var x, Activation a) {
  switch (a) {
    case Activation::relu: return diff::relu(x);
    case Activation::tanh: return diff::tanh(x);
    case Activation::identity: return x;
  }
  return x;
}

diff::Var encode(diff::Tape& tape, const Graph& g, std::span<const diff::Var> weights,
                 Activation activation) {
  if (weights.empty()) throw ConfigError("encode: no layers");
  if (g.feature_dim() != weights.front().rows()) {
    throw ShapeError("encode: graph '" + g.id + "' has feature dimension " +
                     std::to_string(g.feature_dim()) + ", encoder expects " +
                     std::to_string(weights.front().rows()));
  }
  const diff::Var adj = tape.constant(normalize_adjacency(g));
  diff::Var h = tape.constant(g.features);
  for (std::size_t l = 0; l < weights.size(); ++l) {
    h = diff::matmul(adj, diff::matmul(h, weights[l]));
    if (l + 1 < weights.size()) h = activate(h, activation);
  }
  return h;
}

Matrix encode(const Graph& g, const GcnParams& params) {
  diff::Tape tape;
  std::vector<diff::Var> w;
  for (const auto& m : params.weights) w.push_back(tape.constant(m));
  return encode(tape, g, w, params.activation).value();
}

bool has_dead_node(const Graph& g) {
  const Matrix propagated = matmul(normalize_adjacency(g), g.features);
  for (std::size_t r = 0; r < propagated.rows(); ++r)
    if (norm(propagated.row(r)) == 0.0) return true;
  return false;
}

}  // namespace cgmn
