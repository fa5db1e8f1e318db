#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cgmn/graph.hpp"
#include "cgmn/tape.hpp"

namespace cgmn {

enum class Activation { relu, tanh, identity };

std::string to_string(Activation a);
Activation parse_activation(const std::string& name);

// Stacked GCN weights W^0..W^{L-1}; shapes chain d -> h -> ... -> h.
// Hidden layers use `activation`; the last layer is linear. No biases.
struct GcnParams {
  std::vector<Matrix> weights;
  Activation activation = Activation::relu;

  std::size_t layers() const noexcept { return weights.size(); }
  std::size_t input_dim() const;
  std::size_t output_dim() const;
  void validate() const;

  // Glorot-uniform init: entries in +-sqrt(6 / (fan_in + fan_out)).
  static GcnParams init(std::size_t input_dim, std::size_t hidden, std::size_t layers,
                        Activation activation, std::uint64_t seed);
};

// D^{-1/2} (A + I) D^{-1/2}, D the degree matrix of A + I.
Matrix normalize_adjacency(const Graph& g);

// True when some row of A_hat X is zero: such a node has a zero embedding
// at every layer, which cosine cannot handle.
bool has_dead_node(const Graph& g);

// Applies a hidden-layer activation on the tape.
diff::Var activate(diff::Var x, Activation a);

// H^0 = X, H^l = act(A_hat H^{l-1} W^{l-1}); returns H^L (n x h).
// `weights` are the tape nodes bound to the layer matrices.
diff::Var encode(diff::Tape& tape, const Graph& g, std::span<const diff::Var> weights,
                 Activation activation);

// Tape-free convenience for inference and tests.
Matrix encode(const Graph& g, const GcnParams& params);

}  // namespace cgmn
