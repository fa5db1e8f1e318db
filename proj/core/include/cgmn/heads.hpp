#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cgmn/encoder.hpp"
#include "cgmn/tape.hpp"

namespace cgmn {

// Fully connected network: hidden layers use `activation`, the output layer
// is linear (callers apply the sigmoid).
struct MlpParams {
  std::vector<Matrix> weights;  // in x out per layer
  std::vector<Matrix> biases;   // 1 x out per layer
  Activation activation = Activation::relu;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::vector<std::size_t> widths() const;  // input, hidden..., output
  void validate() const;

  // Glorot-uniform weights and zero biases. With zero_output the last layer
  // starts at zero.
  static MlpParams init(std::span<const std::size_t> widths, Activation activation,
                        std::uint64_t seed, bool zero_output = false);
};

// Tape nodes bound to an MlpParams.
struct MlpVars {
  std::vector<diff::Var> weights;
  std::vector<diff::Var> biases;

  static MlpVars bind(diff::Tape& tape, const MlpParams& p, bool trainable);
};

// Linear output of the MLP for each row of x.
diff::Var mlp_forward(diff::Var x, const MlpVars& mlp, Activation activation);

// Column-wise mean of node embeddings: (n x w) -> (1 x w).
diff::Var pool(diff::Var node_embeddings);
Matrix pool(const Matrix& node_embeddings);

// exp(-ged / (n1 + n2)), a similarity in (0, 1].
double normalized_ged(int ged, int n1, int n2);

// sigmoid(MLP(z1 ++ z2)); with `symmetrize` the mean over both orders.
diff::Var ged_head(diff::Var z1, diff::Var z2, const MlpVars& mlp, Activation activation,
                   bool symmetrize = false);
double ged_head(const Matrix& z1, const Matrix& z2, const MlpParams& mlp, bool symmetrize = false);

// cos(z1, z2) in [-1, 1].
double bsd_head(std::span<const double> z1, std::span<const double> z2);
int bsd_label(double score, double threshold = 0.0);

// Score -> normalized-GED map fitted on a small labeled subset. Inputs are
// standardized with the statistics of the fitting scores.
struct Calibration {
  MlpParams mlp;
  double input_mean = 0.0;
  double input_scale = 1.0;

  double apply(double score) const;
  std::vector<double> apply(std::span<const double> scores) const;
};

struct CalibrateOptions {
  std::size_t hidden = 16;
  std::size_t iterations = 3000;
  double lr = 1e-2;
  Activation activation = Activation::tanh;
  std::uint64_t seed = 0;
  bool monotone = true;  // keep the fitted map non-decreasing
};

// Fits a 1 -> hidden -> 1 sigmoid-output MLP by full-batch Adam on squared
// error. Requires at least 2 examples.
Calibration calibrate(std::span<const double> scores, std::span<const double> targets,
                      const CalibrateOptions& opts = {});

}  // namespace cgmn
