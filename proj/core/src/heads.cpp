#include "cgmn/heads.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cgmn/error.hpp"
#include "cgmn/optimizer.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

using diff::Var;

std::size_t MlpParams::input_dim() const {
  if (weights.empty()) throw ConfigError("MlpParams: no layers");
  return weights.front().rows();
}

std::size_t MlpParams::output_dim() const {
  if (weights.empty()) throw ConfigError("MlpParams: no layers");
  return weights.back().cols();
}

std::vector<std::size_t> MlpParams::widths() const {
  std::vector<std::size_t> w;
  if (weights.empty()) return w;
  w.push_back(weights.front().rows());
  for (const auto& m : weights) w.push_back(m.cols());
  return w;
}

void MlpParams::validate() const {
  if (weights.empty()) throw ConfigError("MlpParams: at least one layer required");
  if (weights.size() != biases.size()) throw ShapeError("MlpParams: weight/bias count mismatch");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (l > 0 && weights[l].rows() != weights[l - 1].cols())
      throw ShapeError("MlpParams: layer " + std::to_string(l) + " does not chain");
    if (biases[l].rows() != 1 || biases[l].cols() != weights[l].cols())
      throw ShapeError("MlpParams: bias " + std::to_string(l) + " has wrong shape");
    if (!weights[l].all_finite() || !biases[l].all_finite())
      throw NumericError("MlpParams: non-finite parameter");
  }
}

MlpParams MlpParams::init(std::span<const std::size_t> widths, Activation activation,
                          std::uint64_t seed, bool zero_output) {
  if (widths.size() < 2) throw ConfigError("MlpParams::init: need input and output widths");
  MlpParams p;
  p.activation = activation;
  Rng rng(derive_seed(seed, {0x31bu}));
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::size_t in = widths[l], out = widths[l + 1];
    if (in == 0 || out == 0) throw ConfigError("MlpParams::init: zero width");
    Matrix w(in, out);
    const bool last = l + 2 == widths.size();
    if (!(last && zero_output)) {
      const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
      for (double& v : w.data()) v = rng.uniform(-bound, bound);
    }
    p.weights.push_back(std::move(w));
    p.biases.emplace_back(1, out);
  }
  return p;
}

MlpVars MlpVars::bind(diff::Tape& tape, const MlpParams& p, bool trainable) {
  MlpVars v;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    v.weights.push_back(trainable ? tape.variable(p.weights[l]) : tape.constant(p.weights[l]));
    v.biases.push_back(trainable ? tape.variable(p.biases[l]) : tape.constant(p.biases[l]));
  }
  return v;
}

Var mlp_forward(Var x, const MlpVars& mlp, Activation activation) {
  if (mlp.weights.empty()) throw ConfigError("mlp_forward: no layers");
  if (x.cols() != mlp.weights.front().rows()) {
    throw ShapeError("mlp_forward: input width " + std::to_string(x.cols()) + ", expected " +
                     std::to_string(mlp.weights.front().rows()));
  }
  Var h = x;
  for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
    h = diff::add_row(diff::matmul(h, mlp.weights[l]), mlp.biases[l]);
    if (l + 1 < mlp.weights.size()) h = activate(h, activation);
  }
  return h;
}

Var pool(Var node_embeddings) {
  if (node_embeddings.rows() == 0) throw DataError("pool: empty graph");
  return diff::row_mean(node_embeddings);
}

Matrix pool(const Matrix& node_embeddings) {
  diff::Tape tape;
  return pool(tape.constant(node_embeddings)).value();
}

double normalized_ged(int ged, int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw DataError("normalized_ged: graph sizes must be >= 1");
  if (ged < 0) throw DataError("normalized_ged: negative GED");
  return std::exp(-static_cast<double>(ged) / static_cast<double>(n1 + n2));
}

Var ged_head(Var z1, Var z2, const MlpVars& mlp, Activation activation, bool symmetrize) {
  const Var forward = diff::sigmoid(mlp_forward(diff::concat_cols(z1, z2), mlp, activation));
  if (!symmetrize) return forward;
  const Var backward = diff::sigmoid(mlp_forward(diff::concat_cols(z2, z1), mlp, activation));
  return diff::scalar_mul(diff::add(forward, backward), 0.5);
}

double ged_head(const Matrix& z1, const Matrix& z2, const MlpParams& mlp, bool symmetrize) {
  diff::Tape tape;
  const auto vars = MlpVars::bind(tape, mlp, false);
  return ged_head(tape.constant(z1), tape.constant(z2), vars, mlp.activation, symmetrize).scalar();
}

double bsd_head(std::span<const double> z1, std::span<const double> z2) { return cosine(z1, z2); }

int bsd_label(double score, double threshold) { return score > threshold ? 1 : -1; }

double Calibration::apply(double score) const {
  const double x = (score - input_mean) / input_scale;
  diff::Tape tape;
  const auto vars = MlpVars::bind(tape, mlp, false);
  return diff::sigmoid(mlp_forward(tape.constant(Matrix(1, 1, x)), vars, mlp.activation)).scalar();
}

std::vector<double> Calibration::apply(std::span<const double> scores) const {
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(apply(s));
  return out;
}

Calibration calibrate(std::span<const double> scores, std::span<const double> targets,
                      const CalibrateOptions& opts) {
  if (scores.size() != targets.size()) throw ShapeError("calibrate: scores/targets length mismatch");
  if (scores.size() < 2) throw DataError("calibrate: fewer than 2 labeled examples");
  const auto n = static_cast<double>(scores.size());

  Calibration cal;
  cal.input_mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  double var = 0.0;
  for (double s : scores) var += (s - cal.input_mean) * (s - cal.input_mean);
  cal.input_scale = std::sqrt(var / n);
  if (!(cal.input_scale > 1e-12)) cal.input_scale = 1.0;

  const std::size_t widths[] = {1, opts.hidden, 1};
  cal.mlp = MlpParams::init(widths, opts.activation, opts.seed, /*zero_output=*/true);
  // Non-negative weights with a monotone activation give a non-decreasing map,
  // so calibration rescales scores without reordering them.
  auto project = [&] {
    if (!opts.monotone) return;
    for (auto& w : cal.mlp.weights)
      for (double& v : w.data()) v = std::max(v, 0.0);
  };
  for (double& v : cal.mlp.weights.front().data()) v = opts.monotone ? std::abs(v) : v;
  double target_mean = std::accumulate(targets.begin(), targets.end(), 0.0) / n;
  target_mean = std::min(std::max(target_mean, 1e-6), 1.0 - 1e-6);
  cal.mlp.biases.back()(0, 0) = std::log(target_mean / (1.0 - target_mean));

  Matrix x(scores.size(), 1), y(scores.size(), 1);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    x(i, 0) = (scores[i] - cal.input_mean) / cal.input_scale;
    y(i, 0) = targets[i];
  }

  std::vector<Matrix> shapes;
  for (std::size_t l = 0; l < cal.mlp.weights.size(); ++l) {
    shapes.push_back(cal.mlp.weights[l]);
    shapes.push_back(cal.mlp.biases[l]);
  }
  Optimizer opt({OptimizerKind::adam, opts.lr}, shapes);
  std::vector<Matrix*> params;
  for (std::size_t l = 0; l < cal.mlp.weights.size(); ++l) {
    params.push_back(&cal.mlp.weights[l]);
    params.push_back(&cal.mlp.biases[l]);
  }

  for (std::size_t it = 0; it < opts.iterations; ++it) {
    diff::Tape tape;
    const auto vars = MlpVars::bind(tape, cal.mlp, true);
    const Var pred = diff::sigmoid(mlp_forward(tape.constant(x), vars, cal.mlp.activation));
    const Var loss = diff::mean(diff::square(diff::sub(pred, tape.constant(y))));
    tape.backward(loss);
    std::vector<Matrix> grads;
    for (std::size_t l = 0; l < vars.weights.size(); ++l) {
      grads.push_back(vars.weights[l].grad());
      grads.push_back(vars.biases[l].grad());
    }
    opt.step(params, grads);
    project();
  }
  return cal;
}

}  // namespace cgmn
