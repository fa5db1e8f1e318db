#include "cgmn/interaction.hpp"

#include <cmath>

#include "cgmn/error.hpp"
#include "cgmn/matrix.hpp"

namespace cgmn {

using diff::Var;

std::string to_string(CrossGraphMode m) { return m == CrossGraphMode::vector ? "vector" : "scalar"; }

CrossGraphMode parse_cross_graph_mode(const std::string& s) {
  if (s == "vector") return CrossGraphMode::vector;
  if (s == "scalar") return CrossGraphMode::scalar;
  throw ConfigError("model.cross_graph_mode must be 'vector' or 'scalar', got '" + s + "'");
}

std::string to_string(NegativeSet s) { return s == NegativeSet::both ? "both" : "inter_only"; }

NegativeSet parse_negative_set(const std::string& s) {
  if (s == "both") return NegativeSet::both;
  if (s == "inter_only") return NegativeSet::inter_only;
  throw ConfigError("loss.negatives must be 'both' or 'inter_only', got '" + s + "'");
}

void InteractionConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("loss.tau must be > 0");
}

double sim(std::span<const double> u, std::span<const double> v, double tau) {
  if (!(tau > 0.0)) throw ConfigError("sim: tau must be > 0");
  return std::exp(cosine(u, v) / tau);
}

double contrastive_term(double positive_cos, std::span<const double> negative_cos, double tau) {
  const double pos = std::exp(positive_cos / tau);
  double denom = pos;
  for (double c : negative_cos) denom += std::exp(c / tau);
  return -std::log(pos / denom);
}

Var cross_view_interact(Var view, Var other_view) {
  const Var weights = diff::cosine_matrix(view, other_view);
  return diff::concat_cols(view, diff::matmul(weights, other_view));
}

Var cross_graph_interact(Var extended, Var partner_a, Var partner_b, CrossGraphMode mode) {
  if (partner_a.cols() != extended.cols() || partner_b.cols() != extended.cols()) {
    throw ShapeError("cross_graph_interact: embedding widths differ (" +
                     std::to_string(extended.cols()) + ", " + std::to_string(partner_a.cols()) +
                     ", " + std::to_string(partner_b.cols()) + ")");
  }
  const Var ca = diff::cosine_matrix(extended, partner_a);
  const Var cb = diff::cosine_matrix(extended, partner_b);
  if (mode == CrossGraphMode::vector) {
    return diff::concat_cols(diff::concat_cols(extended, diff::matmul(ca, partner_a)),
                             diff::matmul(cb, partner_b));
  }
  return diff::concat_cols(diff::concat_cols(extended, diff::row_sum(ca)), diff::row_sum(cb));
}

namespace {

// Per-node loss of `anchor` rows against `other` rows; `intra` holds the
// anchor view's own cosine matrix when intra-view negatives are used.
Var directional_loss(Var cross, Var intra, bool use_intra, double tau, const Matrix& off_diag) {
  diff::Tape& tape = *cross.tape;
  Var denom = diff::row_sum(diff::exp(diff::scalar_mul(cross, 1.0 / tau)));
  if (use_intra) {
    const Var masked = diff::hadamard(diff::exp(diff::scalar_mul(intra, 1.0 / tau)),
                                      tape.constant(off_diag));
    denom = diff::add(denom, diff::row_sum(masked));
  }
  return diff::sub(diff::log(denom), diff::scalar_mul(diff::diag(cross), 1.0 / tau));
}

}  // namespace

Var contrastive_loss(Var view_a, Var view_b, double tau, NegativeSet negatives) {
  if (!(tau > 0.0)) throw ConfigError("contrastive_loss: tau must be > 0");
  if (!view_a.value().same_shape(view_b.value())) {
    throw ShapeError("contrastive_loss: views differ in shape " + view_a.value().shape_string() +
                     " vs " + view_b.value().shape_string());
  }
  const std::size_t n = view_a.rows();
  if (n < 2) throw DataError("contrastive_loss: fewer than 2 nodes, no negatives available");

  Matrix off_diag(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) off_diag(i, i) = 0.0;

  const bool use_intra = negatives == NegativeSet::both;
  const Var za = diff::l2_normalize_rows(view_a);
  const Var zb = diff::l2_normalize_rows(view_b);
  const Var cross_ab = diff::matmul(za, diff::transpose(zb));
  const Var cross_ba = diff::transpose(cross_ab);
  Var intra_a = cross_ab, intra_b = cross_ab;
  if (use_intra) {
    intra_a = diff::matmul(za, diff::transpose(za));
    intra_b = diff::matmul(zb, diff::transpose(zb));
  }
  const Var loss_ab = directional_loss(cross_ab, intra_a, use_intra, tau, off_diag);
  const Var loss_ba = directional_loss(cross_ba, intra_b, use_intra, tau, off_diag);
  return diff::scalar_mul(diff::mean(diff::add(loss_ab, loss_ba)), 0.5);
}

}  // namespace cgmn
