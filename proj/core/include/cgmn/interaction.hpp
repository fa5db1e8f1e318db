#pragma once

#include <span>
#include <string>

#include "cgmn/tape.hpp"

namespace cgmn {

enum class CrossGraphMode {
  vector,  // concatenate cosine-weighted sums of the partner's embeddings
  scalar,  // concatenate the plain sums of cosines
};

enum class NegativeSet {
  both,        // other nodes of the other view and of the own view: N = 2(n-1)
  inter_only,  // other nodes of the other view only: N = n-1
};

std::string to_string(CrossGraphMode m);
CrossGraphMode parse_cross_graph_mode(const std::string& s);
std::string to_string(NegativeSet s);
NegativeSet parse_negative_set(const std::string& s);

struct InteractionConfig {
  double tau = 0.5;
  bool cross_view = true;
  bool cross_graph = true;
  CrossGraphMode cross_graph_mode = CrossGraphMode::vector;
  NegativeSet negatives = NegativeSet::both;

  void validate() const;
};

// exp(cos(u, v) / tau). Throws DegenerateError on a zero vector.
double sim(std::span<const double> u, std::span<const double> v, double tau);

// Per-node contrastive term: -log(e^{c+/tau} / (e^{c+/tau} + sum_k e^{c_k/tau})).
double contrastive_term(double positive_cos, std::span<const double> negative_cos, double tau);

// Row u of the result is [h_u, sum_v cos(h_u, h_v) h_v] over the rows of
// `other_view`. (n x h), (k x h) -> (n x 2h).
diff::Var cross_view_interact(diff::Var view, diff::Var other_view);

// Row u: [hat_u, agg(hat_u, partner_a), agg(hat_u, partner_b)], where agg is
// the cosine-weighted sum of partner rows (vector mode, width 3w) or the sum
// of cosines (scalar mode, width w + 2).
diff::Var cross_graph_interact(diff::Var extended, diff::Var partner_a, diff::Var partner_b,
                               CrossGraphMode mode);

// Symmetric InfoNCE over two aligned views: node i of view_a is the positive
// of node i of view_b. Returns mean_u of (loss(u, v) + loss(v, u)) / 2.
// Requires at least 2 nodes.
diff::Var contrastive_loss(diff::Var view_a, diff::Var view_b, double tau,
                           NegativeSet negatives = NegativeSet::both);

}  // namespace cgmn
