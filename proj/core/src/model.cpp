#include "cgmn/model.hpp"

#include "cgmn/error.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

using diff::Var;

ModelParams ModelParams::init(const Config& cfg, std::size_t input_dim) {
  ModelParams p;
  p.gcn = GcnParams::init(input_dim, static_cast<std::size_t>(cfg.hidden),
                          static_cast<std::size_t>(cfg.layers), cfg.activation, cfg.seed);
  std::vector<std::size_t> widths{2 * matched_dim(static_cast<std::size_t>(cfg.hidden), cfg.interaction)};
  for (auto w : cfg.ged_mlp) widths.push_back(static_cast<std::size_t>(w));
  widths.push_back(1);
  p.ged_head = MlpParams::init(widths, Activation::relu, derive_seed(cfg.seed, {0x4edu}));
  return p;
}

std::size_t matched_dim(std::size_t hidden, const InteractionConfig& cfg) {
  const std::size_t extended = cfg.cross_view ? 2 * hidden : hidden;
  if (!cfg.cross_graph) return extended;
  return cfg.cross_graph_mode == CrossGraphMode::vector ? 3 * extended : extended + 2;
}

namespace {

GraphView live_view(const Graph& g, const AugmentConfig& aug, std::uint64_t seed) {
  if (has_dead_node(g)) {
    throw DataError("graph '" + g.id + "' has a node whose neighbourhood features are all zero");
  }
  AugmentConfig cfg = aug;
  cfg.seed = seed;
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    GraphView v = make_view(g, cfg, attempt);
    if (!has_dead_node(v.graph)) return v;
  }
  throw DegenerateError("graph '" + g.id + "': 100 augmented views in a row had a dead node", 0);
}

}  // namespace

PairViews draw_views(const Graph& g1, const Graph& g2, const AugmentConfig& aug, std::uint64_t seed) {
  return {live_view(g1, aug, derive_seed(seed, {1, 0})), live_view(g1, aug, derive_seed(seed, {1, 1})),
          live_view(g2, aug, derive_seed(seed, {2, 0})), live_view(g2, aug, derive_seed(seed, {2, 1}))};
}

PairViews identity_views(const Graph& g1, const Graph& g2) {
  return {identity_view(g1), identity_view(g1), identity_view(g2), identity_view(g2)};
}

MatchedEmbeddings match_pair(diff::Tape& tape, std::span<const Var> gcn_weights, Activation activation,
                             const PairViews& views, const InteractionConfig& cfg) {
  const Var h1a = encode(tape, views.g1a.graph, gcn_weights, activation);
  const Var h1b = encode(tape, views.g1b.graph, gcn_weights, activation);
  const Var h2a = encode(tape, views.g2a.graph, gcn_weights, activation);
  const Var h2b = encode(tape, views.g2b.graph, gcn_weights, activation);

  MatchedEmbeddings ext{h1a, h1b, h2a, h2b};
  if (cfg.cross_view) {
    ext = {cross_view_interact(h1a, h1b), cross_view_interact(h1b, h1a),
           cross_view_interact(h2a, h2b), cross_view_interact(h2b, h2a)};
  }
  if (!cfg.cross_graph) return ext;
  const auto mode = cfg.cross_graph_mode;
  return {cross_graph_interact(ext.g1a, ext.g2a, ext.g2b, mode),
          cross_graph_interact(ext.g1b, ext.g2a, ext.g2b, mode),
          cross_graph_interact(ext.g2a, ext.g1a, ext.g1b, mode),
          cross_graph_interact(ext.g2b, ext.g1a, ext.g1b, mode)};
}

Var pair_loss(diff::Tape& tape, const MatchedEmbeddings& m, const InteractionConfig& cfg, int* terms) {
  Var total = tape.constant(Matrix(1, 1, 0.0));
  int count = 0;
  if (m.g1a.rows() >= 2) {
    total = diff::add(total, contrastive_loss(m.g1a, m.g1b, cfg.tau, cfg.negatives));
    ++count;
  }
  if (m.g2a.rows() >= 2) {
    total = diff::add(total, contrastive_loss(m.g2a, m.g2b, cfg.tau, cfg.negatives));
    ++count;
  }
  if (terms) *terms = count;
  return total;
}

PairEmbedding embed_pair(const GcnParams& gcn, const Graph& g1, const Graph& g2,
                         const InteractionConfig& cfg) {
  diff::Tape tape;
  std::vector<Var> w;
  for (const auto& m : gcn.weights) w.push_back(tape.constant(m));
  const auto matched = match_pair(tape, w, gcn.activation, identity_views(g1, g2), cfg);
  return {pool(matched.g1a).value(), pool(matched.g2a).value()};
}

}  // namespace cgmn
