#include "cgmn/augment.hpp"

#include "cgmn/error.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

void AugmentConfig::validate() const {
  if (!(p_mask >= 0.0 && p_mask <= 1.0)) throw ConfigError("augment.p_mask must be in [0, 1]");
  if (!(p_drop >= 0.0 && p_drop <= 1.0)) throw ConfigError("augment.p_drop must be in [0, 1]");
}

GraphView make_view(const Graph& g, const AugmentConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  GraphView view;
  view.base_id = g.id;
  view.graph.id = g.id;
  view.graph.n = g.n;
  view.graph.labels = g.labels;
  view.graph.features = g.features;

  const std::size_t n = g.features.rows();
  const std::size_t d = g.features.cols();
  view.masked_dims.assign(n, {});

  Rng mask_rng(derive_seed(cfg.seed, {stream, 0}));
  if (cfg.granularity == MaskGranularity::column) {
    std::vector<int> cols;
    for (std::size_t c = 0; c < d; ++c)
      if (mask_rng.bernoulli(cfg.p_mask)) cols.push_back(static_cast<int>(c));
    for (std::size_t r = 0; r < n; ++r) {
      for (int c : cols) view.graph.features(r, static_cast<std::size_t>(c)) = 0.0;
      view.masked_dims[r] = cols;
    }
  } else {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        if (mask_rng.bernoulli(cfg.p_mask)) {
          view.graph.features(r, c) = 0.0;
          view.masked_dims[r].push_back(static_cast<int>(c));
        }
      }
    }
  }

  Rng drop_rng(derive_seed(cfg.seed, {stream, 1}));
  for (const auto& e : g.edges) {
    if (drop_rng.bernoulli(cfg.p_drop)) {
      view.dropped_edges.push_back(e);
    } else {
      view.graph.edges.push_back(e);
    }
  }
  return view;
}

std::pair<GraphView, GraphView> make_views(const Graph& g, const AugmentConfig& cfg) {
  return {make_view(g, cfg, 0), make_view(g, cfg, 1)};
}

GraphView identity_view(const Graph& g) {
  GraphView view;
  view.base_id = g.id;
  view.graph = g;
  view.masked_dims.assign(g.features.rows(), {});
  return view;
}

}  // namespace cgmn
