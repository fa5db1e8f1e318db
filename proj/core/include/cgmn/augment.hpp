#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cgmn/graph.hpp"

namespace cgmn {

enum class MaskGranularity {
  column,  // one draw per feature dimension, shared by every node
  entry,   // one draw per (node, dimension)
};

struct AugmentConfig {
  double p_mask = 0.1;
  double p_drop = 0.1;
  std::uint64_t seed = 0;
  MaskGranularity granularity = MaskGranularity::column;

  void validate() const;
};

// Augmented copy of a graph plus the corruption that produced it. Views keep
// every node; only features are zeroed and edges removed.
struct GraphView {
  std::string base_id;
  Graph graph;
  std::vector<std::vector<int>> masked_dims;  // per node, sorted
  std::vector<Edge> dropped_edges;            // sorted subset of the base edges
};

// One view drawn from substream `stream` of cfg.seed.
GraphView make_view(const Graph& g, const AugmentConfig& cfg, std::uint64_t stream);

// Two views with independent draws (substreams 0 and 1) from the same config.
std::pair<GraphView, GraphView> make_views(const Graph& g, const AugmentConfig& cfg);

// View with no corruption.
GraphView identity_view(const Graph& g);

}  // namespace cgmn
