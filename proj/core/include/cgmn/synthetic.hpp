#pragma once

#include <cstdint>
#include <vector>

#include "cgmn/augment.hpp"
#include "cgmn/ged.hpp"
#include "cgmn/graph.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

struct SyntheticConfig {
  int count = 100;        // number of pairs (2 * count graphs)
  int n_min = 5;
  int n_max = 8;
  int num_labels = 4;     // one-hot feature width; 1 = unlabeled, constant features
  int edit_budget = 4;    // edits per pair drawn uniformly from [0, edit_budget]
  double extra_edge_prob = 0.2;
  std::uint64_t seed = 0;
  bool label_ged = true;  // fill pair GED with the exact oracle
  int node_limit = kDefaultGedNodeLimit;
  unsigned threads = 1;

  void validate() const;
};

struct SyntheticPairs {
  Dataset dataset;
  // Number of edits applied to produce each pair; an upper bound on its GED.
  std::vector<int> applied_edits;
};

// Random connected base graph: a random spanning tree plus independent extra
// edges.
Graph random_graph(const std::string& id, int n, int num_labels, double extra_edge_prob,
                   Rng& rng);

// Pairs (g, g') where g' is g after k random node/edge insertions and
// deletions (nodes permuted afterwards). Infeasible edits are redrawn; 100
// consecutive failures raise DataError.
SyntheticPairs generate_synthetic_pairs(const SyntheticConfig& cfg);

struct BsdConfig {
  int count = 100;  // pairs; positives and negatives alternate
  int n_min = 5;
  int n_max = 8;
  int num_labels = 4;
  double extra_edge_prob = 0.2;
  AugmentConfig corruption{0.1, 0.2, 0, MaskGranularity::column};
  std::uint64_t seed = 0;
};

// Binary-similarity pairs: +1 pairs hold a base graph and an augmented copy of
// it, -1 pairs hold two independently drawn graphs.
Dataset generate_bsd_pairs(const BsdConfig& cfg);

}  // namespace cgmn
