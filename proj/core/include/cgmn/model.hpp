#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cgmn/augment.hpp"
#include "cgmn/config.hpp"
#include "cgmn/encoder.hpp"
#include "cgmn/heads.hpp"
#include "cgmn/interaction.hpp"
#include "cgmn/tape.hpp"

namespace cgmn {

// Everything a trained model carries.
struct ModelParams {
  GcnParams gcn;
  MlpParams ged_head;
  std::optional<Calibration> calibration;

  // Fresh parameters for graphs with `input_dim` features.
  static ModelParams init(const Config& cfg, std::size_t input_dim);
};

// Width of the matched node embeddings for an encoder of width `hidden`.
std::size_t matched_dim(std::size_t hidden, const InteractionConfig& cfg);

// The two augmented views of both graphs of a pair.
struct PairViews {
  GraphView g1a, g1b, g2a, g2b;
};


// Draws views for both graphs from `seed`. A view with a dead node is redrawn
// from the next substream (up to 100 attempts).
PairViews draw_views(const Graph& g1, const Graph& g2, const AugmentConfig& aug, std::uint64_t seed);

// Views equal to the original graphs (inference).
PairViews identity_views(const Graph& g1, const Graph& g2);

// Node embeddings after cross-view and cross-graph interaction.
struct MatchedEmbeddings {
  diff::Var g1a, g1b, g2a, g2b;
};

MatchedEmbeddings match_pair(diff::Tape& tape, std::span<const diff::Var> gcn_weights,
                             Activation activation, const PairViews& views,
                             const InteractionConfig& cfg);

// Contrastive loss of both graphs of a pair (sum of the two per-graph terms).
// Graphs with fewer than 2 nodes contribute nothing; `terms` receives the
// number of contributing graphs.
diff::Var pair_loss(diff::Tape& tape, const MatchedEmbeddings& m, const InteractionConfig& cfg,
                    int* terms = nullptr);

// Pooled graph-level embeddings (1 x w each) with augmentation disabled.
struct PairEmbedding {
  Matrix z1;
  Matrix z2;
};

PairEmbedding embed_pair(const GcnParams& gcn, const Graph& g1, const Graph& g2,
                         const InteractionConfig& cfg);

}  // namespace cgmn
