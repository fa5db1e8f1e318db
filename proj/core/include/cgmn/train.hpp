#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgmn/config.hpp"
#include "cgmn/graph.hpp"
#include "cgmn/model.hpp"

namespace cgmn {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  int version = kCheckpointVersion;
  Config config;
  ModelParams params;
  int epoch = 0;
  std::vector<double> loss_history;  // mean training loss per epoch
};

// Seed of the augmentation draw for one pair in one epoch.
std::uint64_t view_seed(const Config& cfg, std::size_t epoch, std::size_t pair_index);

struct PairGradient {
  double loss = 0.0;
  int terms = 0;  // graphs that contributed a contrastive term
  std::vector<Matrix> grads;  // one per GCN layer
};

// Loss and encoder gradient for one pair under the given views.
PairGradient pair_gradient(const GcnParams& gcn, const PairViews& views, const InteractionConfig& cfg);

struct BatchGradient {
  double loss = 0.0;  // mean over contributing pairs
  std::size_t pairs = 0;
  std::vector<Matrix> grads;  // mean over contributing pairs
};

// Per-pair gradients on up to `threads` workers, summed in pair order.
BatchGradient batch_gradient(const GcnParams& gcn, const Dataset& data,
                             std::span<const std::size_t> batch, const Config& cfg, std::size_t epoch,
                             unsigned threads);

// Optional per-epoch observer (epoch, mean loss).
using EpochCallback = std::function<void(int epoch, double loss)>;

// Contrastive training of the encoder on `train_idx`, followed (GED task) by
// fitting the score head and calibration on a label_fraction subset of the
// labeled training pairs (skipped when fewer than two pairs carry a ged).
// Throws DivergenceError on a non-finite loss.
Checkpoint train(const Dataset& data, std::span<const std::size_t> train_idx, const Config& cfg,
                 const EpochCallback& on_epoch = {});

// Fits the GED score path (ged head when head.ged_score = mlp, then the
// calibration map) on `labeled_idx` with the encoder frozen.
void fit_ged_scoring(ModelParams& params, const Dataset& data, std::span<const std::size_t> labeled_idx,
                     const Config& cfg);

// Indices of the labeled subset used for calibration.
std::vector<std::size_t> calibration_subset(const Dataset& data, std::span<const std::size_t> train_idx,
                                            const Config& cfg);

// Uncalibrated similarity score of one pair (cosine or ged head).
double raw_ged_score(const ModelParams& params, const Config& cfg, const Graph& g1, const Graph& g2);

struct Prediction {
  std::size_t pair = 0;
  double score = 0.0;  // calibrated normalized-GED estimate (ged) or cosine (bsd)
  std::optional<int> label;  // bsd decision
};

std::vector<Prediction> predict(const Checkpoint& ckpt, const Dataset& data,
                                std::span<const std::size_t> idx, Task task);

struct MetricsReport {
  Task task = Task::ged;
  std::size_t count = 0;
  std::optional<double> mse;
  std::optional<double> rho;
  std::optional<double> tau;
  std::optional<double> p_at_10;
  std::optional<double> p_at_20;
  std::optional<double> auc;
  std::optional<double> accuracy;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// p@k over queries formed from the pairs: each graph queries the graphs it is
// paired with. k is clamped to the candidate count; queries with fewer than
// two candidates are skipped. Empty when no query qualifies.
std::optional<double> mean_precision_at_k(const Dataset& data, std::span<const std::size_t> idx,
                                          std::span<const double> predicted,
                                          std::span<const double> truth, std::size_t k);

MetricsReport evaluate(const Checkpoint& ckpt, const Dataset& data, std::span<const std::size_t> idx,
                       Task task);

}  // namespace cgmn
