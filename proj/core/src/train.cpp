#include "cgmn/train.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "cgmn/error.hpp"
#include "cgmn/metrics.hpp"
#include "cgmn/optimizer.hpp"
#include "cgmn/parallel.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

using diff::Var;

std::uint64_t view_seed(const Config& cfg, std::size_t epoch, std::size_t pair_index) {
  return derive_seed(cfg.seed, {0xa06u, cfg.augment.seed, epoch, pair_index});
}

PairGradient pair_gradient(const GcnParams& gcn, const PairViews& views, const InteractionConfig& cfg) {
  diff::Tape tape;
  std::vector<Var> w;
  for (const auto& m : gcn.weights) w.push_back(tape.variable(m));
  const auto matched = match_pair(tape, w, gcn.activation, views, cfg);
  PairGradient out;
  const Var loss = pair_loss(tape, matched, cfg, &out.terms);
  out.loss = loss.scalar();
  if (out.terms > 0) tape.backward(loss);
  for (const auto& v : w) out.grads.push_back(v.grad());
  return out;
}

BatchGradient batch_gradient(const GcnParams& gcn, const Dataset& data,
                             std::span<const std::size_t> batch, const Config& cfg, std::size_t epoch,
                             unsigned threads) {
  std::vector<PairGradient> parts(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i) {
    const auto& pair = data.pairs.at(batch[i]);
    const auto views = draw_views(data.graphs.at(pair.g1), data.graphs.at(pair.g2), cfg.augment,
                                  view_seed(cfg, epoch, batch[i]));
    parts[i] = pair_gradient(gcn, views, cfg.interaction);
  });

  BatchGradient out;
  for (const auto& w : gcn.weights) out.grads.emplace_back(w.rows(), w.cols());
  for (const auto& part : parts) {
    if (part.terms == 0) continue;
    ++out.pairs;
    out.loss += part.loss;
    for (std::size_t l = 0; l < part.grads.size(); ++l) out.grads[l].add_scaled(part.grads[l]);
  }
  if (out.pairs > 0) {
    const double inv = 1.0 / static_cast<double>(out.pairs);
    out.loss *= inv;
    for (auto& g : out.grads)
      for (double& v : g.data()) v *= inv;
  }
  return out;
}

std::vector<std::size_t> calibration_subset(const Dataset& data, std::span<const std::size_t> train_idx,
                                            const Config& cfg) {
  std::vector<std::size_t> labeled;
  for (auto i : train_idx)
    if (data.pairs.at(i).ged) labeled.push_back(i);
  if (labeled.size() < 2) {
    throw DataError("GED task: calibration needs at least 2 training pairs with a ged label");
  }
  const auto wanted = std::llround(cfg.label_fraction * static_cast<double>(labeled.size()));
  const auto count = std::clamp<std::size_t>(static_cast<std::size_t>(std::max<long long>(wanted, 0)), 2,
                                             labeled.size());
  Rng rng(derive_seed(cfg.seed, {0xca1u}));
  rng.shuffle(labeled);
  labeled.resize(count);
  std::sort(labeled.begin(), labeled.end());
  return labeled;
}

double raw_ged_score(const ModelParams& params, const Config& cfg, const Graph& g1, const Graph& g2) {
  const auto emb = embed_pair(params.gcn, g1, g2, cfg.interaction);
  if (cfg.ged_score == GedScore::cosine) return bsd_head(emb.z1.row(0), emb.z2.row(0));
  return ged_head(emb.z1, emb.z2, params.ged_head, cfg.symmetrize);
}

namespace {

double target_of(const Dataset& data, const GraphPair& p) {
  return normalized_ged(*p.ged, data.graphs[p.g1].n, data.graphs[p.g2].n);
}

void fit_ged_head(MlpParams& head, const std::vector<PairEmbedding>& emb,
                  const std::vector<double>& targets, const Config& cfg) {
  std::vector<Matrix> shapes;
  std::vector<Matrix*> params;
  for (std::size_t l = 0; l < head.weights.size(); ++l) {
    shapes.push_back(head.weights[l]);
    shapes.push_back(head.biases[l]);
    params.push_back(&head.weights[l]);
    params.push_back(&head.biases[l]);
  }
  Optimizer opt({OptimizerKind::adam, cfg.calibrate_lr}, shapes);
  for (int it = 0; it < cfg.calibrate_iterations; ++it) {
    diff::Tape tape;
    const auto vars = MlpVars::bind(tape, head, true);
    Var loss = tape.constant(Matrix(1, 1, 0.0));
    for (std::size_t i = 0; i < emb.size(); ++i) {
      const Var y = ged_head(tape.constant(emb[i].z1), tape.constant(emb[i].z2), vars, head.activation,
                             cfg.symmetrize);
      loss = diff::add(loss, diff::square(diff::add_scalar(y, -targets[i])));
    }
    loss = diff::scalar_mul(loss, 1.0 / static_cast<double>(emb.size()));
    tape.backward(loss);
    std::vector<Matrix> grads;
    for (std::size_t l = 0; l < vars.weights.size(); ++l) {
      grads.push_back(vars.weights[l].grad());
      grads.push_back(vars.biases[l].grad());
    }
    opt.step(params, grads);
  }
}

}  // namespace

void fit_ged_scoring(ModelParams& params, const Dataset& data, std::span<const std::size_t> labeled_idx,
                     const Config& cfg) {
  std::vector<PairEmbedding> emb(labeled_idx.size());
  std::vector<double> targets(labeled_idx.size());
  parallel_for(labeled_idx.size(), cfg.threads, [&](std::size_t i) {
    const auto& p = data.pairs.at(labeled_idx[i]);
    emb[i] = embed_pair(params.gcn, data.graphs[p.g1], data.graphs[p.g2], cfg.interaction);
    targets[i] = target_of(data, p);
  });
  if (cfg.ged_score == GedScore::mlp) fit_ged_head(params.ged_head, emb, targets, cfg);

  std::vector<double> raw(emb.size());
  for (std::size_t i = 0; i < emb.size(); ++i) {
    raw[i] = cfg.ged_score == GedScore::cosine
                 ? bsd_head(emb[i].z1.row(0), emb[i].z2.row(0))
                 : ged_head(emb[i].z1, emb[i].z2, params.ged_head, cfg.symmetrize);
  }
  CalibrateOptions opts;
  opts.hidden = static_cast<std::size_t>(cfg.calibrate_hidden);
  opts.iterations = static_cast<std::size_t>(cfg.calibrate_iterations);
  opts.lr = cfg.calibrate_lr;
  opts.seed = derive_seed(cfg.seed, {0xca2u});
  params.calibration = calibrate(raw, targets, opts);
}

Checkpoint train(const Dataset& data, std::span<const std::size_t> train_idx, const Config& cfg,
                 const EpochCallback& on_epoch) {
  cfg.validate();
  if (train_idx.empty()) throw DataError("train: no training pairs");
  data.check_feature_dims();

  Checkpoint ckpt;
  ckpt.config = cfg;
  const auto& first = data.graphs.at(data.pairs.at(train_idx.front()).g1);
  ckpt.params = ModelParams::init(cfg, first.feature_dim());
  GcnParams& gcn = ckpt.params.gcn;

  Optimizer opt({cfg.optimizer, cfg.lr}, gcn.weights);
  std::vector<Matrix*> handles;
  for (auto& w : gcn.weights) handles.push_back(&w);

  const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(train_idx.begin(), train_idx.end());
    Rng rng(derive_seed(cfg.seed, {0x5u, static_cast<std::uint64_t>(epoch)}));
    rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t loss_pairs = 0;
    for (std::size_t start = 0, b = 0; start < order.size(); start += batch_size, ++b) {
      const auto len = std::min(batch_size, order.size() - start);
      const std::span<const std::size_t> batch(order.data() + start, len);
      BatchGradient bg;
      try {
        bg = batch_gradient(gcn, data, batch, cfg, static_cast<std::size_t>(epoch), cfg.threads);
      } catch (const NumericError& e) {
        throw DivergenceError(std::string("training diverged: ") + e.what() + " (epoch " +
                                  std::to_string(epoch) + ", batch " + std::to_string(b) + ")",
                              static_cast<std::size_t>(epoch), b);
      }
      bool finite = std::isfinite(bg.loss);
      for (const auto& g : bg.grads) finite = finite && g.all_finite();
      if (!finite) {
        throw DivergenceError("training diverged: non-finite loss at epoch " + std::to_string(epoch) +
                                  ", batch " + std::to_string(b),
                              static_cast<std::size_t>(epoch), b);
      }
      if (bg.pairs == 0) continue;
      opt.step(handles, bg.grads);
      loss_sum += bg.loss * static_cast<double>(bg.pairs);
      loss_pairs += bg.pairs;
    }
    const double epoch_loss = loss_pairs ? loss_sum / static_cast<double>(loss_pairs) : 0.0;
    ckpt.loss_history.push_back(epoch_loss);
    ckpt.epoch = epoch + 1;
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }

  // Training itself is unsupervised; without two labeled pairs there is
  // nothing to calibrate against and the checkpoint carries no map.
  const auto labeled = std::count_if(train_idx.begin(), train_idx.end(),
                                     [&](std::size_t i) { return data.pairs[i].ged.has_value(); });
  if (cfg.task == Task::ged && labeled >= 2) {
    fit_ged_scoring(ckpt.params, data, calibration_subset(data, train_idx, cfg), cfg);
  }
  return ckpt;
}

std::vector<Prediction> predict(const Checkpoint& ckpt, const Dataset& data,
                                std::span<const std::size_t> idx, Task task) {
  const Config& cfg = ckpt.config;
  if (task == Task::ged && !ckpt.params.calibration) {
    throw DataError("checkpoint has no calibration map; it was not trained for the GED task");
  }
  if (!data.graphs.empty() && data.graphs.front().feature_dim() != ckpt.params.gcn.input_dim()) {
    throw DataError("dataset feature dimension " + std::to_string(data.graphs.front().feature_dim()) +
                    " does not match checkpoint input dimension " +
                    std::to_string(ckpt.params.gcn.input_dim()));
  }
  std::vector<Prediction> out(idx.size());
  parallel_for(idx.size(), cfg.threads, [&](std::size_t i) {
    const auto& p = data.pairs.at(idx[i]);
    const Graph& g1 = data.graphs.at(p.g1);
    const Graph& g2 = data.graphs.at(p.g2);
    out[i].pair = idx[i];
    if (task == Task::ged) {
      out[i].score = ckpt.params.calibration->apply(raw_ged_score(ckpt.params, cfg, g1, g2));
    } else {
      const auto emb = embed_pair(ckpt.params.gcn, g1, g2, cfg.interaction);
      out[i].score = bsd_head(emb.z1.row(0), emb.z2.row(0));
      out[i].label = bsd_label(out[i].score, cfg.bsd_threshold);
    }
  });
  return out;
}

std::optional<double> mean_precision_at_k(const Dataset& data, std::span<const std::size_t> idx,
                                          std::span<const double> predicted,
                                          std::span<const double> truth, std::size_t k) {
  std::map<std::size_t, RankedQueryResult> queries;
  auto add = [&](std::size_t query, std::size_t candidate, double pred, double tru) {
    auto& q = queries[query];
    q.query_id = data.graphs[query].id;
    const auto& cid = data.graphs[candidate].id;
    for (const auto& c : q.candidates)
      if (c.id == cid) return;
    q.candidates.push_back({cid, pred, tru});
  };
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto& p = data.pairs[idx[i]];
    if (p.g1 == p.g2) continue;
    add(p.g1, p.g2, predicted[i], truth[i]);
    add(p.g2, p.g1, predicted[i], truth[i]);
  }
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& [query, result] : queries) {
    if (result.candidates.size() < 2) continue;
    total += precision_at_k(result, std::min(k, result.candidates.size()));
    ++used;
  }
  if (used == 0) return std::nullopt;
  return total / static_cast<double>(used);
}

MetricsReport evaluate(const Checkpoint& ckpt, const Dataset& data, std::span<const std::size_t> idx,
                       Task task) {
  if (idx.empty()) throw DataError("evaluate: no pairs");
  for (auto i : idx) {
    const auto& p = data.pairs.at(i);
    if (task == Task::ged && !p.ged) throw DataError("evaluate: GED task needs a ged value on every pair");
    if (task == Task::bsd && !p.label) throw DataError("evaluate: BSD task needs a +1/-1 label on every pair");
  }
  const auto preds = predict(ckpt, data, idx, task);

  MetricsReport r;
  r.task = task;
  r.count = idx.size();
  std::vector<double> scores;
  for (const auto& p : preds) scores.push_back(p.score);

  if (task == Task::ged) {
    std::vector<double> truth;
    for (auto i : idx) truth.push_back(target_of(data, data.pairs[i]));
    r.mse = mse(scores, truth);
    try {
      r.rho = spearman_rho(scores, truth);
      r.tau = kendall_tau(scores, truth);
    } catch (const NumericError& e) {
      r.warnings.emplace_back(e.what());
    }
    r.p_at_10 = mean_precision_at_k(data, idx, scores, truth, 10);
    r.p_at_20 = mean_precision_at_k(data, idx, scores, truth, 20);
  } else {
    std::vector<int> labels;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      labels.push_back(*data.pairs[idx[i]].label);
      if (*preds[i].label == labels.back()) ++correct;
    }
    r.auc = auc(scores, labels);
    r.accuracy = static_cast<double>(correct) / static_cast<double>(idx.size());
  }
  return r;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = to_string(task);
  j["count"] = count;
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  if (task == Task::ged) {
    j["mse"] = opt(mse);
    j["rho"] = opt(rho);
    j["tau"] = opt(tau);
    j["p_at"] = {{"10", opt(p_at_10)}, {"20", opt(p_at_20)}};
  } else {
    j["auc"] = opt(auc);
    j["accuracy"] = opt(accuracy);
  }
  if (!warnings.empty()) j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

}  // namespace cgmn
