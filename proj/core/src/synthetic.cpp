#include "cgmn/synthetic.hpp"

#include <algorithm>
#include <numeric>

#include "cgmn/encoder.hpp"
#include "cgmn/error.hpp"
#include "cgmn/rng.hpp"

namespace cgmn {

void SyntheticConfig::validate() const {
  if (count < 1) throw ConfigError("synthetic: count must be >= 1");
  if (n_min < 1 || n_max < n_min) throw ConfigError("synthetic: need 1 <= n_min <= n_max");
  if (num_labels < 1) throw ConfigError("synthetic: num_labels must be >= 1");
  if (edit_budget < 0) throw ConfigError("synthetic: edit_budget must be >= 0");
  if (!(extra_edge_prob >= 0.0 && extra_edge_prob <= 1.0))
    throw ConfigError("synthetic: extra_edge_prob must be in [0, 1]");
  if (label_ged && n_max > node_limit)
    throw ConfigError("synthetic: n_max exceeds the exact GED node limit");
}

namespace {

void set_features(Graph& g, int num_labels) {
  if (num_labels <= 1) {
    g.labels.clear();
    g.features = Matrix(static_cast<std::size_t>(g.n), 1, 1.0);
  } else {
    g.features = one_hot(g.labels, static_cast<std::size_t>(num_labels));
  }
}

// Applies one random edit in place; returns false when the drawn edit is
// infeasible.
bool try_edit(Graph& g, const SyntheticConfig& cfg, Rng& rng) {
  switch (rng.below(4)) {
    case 0: {  // insert edge
      const int max_edges = g.n * (g.n - 1) / 2;
      if (static_cast<int>(g.num_edges()) >= max_edges) return false;
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n)));
      const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n)));
      if (a == b || g.has_edge(a, b)) return false;
      g.edges.emplace_back(a, b);
      g.canonicalize();
      return true;
    }
    case 1: {  // delete edge
      if (g.edges.empty()) return false;
      g.edges.erase(g.edges.begin() + static_cast<std::ptrdiff_t>(rng.below(g.num_edges())));
      return true;
    }
    case 2: {  // insert isolated node
      if (g.n >= cfg.n_max) return false;
      if (cfg.num_labels > 1)
        g.labels.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.num_labels))));
      ++g.n;
      return true;
    }
    default: {  // delete an isolated node
      if (g.n <= cfg.n_min) return false;
      const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.n)));
      if (g.degrees()[u] != 0) return false;
      for (auto& e : g.edges) {
        if (e.u > u) --e.u;
        if (e.v > u) --e.v;
      }
      if (g.labeled()) g.labels.erase(g.labels.begin() + u);
      --g.n;
      return true;
    }
  }
}

}  // namespace

Graph random_graph(const std::string& id, int n, int num_labels, double extra_edge_prob, Rng& rng) {
  Graph g;
  g.id = id;
  g.n = n;
  for (int v = 1; v < n; ++v) {
    g.edges.emplace_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), v);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bernoulli(extra_edge_prob)) g.edges.emplace_back(a, b);
  g.canonicalize();
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  if (num_labels > 1) {
    g.labels.resize(static_cast<std::size_t>(n));
    for (auto& l : g.labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_labels)));
  }
  set_features(g, num_labels);
  return g;
}

SyntheticPairs generate_synthetic_pairs(const SyntheticConfig& cfg) {
  cfg.validate();
  SyntheticPairs out;
  out.dataset.graphs.reserve(static_cast<std::size_t>(2 * cfg.count));
  for (int i = 0; i < cfg.count; ++i) {
    Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(i)}));
    const int n = static_cast<int>(rng.between(cfg.n_min, cfg.n_max));
    Graph base = random_graph("g" + std::to_string(i), n, cfg.num_labels, cfg.extra_edge_prob, rng);

    Graph edited = base;
    edited.id = "g" + std::to_string(i) + "e";
    const int k = static_cast<int>(rng.between(0, cfg.edit_budget));
    for (int e = 0; e < k; ++e) {
      int failures = 0;
      while (!try_edit(edited, cfg, rng)) {
        if (++failures >= 100) {
          throw DataError("generate_synthetic_pairs: no feasible edit for pair " + std::to_string(i) +
                          " after 100 resamples");
        }
      }
    }
    std::vector<int> perm(static_cast<std::size_t>(edited.n));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    set_features(edited, cfg.num_labels);
    edited = permute_nodes(edited, perm);

    out.dataset.graphs.push_back(std::move(base));
    out.dataset.graphs.push_back(std::move(edited));
    out.dataset.pairs.push_back({static_cast<std::size_t>(2 * i), static_cast<std::size_t>(2 * i + 1),
                                 std::nullopt, std::nullopt});
    out.applied_edits.push_back(k);
  }
  if (cfg.label_ged) fill_ged(out.dataset, cfg.node_limit, cfg.threads);
  return out;
}

Dataset generate_bsd_pairs(const BsdConfig& cfg) {
  if (cfg.count < 1) throw ConfigError("bsd: count must be >= 1");
  if (cfg.n_min < 2 || cfg.n_max < cfg.n_min) throw ConfigError("bsd: need 2 <= n_min <= n_max");
  Dataset ds;
  for (int i = 0; i < cfg.count; ++i) {
    Rng rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(i)}));
    const int n = static_cast<int>(rng.between(cfg.n_min, cfg.n_max));
    Graph base = random_graph("b" + std::to_string(i), n, cfg.num_labels, cfg.extra_edge_prob, rng);
    Graph other;
    const bool positive = (i % 2) == 0;
    if (positive) {
      AugmentConfig aug = cfg.corruption;
      aug.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(i), 1});
      // Redraw corruptions that leave a node with an all-zero neighbourhood.
      for (std::uint64_t attempt = 0;; ++attempt) {
        other = make_view(base, aug, attempt).graph;
        if (!has_dead_node(other)) break;
        if (attempt == 99) throw DataError("bsd: 100 corrupted copies of '" + base.id + "' had a dead node");
      }
    } else {
      const int n2 = static_cast<int>(rng.between(cfg.n_min, cfg.n_max));
      other = random_graph("", n2, cfg.num_labels, cfg.extra_edge_prob, rng);
    }
    other.id = base.id + (positive ? "p" : "n");
    ds.graphs.push_back(std::move(base));
    ds.graphs.push_back(std::move(other));
    ds.pairs.push_back({static_cast<std::size_t>(2 * i), static_cast<std::size_t>(2 * i + 1),
                        std::nullopt, positive ? 1 : -1});
  }
  return ds;
}

}  // namespace cgmn
