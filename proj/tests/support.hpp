#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "cgmn/graph.hpp"
#include "cgmn/rng.hpp"

namespace cgmn::testing {

inline Graph make_graph(const std::string& id, int n, std::initializer_list<std::pair<int, int>> edges,
                        std::size_t d = 1) {
  Graph g;
  g.id = id;
  g.n = n;
  for (auto [a, b] : edges) g.edges.emplace_back(a, b);
  g.features = Matrix(static_cast<std::size_t>(n), d, 1.0);
  g.canonicalize();
  return g;
}

inline Graph from_edges(const std::string& id, int n, const std::vector<Edge>& edges, std::size_t d = 1) {
  Graph g;
  g.id = id;
  g.n = n;
  g.edges = edges;
  g.features = Matrix(static_cast<std::size_t>(n), d, 1.0);
  g.canonicalize();
  return g;
}

inline Graph triangle() { return make_graph("tri", 3, {{0, 1}, {1, 2}, {0, 2}}); }

// Every unlabeled graph on 1..max_n nodes, one per edge subset (not up to isomorphism).
inline std::vector<Graph> all_graphs_up_to(int max_n) {
  std::vector<Graph> out;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<Edge> slots;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) slots.emplace_back(a, b);
    for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
      std::vector<Edge> es;
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (mask & (1u << i)) es.push_back(slots[i]);
      out.push_back(from_edges("n" + std::to_string(n) + "m" + std::to_string(mask), n, es));
    }
  }
  return out;
}

// Random graph with dense random features; edges i.i.d. with probability p.
inline Graph random_featured(const std::string& id, int n, std::size_t d, double p, Rng& rng) {
  Graph g;
  g.id = id;
  g.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.bernoulli(p)) g.edges.emplace_back(a, b);
  g.features = Matrix(static_cast<std::size_t>(n), d);
  for (double& v : g.features.data()) v = rng.uniform(-1.0, 1.0);
  g.canonicalize();
  return g;
}

inline std::vector<int> random_perm(int n, Rng& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  rng.shuffle(p);
  return p;
}

}  // namespace cgmn::testing
