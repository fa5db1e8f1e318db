#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgmn/matrix.hpp"

namespace cgmn {

// Undirected edge stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Undirected attributed graph. Edges are kept sorted and unique; the
// adjacency matrix is materialized on demand.
struct Graph {
  std::string id;
  int n = 0;
  std::vector<Edge> edges;
  Matrix features;          // n x d
  std::vector<int> labels;  // empty when the graph is unlabeled

  std::size_t num_edges() const noexcept { return edges.size(); }
  std::size_t feature_dim() const noexcept { return features.cols(); }
  bool labeled() const noexcept { return !labels.empty(); }

  Matrix adjacency() const;
  bool has_edge(int a, int b) const;
  std::vector<int> degrees() const;

  // Throws DataError naming the graph id and the violated rule.
  void validate() const;
  // Sorts edges; call after building an edge list by hand.
  void canonicalize();
};

// Pair of graphs referenced by index into a Dataset's graph list.
struct GraphPair {
  std::size_t g1 = 0;
  std::size_t g2 = 0;
  std::optional<int> ged;
  std::optional<int> label;  // +1 similar, -1 dissimilar
};

struct Dataset {
  std::vector<Graph> graphs;
  std::vector<GraphPair> pairs;

  // Index of the graph with this id; throws DataError when absent.
  std::size_t index_of(const std::string& id) const;
  // Throws DataError when feature widths differ across graphs.
  void check_feature_dims() const;
};

// One-hot encode node labels into an n x width feature matrix.
Matrix one_hot(const std::vector<int>& labels, std::size_t width);

// Graph with nodes relabelled so that new node perm[i] is old node i.
Graph permute_nodes(const Graph& g, const std::vector<int>& perm);

}  // namespace cgmn
