#include "cgmn/graph.hpp"

#include <algorithm>
#include <unordered_map>

#include "cgmn/error.hpp"

namespace cgmn {

namespace {

[[noreturn]] void violation(const Graph& g, const std::string& rule) {
  throw DataError("graph '" + g.id + "': " + rule);
}

}  // namespace

Matrix Graph::adjacency() const {
  Matrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

bool Graph::has_edge(int a, int b) const {
  return std::binary_search(edges.begin(), edges.end(), Edge(a, b));
}

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

void Graph::validate() const {
  if (n < 1) violation(*this, "node count must be >= 1");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.u < 0 || e.v >= n) violation(*this, "edge endpoint out of range");
    if (e.u == e.v) violation(*this, "self-loop on node " + std::to_string(e.u));
    if (i > 0 && !(edges[i - 1] < e)) {
      violation(*this, edges[i - 1] == e ? "duplicate edge" : "edges not canonical");
    }
  }
  if (features.rows() != static_cast<std::size_t>(n)) {
    violation(*this, "feature matrix has " + std::to_string(features.rows()) +
                         " rows, expected " + std::to_string(n));
  }
  if (features.cols() == 0) violation(*this, "feature dimension must be >= 1");
  if (!features.all_finite()) violation(*this, "non-finite feature value");
  if (!labels.empty()) {
    if (labels.size() != static_cast<std::size_t>(n)) violation(*this, "label count != n");
    for (int l : labels)
      if (l < 0) violation(*this, "negative node label");
  }
}

void Graph::canonicalize() {
  for (auto& e : edges) e = Edge(e.u, e.v);
  std::sort(edges.begin(), edges.end());
}

std::size_t Dataset::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < graphs.size(); ++i)
    if (graphs[i].id == id) return i;
  throw DataError("unknown graph id '" + id + "'");
}

void Dataset::check_feature_dims() const {
  if (graphs.empty()) return;
  const auto d = graphs.front().feature_dim();
  for (const auto& g : graphs) {
    if (g.feature_dim() != d) {
      throw DataError("graph '" + g.id + "': feature dimension " +
                      std::to_string(g.feature_dim()) + " differs from dataset dimension " +
                      std::to_string(d));
    }
  }
}

Matrix one_hot(const std::vector<int>& labels, std::size_t width) {
  Matrix x(labels.size(), width);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= width) {
      throw DataError("label " + std::to_string(labels[i]) + " outside one-hot width " +
                      std::to_string(width));
    }
    x(i, static_cast<std::size_t>(labels[i])) = 1.0;
  }
  return x;
}

Graph permute_nodes(const Graph& g, const std::vector<int>& perm) {
  if (perm.size() != static_cast<std::size_t>(g.n)) throw ShapeError("permutation size != n");
  Graph out;
  out.id = g.id;
  out.n = g.n;
  out.features = Matrix(g.features.rows(), g.features.cols());
  if (g.labeled()) out.labels.assign(g.labels.size(), 0);
  for (int i = 0; i < g.n; ++i) {
    const auto dst = static_cast<std::size_t>(perm[i]);
    auto src_row = g.features.row(i);
    std::copy(src_row.begin(), src_row.end(), out.features.row(dst).begin());
    if (g.labeled()) out.labels[dst] = g.labels[i];
  }
  for (const auto& e : g.edges) out.edges.emplace_back(perm[e.u], perm[e.v]);
  out.canonicalize();
  return out;
}

}  // namespace cgmn
