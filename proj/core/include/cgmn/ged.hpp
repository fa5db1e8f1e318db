#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cgmn/graph.hpp"

namespace cgmn {

enum class EditKind { insert_node, delete_node, insert_edge, delete_edge };

std::string to_string(EditKind kind);

// Node ops use `u` (and `label` for insertions); edge ops use `u`, `v`.
// Node indices live in a working index space: the source graph's nodes keep
// their indices and each inserted node takes the next free index.
struct EditOp {
  EditKind kind = EditKind::insert_node;
  int u = -1;
  int v = -1;
  int label = 0;

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct EditPath {
  std::vector<EditOp> ops;

  int cost() const noexcept { return static_cast<int>(ops.size()); }
};

struct GedResult {
  int cost = 0;
  EditPath path;
  // mapping[i] = node of g2 matched to node i of g1, or -1 when deleted.
  std::vector<int> mapping;
  std::size_t expanded = 0;  // search states popped
};

inline constexpr int kDefaultGedNodeLimit = 8;

// Exact unit-cost GED (node/edge insertion and deletion only) by A* over
// partial node assignments. Nodes with different labels are never matched,
// so a relabel costs a deletion plus an insertion. Node features are ignored.
// Throws IntractableError when either graph exceeds node_limit.
GedResult ged_exact(const Graph& g1, const Graph& g2, int node_limit = kDefaultGedNodeLimit);

// Exhaustive search over every injective partial node mapping. Independent
// reference for ged_exact; both graphs must have at most 4 nodes.
int ged_bruteforce(const Graph& g1, const Graph& g2);

// Replays `path` on `g`. Throws DataError when an op is inapplicable (unknown
// node, duplicate edge, deleting a node that still has edges).
Graph apply_edit_path(const Graph& g, const EditPath& path);

// Exhaustive isomorphism test respecting node labels; intended for small
// graphs.
bool isomorphic(const Graph& a, const Graph& b);

// Fills the ged field of every pair using ged_exact, spreading pairs over
// `threads` workers. Results do not depend on the thread count.
void fill_ged(Dataset& dataset, int node_limit = kDefaultGedNodeLimit, unsigned threads = 1);

}  // namespace cgmn
