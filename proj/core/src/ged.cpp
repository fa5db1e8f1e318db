#include "cgmn/ged.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "cgmn/error.hpp"
#include "cgmn/parallel.hpp"

namespace cgmn {

std::string to_string(EditKind kind) {
  switch (kind) {
    case EditKind::insert_node: return "insert_node";
    case EditKind::delete_node: return "delete_node";
    case EditKind::insert_edge: return "insert_edge";
    case EditKind::delete_edge: return "delete_edge";
  }
  return "?";
}

namespace {

std::vector<int> labels_or_zero(const Graph& g) {
  if (g.labeled()) return g.labels;
  return std::vector<int>(static_cast<std::size_t>(g.n), 0);
}

// Dense adjacency as bitmasks; node counts are small.
std::vector<std::uint32_t> adjacency_bits(const Graph& g) {
  std::vector<std::uint32_t> bits(static_cast<std::size_t>(g.n), 0);
  for (const auto& e : g.edges) {
    bits[e.u] |= 1u << e.v;
    bits[e.v] |= 1u << e.u;
  }
  return bits;
}

struct SearchNode {
  int parent;           // index into arena, -1 for root
  int target;           // g2 node assigned to order[depth-1], -1 = deleted
  int depth;            // number of g1 nodes assigned
  int g;                // exact cost so far
  std::uint32_t used;   // g2 nodes already matched
  bool complete;        // insertion completion cost folded into g
};

struct QueueEntry {
  int f;
  int depth;
  int index;
  // Min-heap on f, deeper first on ties, then insertion order.
  bool operator<(const QueueEntry& o) const {
    if (f != o.f) return f > o.f;
    if (depth != o.depth) return depth < o.depth;
    return index > o.index;
  }
};

class AStar {
 public:
  AStar(const Graph& g1, const Graph& g2)
      : n1_(g1.n), n2_(g2.n), lab1_(labels_or_zero(g1)), lab2_(labels_or_zero(g2)),
        adj1_(adjacency_bits(g1)), adj2_(adjacency_bits(g2)) {
    order_.resize(static_cast<std::size_t>(n1_));
    std::iota(order_.begin(), order_.end(), 0);
    const auto deg = g1.degrees();
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return deg[a] > deg[b]; });
    for (int l : lab1_) max_label_ = std::max(max_label_, l);
    for (int l : lab2_) max_label_ = std::max(max_label_, l);
  }

  GedResult run() {
    arena_.push_back({-1, -1, 0, 0, 0u, false});
    std::priority_queue<QueueEntry> open;
    open.push({heuristic(0, 0u), 0, 0});
    std::vector<int> assign(static_cast<std::size_t>(n1_));
    std::size_t expanded = 0;

    while (!open.empty()) {
      const QueueEntry top = open.top();
      open.pop();
      ++expanded;
      const SearchNode cur = arena_[top.index];
      if (cur.complete) return finish(top.index, expanded);

      reconstruct(top.index, assign);
      if (cur.depth == n1_) {
        int extra = 0;
        for (int t = 0; t < n2_; ++t) {
          if (cur.used & (1u << t)) continue;
          ++extra;
          // g2 edges touching an unmatched node must be inserted; count each once.
          for (int s = 0; s < n2_; ++s) {
            if (!(adj2_[t] & (1u << s))) continue;
            if ((cur.used & (1u << s)) || s > t) ++extra;
          }
        }
        push(open, {top.index, -1, cur.depth, cur.g + extra, cur.used, true}, 0);
        continue;
      }

      const int node = order_[cur.depth];
      for (int t = -1; t < n2_; ++t) {
        if (t >= 0 && ((cur.used & (1u << t)) || lab1_[node] != lab2_[t])) continue;
        int cost = (t < 0) ? 1 : 0;
        for (int m = 0; m < cur.depth; ++m) {
          const int other = order_[m];
          const int ot = assign[m];
          const bool e1 = adj1_[node] & (1u << other);
          if (t >= 0 && ot >= 0) {
            const bool e2 = adj2_[t] & (1u << ot);
            cost += (e1 != e2) ? 1 : 0;
          } else {
            cost += e1 ? 1 : 0;
          }
        }
        const std::uint32_t used = t >= 0 ? (cur.used | (1u << t)) : cur.used;
        const int depth = cur.depth + 1;
        push(open, {top.index, t, depth, cur.g + cost, used, false}, heuristic(depth, used));
      }
    }
    throw Error("ged_exact: search exhausted without a goal");  // unreachable
  }

 private:
  void push(std::priority_queue<QueueEntry>& open, SearchNode node, int h) {
    arena_.push_back(node);
    const int idx = static_cast<int>(arena_.size() - 1);
    open.push({node.g + h, node.complete ? n1_ + 1 : node.depth, idx});
  }

  // Admissible bound: label-multiset difference between the unassigned g1
  // nodes and unused g2 nodes, plus the difference in counts of edges that
  // still touch those node sets.
  int heuristic(int depth, std::uint32_t used) const {
    std::vector<int> balance(static_cast<std::size_t>(max_label_ + 1), 0);
    std::uint32_t rest1 = 0;
    for (int m = depth; m < n1_; ++m) {
      ++balance[lab1_[order_[m]]];
      rest1 |= 1u << order_[m];
    }
    for (int t = 0; t < n2_; ++t)
      if (!(used & (1u << t))) --balance[lab2_[t]];
    int h = 0;
    for (int b : balance) h += std::abs(b);

    int e1 = 0;
    for (int a = 0; a < n1_; ++a) {
      const std::uint32_t nbrs = adj1_[a];
      for (int b = a + 1; b < n1_; ++b)
        if ((nbrs & (1u << b)) && ((rest1 >> a) & 1u || (rest1 >> b) & 1u)) ++e1;
    }
    int e2 = 0;
    for (int s = 0; s < n2_; ++s) {
      const std::uint32_t nbrs = adj2_[s];
      for (int t = s + 1; t < n2_; ++t)
        if ((nbrs & (1u << t)) && (!((used >> s) & 1u) || !((used >> t) & 1u))) ++e2;
    }
    return h + std::abs(e1 - e2);
  }

  // assign[m] = target of order_[m] for every m < depth of `index`.
  void reconstruct(int index, std::vector<int>& assign) const {
    for (int i = index; i >= 0 && arena_[i].depth > 0; i = arena_[i].parent) {
      if (arena_[i].complete) continue;
      assign[arena_[i].depth - 1] = arena_[i].target;
    }
  }

  GedResult finish(int index, std::size_t expanded) const {
    std::vector<int> assign(static_cast<std::size_t>(n1_));
    reconstruct(arena_[index].parent, assign);
    GedResult r;
    r.cost = arena_[index].g;
    r.mapping.assign(static_cast<std::size_t>(n1_), -1);
    for (int m = 0; m < n1_; ++m) r.mapping[order_[m]] = assign[m];
    r.expanded = expanded;
    return r;
  }

  int n1_;
  int n2_;
  std::vector<int> lab1_;
  std::vector<int> lab2_;
  std::vector<std::uint32_t> adj1_;
  std::vector<std::uint32_t> adj2_;
  std::vector<int> order_;
  int max_label_ = 0;
  std::vector<SearchNode> arena_;
};

EditPath path_from_mapping(const Graph& g1, const Graph& g2, const std::vector<int>& mapping) {
  const auto lab2 = labels_or_zero(g2);
  std::vector<int> preimage(static_cast<std::size_t>(g2.n), -1);
  for (int a = 0; a < g1.n; ++a)
    if (mapping[a] >= 0) preimage[mapping[a]] = a;

  EditPath path;
  for (const auto& e : g1.edges) {
    const int s = mapping[e.u];
    const int t = mapping[e.v];
    if (s >= 0 && t >= 0 && g2.has_edge(s, t)) continue;
    path.ops.push_back({EditKind::delete_edge, e.u, e.v, 0});
  }
  for (int a = 0; a < g1.n; ++a)
    if (mapping[a] < 0) path.ops.push_back({EditKind::delete_node, a, -1, 0});

  std::vector<int> working(static_cast<std::size_t>(g2.n), -1);
  int next = g1.n;
  for (int t = 0; t < g2.n; ++t) {
    if (preimage[t] >= 0) {
      working[t] = preimage[t];
    } else {
      working[t] = next++;
      path.ops.push_back({EditKind::insert_node, working[t], -1, lab2[t]});
    }
  }
  for (const auto& e : g2.edges) {
    const int a = preimage[e.u];
    const int b = preimage[e.v];
    if (a >= 0 && b >= 0 && g1.has_edge(a, b)) continue;
    path.ops.push_back({EditKind::insert_edge, working[e.u], working[e.v], 0});
  }
  return path;
}

}  // namespace

GedResult ged_exact(const Graph& g1, const Graph& g2, int node_limit) {
  if (node_limit > 24) throw ConfigError("ged_exact: node_limit above 24 is not supported");
  if (g1.n > node_limit || g2.n > node_limit) {
    throw IntractableError("ged_exact: intractable size (" + std::to_string(g1.n) + " and " +
                           std::to_string(g2.n) + " nodes, limit " +
                           std::to_string(node_limit) + ")");
  }
  GedResult r = AStar(g1, g2).run();
  r.path = path_from_mapping(g1, g2, r.mapping);
  if (r.path.cost() != r.cost) {
    throw Error("ged_exact: internal inconsistency between search cost and edit path");
  }
  return r;
}

int ged_bruteforce(const Graph& g1, const Graph& g2) {
  if (g1.n > 4 || g2.n > 4) throw IntractableError("ged_bruteforce: graphs must have <= 4 nodes");
  const auto A1 = g1.adjacency();
  const auto A2 = g2.adjacency();
  const auto l1 = labels_or_zero(g1);
  const auto l2 = labels_or_zero(g2);
  const int n1 = g1.n;
  const int n2 = g2.n;

  int best = n1 + n2 + static_cast<int>(g1.num_edges() + g2.num_edges());
  std::vector<int> map(static_cast<std::size_t>(n1), -1);
  std::vector<bool> taken(static_cast<std::size_t>(n2), false);

  auto evaluate = [&] {
    std::vector<int> pre(static_cast<std::size_t>(n2), -1);
    int mapped = 0;
    for (int a = 0; a < n1; ++a) {
      if (map[a] >= 0) {
        pre[map[a]] = a;
        ++mapped;
      }
    }
    int cost = (n1 - mapped) + (n2 - mapped);
    for (int a = 0; a < n1; ++a)
      for (int b = a + 1; b < n1; ++b) {
        if (A1(a, b) == 0.0) continue;
        const bool kept = map[a] >= 0 && map[b] >= 0 && A2(map[a], map[b]) != 0.0;
        if (!kept) ++cost;
      }
    for (int s = 0; s < n2; ++s)
      for (int t = s + 1; t < n2; ++t) {
        if (A2(s, t) == 0.0) continue;
        const bool covered = pre[s] >= 0 && pre[t] >= 0 && A1(pre[s], pre[t]) != 0.0;
        if (!covered) ++cost;
      }
    best = std::min(best, cost);
  };

  auto recurse = [&](auto&& self, int a) -> void {
    if (a == n1) {
      evaluate();
      return;
    }
    map[a] = -1;
    self(self, a + 1);
    for (int t = 0; t < n2; ++t) {
      if (taken[t] || l1[a] != l2[t]) continue;
      taken[t] = true;
      map[a] = t;
      self(self, a + 1);
      taken[t] = false;
      map[a] = -1;
    }
  };
  recurse(recurse, 0);
  return best;
}

Graph apply_edit_path(const Graph& g, const EditPath& path) {
  auto fail = [](const EditOp& op, const std::string& why) -> DataError {
    return DataError("apply_edit_path: " + to_string(op.kind) + "(" + std::to_string(op.u) + "," +
                     std::to_string(op.v) + "): " + why);
  };
  std::vector<bool> alive(static_cast<std::size_t>(g.n), true);
  std::vector<int> labels = labels_or_zero(g);
  std::set<Edge> edges(g.edges.begin(), g.edges.end());
  const auto live = [&](int u) { return u >= 0 && u < static_cast<int>(alive.size()) && alive[u]; };

  for (const auto& op : path.ops) {
    switch (op.kind) {
      case EditKind::insert_node:
        if (op.u != static_cast<int>(alive.size())) throw fail(op, "index is not the next free index");
        alive.push_back(true);
        labels.push_back(op.label);
        break;
      case EditKind::delete_node: {
        if (!live(op.u)) throw fail(op, "no such node");
        for (const auto& e : edges)
          if (e.u == op.u || e.v == op.u) throw fail(op, "node still has incident edges");
        alive[op.u] = false;
        break;
      }
      case EditKind::insert_edge:
        if (!live(op.u) || !live(op.v) || op.u == op.v) throw fail(op, "invalid endpoints");
        if (!edges.insert(Edge(op.u, op.v)).second) throw fail(op, "edge already present");
        break;
      case EditKind::delete_edge:
        if (edges.erase(Edge(op.u, op.v)) == 0) throw fail(op, "edge absent");
        break;
    }
  }

  std::vector<int> compact(alive.size(), -1);
  Graph out;
  out.id = g.id;
  for (std::size_t i = 0; i < alive.size(); ++i)
    if (alive[i]) compact[i] = out.n++;
  if (out.n == 0) throw DataError("apply_edit_path: result has no nodes");
  const std::size_t d = g.feature_dim() == 0 ? 1 : g.feature_dim();
  out.features = Matrix(static_cast<std::size_t>(out.n), d);
  for (std::size_t i = 0; i < alive.size(); ++i) {
    if (!alive[i]) continue;
    if (g.labeled() || std::any_of(labels.begin(), labels.end(), [](int l) { return l != 0; }))
      out.labels.push_back(labels[i]);
    if (i < static_cast<std::size_t>(g.n) && g.feature_dim() > 0) {
      auto src = g.features.row(i);
      std::copy(src.begin(), src.end(), out.features.row(compact[i]).begin());
    }
  }
  for (const auto& e : edges) out.edges.emplace_back(compact[e.u], compact[e.v]);
  out.canonicalize();
  return out;
}

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.n != b.n || a.num_edges() != b.num_edges()) return false;
  const auto la = labels_or_zero(a);
  const auto lb = labels_or_zero(b);
  {
    auto sa = la, sb = lb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  const auto da = a.degrees();
  const auto db = b.degrees();
  const auto Aa = a.adjacency();
  const auto Ab = b.adjacency();
  const int n = a.n;
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);

  auto recurse = [&](auto&& self, int u) -> bool {
    if (u == n) return true;
    for (int v = 0; v < n; ++v) {
      if (used[v] || la[u] != lb[v] || da[u] != db[v]) continue;
      bool ok = true;
      for (int w = 0; w < u && ok; ++w) ok = (Aa(u, w) == Ab(v, map[w]));
      if (!ok) continue;
      used[v] = true;
      map[u] = v;
      if (self(self, u + 1)) return true;
      used[v] = false;
    }
    return false;
  };
  return recurse(recurse, 0);
}

void fill_ged(Dataset& dataset, int node_limit, unsigned threads) {
  std::vector<int> results(dataset.pairs.size(), 0);
  parallel_for(dataset.pairs.size(), threads, [&](std::size_t i) {
    const auto& p = dataset.pairs[i];
    results[i] = ged_exact(dataset.graphs[p.g1], dataset.graphs[p.g2], node_limit).cost;
  });
  for (std::size_t i = 0; i < results.size(); ++i) dataset.pairs[i].ged = results[i];
}

}  // namespace cgmn
