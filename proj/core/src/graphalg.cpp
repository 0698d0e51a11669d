#include "tourcp/graphalg.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace tourcp {

bool edge_less(const Edge& a, const Edge& b) {
  if (a.w != b.w) return a.w < b.w;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

UnionFind::UnionFind(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0), components_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  int root = x;
  while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
  while (parent_[static_cast<std::size_t>(x)] != root) {
    const int next = parent_[static_cast<std::size_t>(x)];
    parent_[static_cast<std::size_t>(x)] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(int x, int y) {
  const int rx = find(x), ry = find(y);
  if (rx == ry) return false;
  if (rank_[static_cast<std::size_t>(rx)] < rank_[static_cast<std::size_t>(ry)]) {
    parent_[static_cast<std::size_t>(rx)] = ry;
  } else if (rank_[static_cast<std::size_t>(rx)] > rank_[static_cast<std::size_t>(ry)]) {
    parent_[static_cast<std::size_t>(ry)] = rx;
  } else {
    parent_[static_cast<std::size_t>(ry)] = rx;
    ++rank_[static_cast<std::size_t>(rx)];
  }
  --components_;
  return true;
}

std::optional<SpanningTree> kruskal_with_fixed(int n, std::span<const Edge> candidates,
                                               std::span<const Edge> fixed) {
  if (n <= 0) return std::nullopt;
  SpanningTree tree;
  tree.degree.assign(static_cast<std::size_t>(n), 0);
  UnionFind uf(n);

  auto take = [&](const Edge& e) {
    tree.edges.push_back(e);
    tree.weight += e.w;
    ++tree.degree[static_cast<std::size_t>(e.u)];
    ++tree.degree[static_cast<std::size_t>(e.v)];
  };

  for (const Edge& e : fixed) {
    if (!uf.unite(e.u, e.v)) return std::nullopt;  // fixed edges close a cycle
    take(e);
  }
  for (const Edge& e : candidates) {
    if (static_cast<int>(tree.edges.size()) == n - 1) break;
    if (uf.unite(e.u, e.v)) take(e);
  }
  if (static_cast<int>(tree.edges.size()) != n - 1) return std::nullopt;
  return tree;
}

bool HubTree::is_circuit() const {
  for (int d : degree)
    if (d != 2) return false;
  return true;
}

std::optional<HubTree> min_hub_tree(int n, std::span<const Edge> candidates, int hub,
                                    std::span<const Edge> fixed) {
  if (n < 3 || hub < 0 || hub >= n) return std::nullopt;

  HubTree result;
  result.hub = hub;
  result.tree_degree.assign(static_cast<std::size_t>(n), 0);
  result.degree.assign(static_cast<std::size_t>(n), 0);

  UnionFind uf(n);  // hub stays in its own component; the tree spans the rest
  int hub_count = 0;
  int tree_count = 0;
  const int tree_target = n - 2;

  auto hub_slot_has = [&](const Edge& e) {
    for (int i = 0; i < hub_count; ++i)
      if (result.hub_edges[static_cast<std::size_t>(i)].u == e.u &&
          result.hub_edges[static_cast<std::size_t>(i)].v == e.v)
        return true;
    return false;
  };
  auto take_hub = [&](const Edge& e) {
    result.hub_edges[static_cast<std::size_t>(hub_count++)] = e;
    result.weight += e.w;
  };
  auto take_tree = [&](const Edge& e) {
    result.tree_edges.push_back(e);
    result.weight += e.w;
    ++result.tree_degree[static_cast<std::size_t>(e.u)];
    ++result.tree_degree[static_cast<std::size_t>(e.v)];
    ++tree_count;
  };

  for (const Edge& e : fixed) {
    if (e.u == hub || e.v == hub) {
      if (hub_count == 2 || hub_slot_has(e)) return std::nullopt;  // too many fixed hub edges
      take_hub(e);
    } else {
      if (!uf.unite(e.u, e.v)) return std::nullopt;  // fixed edges close a cycle
      take_tree(e);
    }
  }

  for (const Edge& e : candidates) {
    if (tree_count == tree_target && hub_count == 2) break;
    if (e.u == hub || e.v == hub) {
      if (hub_count < 2 && !hub_slot_has(e)) take_hub(e);
    } else if (tree_count < tree_target) {
      if (uf.unite(e.u, e.v)) take_tree(e);
    }
  }

  if (tree_count != tree_target || hub_count != 2) return std::nullopt;

  result.degree = result.tree_degree;
  for (int i = 0; i < 2; ++i) {
    const Edge& e = result.hub_edges[static_cast<std::size_t>(i)];
    ++result.degree[static_cast<std::size_t>(e.u)];
    ++result.degree[static_cast<std::size_t>(e.v)];
  }
  return result;
}

Matching greedy_matching(std::span<const int> nodes, std::span<const Edge> allowed) {
  Matching m;
  if (nodes.empty()) return m;
  int max_node = 0;
  for (int v : nodes) max_node = std::max(max_node, v);
  std::vector<bool> free_node(static_cast<std::size_t>(max_node) + 1, false);
  for (int v : nodes) free_node[static_cast<std::size_t>(v)] = true;

  for (const Edge& e : allowed) {
    if (e.u > max_node || e.v > max_node) continue;
    if (free_node[static_cast<std::size_t>(e.u)] && free_node[static_cast<std::size_t>(e.v)]) {
      free_node[static_cast<std::size_t>(e.u)] = false;
      free_node[static_cast<std::size_t>(e.v)] = false;
      m.pairs.push_back(e);
    }
  }
  for (int v : nodes)
    if (free_node[static_cast<std::size_t>(v)]) m.unmatched.push_back(v);
  return m;
}

std::vector<int> euler_circuit(int n, std::span<const Edge> multigraph_edges) {
  if (multigraph_edges.empty()) throw std::invalid_argument("euler circuit of an empty graph");

  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < multigraph_edges.size(); ++i) {
    const Edge& e = multigraph_edges[i];
    adj[static_cast<std::size_t>(e.u)].emplace_back(static_cast<int>(i), e.v);
    adj[static_cast<std::size_t>(e.v)].emplace_back(static_cast<int>(i), e.u);
  }
  for (int v = 0; v < n; ++v)
    if (adj[static_cast<std::size_t>(v)].size() % 2 != 0)
      throw std::invalid_argument("euler circuit requires even degrees");

  int start = -1;
  for (int v = 0; v < n && start < 0; ++v)
    if (!adj[static_cast<std::size_t>(v)].empty()) start = v;

  std::vector<bool> used(multigraph_edges.size(), false);
  std::vector<std::size_t> next(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{start};
  std::vector<int> circuit;
  while (!stack.empty()) {
    const int v = stack.back();
    auto& edges = adj[static_cast<std::size_t>(v)];
    std::size_t& i = next[static_cast<std::size_t>(v)];
    while (i < edges.size() && used[static_cast<std::size_t>(edges[i].first)]) ++i;
    if (i == edges.size()) {
      circuit.push_back(v);
      stack.pop_back();
    } else {
      used[static_cast<std::size_t>(edges[i].first)] = true;
      stack.push_back(edges[i].second);
    }
  }
  if (circuit.size() != multigraph_edges.size() + 1)
    throw std::invalid_argument("euler circuit requires a connected multigraph");
  std::reverse(circuit.begin(), circuit.end());
  return circuit;
}

ShortcutResult shortcut_walk(std::span<const int> walk,
                             const std::function<long long(int, int)>& weight_of,
                             const std::function<bool(int, int)>& in_subgraph) {
  ShortcutResult result;
  if (walk.empty()) return result;
  int max_node = 0;
  for (int v : walk) max_node = std::max(max_node, v);
  std::vector<bool> seen(static_cast<std::size_t>(max_node) + 1, false);
  for (int v : walk) {
    if (!seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = true;
      result.tour.push_back(v);
    }
  }
  for (std::size_t i = 0; i < result.tour.size(); ++i) {
    const int u = result.tour[i];
    const int v = result.tour[(i + 1) % result.tour.size()];
    result.weight += weight_of(u, v);
    if (!in_subgraph(u, v)) result.within_subgraph = false;
  }
  return result;
}

}  // namespace tourcp
