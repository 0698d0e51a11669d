#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tourcp {

// Undirected weighted edge, kept in canonical u < v form.
struct Edge {
  int u = 0;
  int v = 0;
  long long w = 0;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.u == b.u && a.v == b.v && a.w == b.w;
  }
};

// Canonical ascending edge order: weight first, then endpoints.
bool edge_less(const Edge& a, const Edge& b);

// Union-find with path compression and union by rank.
class UnionFind {
public:
  explicit UnionFind(int n);
  int find(int x);
  // Returns false when x and y were already connected.
  bool unite(int x, int y);
  int components() const { return components_; }

private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  int components_;
};

struct SpanningTree {
  std::vector<Edge> edges;
  std::vector<int> degree;  // node degrees within the tree
  long long weight = 0;
};

// Kruskal over nodes 0..n-1 with a set of edges forced into the tree first.
// candidates must be sorted ascending by edge_less; fixed edges are taken
// unconditionally.  Returns nullopt when the fixed edges close a cycle or
// the graph does not connect all n nodes.
std::optional<SpanningTree> kruskal_with_fixed(int n, std::span<const Edge> candidates,
                                               std::span<const Edge> fixed);

// Spanning tree over all nodes except hub, plus two distinct edges at hub.
// Every Hamiltonian circuit is one of these, so their minimum weight bounds
// every tour from below.
struct HubTree {
  int hub = 0;
  std::vector<Edge> tree_edges;       // spanning tree of the other n-1 nodes
  std::array<Edge, 2> hub_edges;      // the two edges leaving the hub
  std::vector<int> tree_degree;       // degrees within tree_edges only
  std::vector<int> degree;            // degrees including the hub edges
  long long weight = 0;

  bool is_circuit() const;  // all degrees exactly 2
};

// Minimum hub tree by a single Kruskal-style scan: fixed edges go in first
// (hub-incident ones into the hub slots), then edges in ascending order,
// where a hub-incident edge fills a free hub slot and all other edges extend
// the tree.  If the scan leaves a hub slot free the cheapest remaining hub
// edge fills it.  Fixed edges must be cycle-free with at most two of them at
// the hub.  Returns nullopt when no hub tree exists in the given graph.
std::optional<HubTree> min_hub_tree(int n, std::span<const Edge> candidates, int hub,
                                    std::span<const Edge> fixed);

struct Matching {
  std::vector<Edge> pairs;
  std::vector<int> unmatched;
};

// Greedy maximal matching on the given nodes: scan allowed edges in
// ascending order, take an edge whenever both endpoints are still free.
Matching greedy_matching(std::span<const int> nodes, std::span<const Edge> allowed);

// Euler circuit of a connected even-degree multigraph, as a closed node walk
// (front == back).  Stack-based; throws std::invalid_argument when a node
// has odd degree or the edges do not form one connected component.
std::vector<int> euler_circuit(int n, std::span<const Edge> multigraph_edges);

struct ShortcutResult {
  std::vector<int> tour;  // each node once, in first-visit order
  long long weight = 0;
  // Whether every tour edge (including the closing one) passed in_subgraph;
  // when false the tour used edges outside the restricted graph.
  bool within_subgraph = true;
};

// Collapses a closed walk into a tour by skipping repeated nodes, closing
// back to the start.  weight_of prices each tour edge; in_subgraph reports
// membership of an edge in the restricted graph the walk came from.
ShortcutResult shortcut_walk(std::span<const int> walk,
                             const std::function<long long(int, int)>& weight_of,
                             const std::function<bool(int, int)>& in_subgraph);

}  // namespace tourcp
