#include "testutil.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "tourcp/graphalg.hpp"

namespace tourcp::testutil {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// dp[mask][j]: cheapest path 0 -> ... -> j+1 visiting exactly the cities
// {i+1 : bit i of mask}.  parent reconstructs one optimal path.
struct HeldKarp {
  int n;
  std::vector<long long> dp;
  std::vector<int> parent;

  explicit HeldKarp(const TspInstance& inst) : n(inst.n) {
    if (n < 3 || n > 13) throw std::invalid_argument("held_karp: n out of supported range");
    const int m = std::min(n, 13) - 1;  // provable bound for the mask loops
    const std::size_t size = (std::size_t(1) << m) * static_cast<std::size_t>(m);
    dp.assign(size, kInf);
    parent.assign(size, -1);
    for (int j = 0; j < m; ++j)
      at(1u << j, j) = inst.weight(0, j + 1);
    for (unsigned mask = 1; mask < (1u << m); ++mask)
      for (int j = 0; j < m; ++j) {
        if (!(mask & (1u << j)) || at(mask, j) >= kInf) continue;
        for (int k = 0; k < m; ++k) {
          if (mask & (1u << k)) continue;
          const unsigned next = mask | (1u << k);
          const long long cand = at(mask, j) + inst.weight(j + 1, k + 1);
          if (cand < at(next, k)) {
            at(next, k) = cand;
            parent_at(next, k) = j;
          }
        }
      }
  }

  long long& at(unsigned mask, int j) {
    return dp[static_cast<std::size_t>(mask) * static_cast<std::size_t>(n - 1) +
              static_cast<std::size_t>(j)];
  }
  int& parent_at(unsigned mask, int j) {
    return parent[static_cast<std::size_t>(mask) * static_cast<std::size_t>(n - 1) +
                  static_cast<std::size_t>(j)];
  }
};

}  // namespace

long long held_karp_optimum(const TspInstance& inst) {
  HeldKarp hk(inst);
  const int m = std::min(inst.n, 13) - 1;
  const unsigned full = (1u << m) - 1;
  long long best = kInf;
  for (int j = 0; j < m; ++j)
    best = std::min(best, hk.at(full, j) + inst.weight(j + 1, 0));
  return best;
}

std::vector<int> held_karp_tour(const TspInstance& inst) {
  HeldKarp hk(inst);
  const int m = std::min(inst.n, 13) - 1;
  const unsigned full = (1u << m) - 1;
  long long best = kInf;
  int last = -1;
  for (int j = 0; j < m; ++j) {
    const long long cand = hk.at(full, j) + inst.weight(j + 1, 0);
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  std::vector<int> rev;
  unsigned mask = full;
  // The parent chain has exactly one link per city beyond the start.
  for (int j = last, steps = 0; j >= 0 && steps < m; ++steps) {
    rev.push_back(j + 1);
    const int p = hk.parent_at(mask, j);
    mask &= ~(1u << j);
    j = p;
  }
  std::vector<int> order{0};
  order.insert(order.end(), rev.rbegin(), rev.rend());
  return order;
}

std::vector<int> order_to_successors(std::span<const int> order) {
  std::vector<int> succ(order.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    succ[static_cast<std::size_t>(order[k])] =
        order[(k + 1) % order.size()];
  return succ;
}

std::vector<std::vector<int>> all_circuit_successors(int n) {
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> order{0};
    order.insert(order.end(), rest.begin(), rest.end());
    out.push_back(order_to_successors(order));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

namespace {

// Recursively chooses `need` more edges starting at index `from`, testing
// spanning at each full selection.
void mst_search(std::span<const Edge> edges, std::span<const int> nodes,
                const std::vector<int>& local, std::vector<int>& chosen, std::size_t from,
                std::size_t need, long long weight_so_far, long long& best) {
  if (need == 0) {
    UnionFind uf(static_cast<int>(nodes.size()));
    for (const int idx : chosen) {
      const Edge& e = edges[static_cast<std::size_t>(idx)];
      if (!uf.unite(local[static_cast<std::size_t>(e.u)], local[static_cast<std::size_t>(e.v)]))
        return;  // cycle
    }
    if (uf.components() == 1) best = std::min(best, weight_so_far);
    return;
  }
  if (weight_so_far >= best) return;
  for (std::size_t i = from; i + need <= edges.size(); ++i) {
    chosen.push_back(static_cast<int>(i));
    mst_search(edges, nodes, local, chosen, i + 1, need - 1, weight_so_far + edges[i].w, best);
    chosen.pop_back();
  }
}

}  // namespace

long long brute_mst_weight(std::span<const int> nodes, std::span<const Edge> edges) {
  if (nodes.size() <= 1) return 0;
  int max_node = 0;
  for (const int v : nodes) max_node = std::max(max_node, v);
  std::vector<int> local(static_cast<std::size_t>(max_node) + 1, -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) local[static_cast<std::size_t>(nodes[i])] =
      static_cast<int>(i);
  std::vector<Edge> usable;
  for (const Edge& e : edges)
    if (e.u <= max_node && e.v <= max_node && local[static_cast<std::size_t>(e.u)] >= 0 &&
        local[static_cast<std::size_t>(e.v)] >= 0)
      usable.push_back(e);
  long long best = kInf;
  std::vector<int> chosen;
  mst_search(usable, nodes, local, chosen, 0, nodes.size() - 1, 0, best);
  return best >= kInf ? -1 : best;
}

long long brute_min_hub_tree_weight(const TspInstance& inst, int hub) {
  std::vector<int> others;
  for (int v = 0; v < inst.n; ++v)
    if (v != hub) others.push_back(v);
  const long long tree = brute_mst_weight(others, inst.edges_by_weight);
  if (tree < 0) return -1;
  long long best_pair = kInf;
  for (std::size_t a = 0; a < others.size(); ++a)
    for (std::size_t b = a + 1; b < others.size(); ++b)
      best_pair = std::min(best_pair, static_cast<long long>(inst.weight(hub, others[a])) +
                                          inst.weight(hub, others[b]));
  return best_pair >= kInf ? -1 : tree + best_pair;
}

std::vector<std::uint64_t> luby_reference(std::size_t count) {
  std::vector<std::uint64_t> s{1};
  while (s.size() < count) {
    const std::size_t prev = s.size();
    for (std::size_t i = 0; i < prev; ++i) s.push_back(s[i]);
    s.push_back(2 * s[prev - 1]);
  }
  s.resize(count);
  return s;
}

std::vector<std::pair<int, int>> brute_crossings(std::span<const Segment> segments) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < segments.size(); ++i)
    for (std::size_t j = i + 1; j < segments.size(); ++j)
      if (segments_cross(segments[i], segments[j])) {
        const int a = segments[i].id;
        const int b = segments[j].id;
        out.emplace_back(std::min(a, b), std::max(a, b));
      }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tourcp::testutil
