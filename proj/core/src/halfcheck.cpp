#include "tourcp/halfcheck.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <random>
#include <sstream>

namespace tourcp {

namespace {

std::vector<VarId> succ_scope(int n) {
  std::vector<VarId> scope;
  scope.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) scope.push_back(VarId(static_cast<std::uint32_t>(i)));
  return scope;
}

// Once every successor variable is assigned the propagator turns checker:
// a genuine tour of consistent weight pins the cost and is accepted, and
// anything else fails the store.  This is what makes each propagator in this
// translation unit safe to trust on full assignments even when run alone.
std::optional<PropStatus> finalize_if_assigned(Store& store, const TspInstance& inst, int n) {
  std::vector<int> succ(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(i)));
    if (!d.is_assigned()) return std::nullopt;
    succ[static_cast<std::size_t>(i)] = d.value();
  }
  bool valid = true;
  for (int i = 0; i < n && valid; ++i) {
    const int v = succ[static_cast<std::size_t>(i)];
    if (v < 0 || v >= n || v == i) valid = false;
  }
  if (valid) valid = is_single_circuit(succ);
  if (valid) {
    const long long w = successor_tour_weight(inst, succ);
    if (w < store.cost_min() || w > store.cost_max()) {
      valid = false;
    } else {
      store.raise_cost_min(w);
      store.lower_cost_max(w);
      if (store.failed()) return PropStatus::Failed;
      return PropStatus::Subsumed;
    }
  }
  store.fail();
  return PropStatus::Failed;
}

}  // namespace

std::size_t CrossTable::tri_index(int i, int j) const {
  assert(i < j);
  return static_cast<std::size_t>(i) * (2 * static_cast<std::size_t>(n_) - i - 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}

CrossTable CrossTable::build(const TspInstance& inst, const CrossTableOptions& options) {
  if (inst.n > options.node_limit) {
    std::ostringstream msg;
    msg << "crossing table for " << inst.n << " nodes refused: limit is " << options.node_limit
        << " nodes (construction cost grows with the fourth power of the node count; raise the"
           " limit explicitly to force it)";
    throw CrossTableLimitError(msg.str());
  }

  CrossTable table;
  table.n_ = inst.n;
  const int n = inst.n;
  const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  table.lists_.resize(pairs);

  std::vector<Segment> segments;
  segments.reserve(pairs);
  std::vector<std::pair<int, int>> pair_of_id(pairs);
  int id = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      segments.push_back(Segment{inst.coords[static_cast<std::size_t>(i)],
                                 inst.coords[static_cast<std::size_t>(j)], id});
      pair_of_id[static_cast<std::size_t>(id)] = {i, j};
      ++id;
    }

  const SegmentIndex index = SegmentIndex::build(segments, options.leaf_capacity);
  for (std::size_t p = 0; p < pairs; ++p) {
    for (int hit : index.query_crossing(segments[p]))
      table.lists_[p].push_back(pair_of_id[static_cast<std::size_t>(hit)]);
  }
  return table;
}

std::span<const std::pair<int, int>> CrossTable::crossing(int i, int j) const {
  if (i == j) return {};
  if (i > j) std::swap(i, j);
  return lists_[tri_index(i, j)];
}

std::size_t CrossTable::total_entries() const {
  std::size_t total = 0;
  for (const auto& list : lists_) total += list.size();
  return total;
}

InducedGraph induced_graph(const Store& store, const TspInstance& inst) {
  InducedGraph g;
  g.n = inst.n;
  const int n = g.n;
  g.present.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  std::vector<int> degree(static_cast<std::size_t>(n), 0);

  for (int i = 0; i < n; ++i) {
    const Domain& di = store.domain(VarId(static_cast<std::uint32_t>(i)));
    for (int j = i + 1; j < n; ++j) {
      const bool usable =
          di.contains(j) || store.domain(VarId(static_cast<std::uint32_t>(j))).contains(i);
      if (!usable) continue;
      g.present[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(j)] = 1;
      g.present[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(i)] = 1;
      ++g.edge_count;
      ++degree[static_cast<std::size_t>(i)];
      ++degree[static_cast<std::size_t>(j)];
    }
  }

  std::vector<char> fixed_seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const Domain& di = store.domain(VarId(static_cast<std::uint32_t>(i)));
    if (!di.is_assigned()) continue;
    const int v = di.value();
    const int u = std::min(i, v), w = std::max(i, v);
    const std::size_t key =
        static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(w);
    if (fixed_seen[key]) continue;
    fixed_seen[key] = 1;
    g.fixed.push_back(Edge{u, w, inst.weight(u, w)});
  }

  g.min_degree = n > 0 ? *std::min_element(degree.begin(), degree.end()) : 0;
  return g;
}

std::vector<Edge> ascending_present_edges(const InducedGraph& graph, const TspInstance& inst,
                                          double reuse_threshold) {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(graph.edge_count));
  const double total = static_cast<double>(graph.n) * (graph.n - 1) / 2.0;
  if (static_cast<double>(graph.edge_count) > reuse_threshold * total) {
    // Most edges survive: walk the instance's pre-sorted list and filter.
    for (const Edge& e : inst.edges_by_weight)
      if (graph.has(e.u, e.v)) out.push_back(e);
  } else {
    // Sparse leftovers: gather and sort just those.
    for (int i = 0; i < graph.n; ++i)
      for (int j = i + 1; j < graph.n; ++j)
        if (graph.has(i, j)) out.push_back(Edge{i, j, inst.weight(i, j)});
    std::sort(out.begin(), out.end(), edge_less);
  }
  return out;
}

NclPropagator::NclPropagator(std::shared_ptr<const TspInstance> inst,
                             std::shared_ptr<const CrossTable> table)
    : inst_(std::move(inst)), table_(std::move(table)), n_(inst_->n), scope_(succ_scope(n_)) {}

PropStatus NclPropagator::propagate(Store& store) {
  if (auto status = finalize_if_assigned(store, *inst_, n_)) return *status;
  bool changed = false;
  for (int i = 0; i < n_; ++i) {
    const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(i)));
    if (!d.is_assigned()) continue;
    // Edge i -> v is in the tour, so no edge crossing it can be: both
    // orientations of every crossing pair go.
    const int v = d.value();
    for (const auto& [k, l] : table_->crossing(i, v)) {
      if (store.remove_value(VarId(static_cast<std::uint32_t>(k)), l)) changed = true;
      if (store.failed()) return PropStatus::Failed;
      if (store.remove_value(VarId(static_cast<std::uint32_t>(l)), k)) changed = true;
      if (store.failed()) return PropStatus::Failed;
    }
  }
  return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
}

WnclPropagator::WnclPropagator(std::shared_ptr<const TspInstance> inst, int start)
    : inst_(std::move(inst)), n_(inst_->n), start_(start), scope_(succ_scope(n_)) {}

PropStatus WnclPropagator::propagate(Store& store) {
  if (auto status = finalize_if_assigned(store, *inst_, n_)) return *status;

  // The fixed path is recomputed from scratch: it is cheap relative to the
  // crossing tests and avoids stale state across backtracking.
  std::vector<int> path{start_};
  std::vector<bool> on_path(static_cast<std::size_t>(n_), false);
  on_path[static_cast<std::size_t>(start_)] = true;
  for (;;) {
    const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(path.back())));
    if (!d.is_assigned()) break;
    const int next = d.value();
    if (next < 0 || next >= n_ || on_path[static_cast<std::size_t>(next)]) break;
    path.push_back(next);
    on_path[static_cast<std::size_t>(next)] = true;
  }
  if (path.size() < 2) return PropStatus::AtFixpoint;

  const int last = path.back();
  const Point& last_pt = inst_->coords[static_cast<std::size_t>(last)];
  bool changed = false;
  for (int v : store.domain(VarId(static_cast<std::uint32_t>(last))).values()) {
    const Segment candidate{last_pt, inst_->coords[static_cast<std::size_t>(v)], -1};
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const Segment walked{inst_->coords[static_cast<std::size_t>(path[k])],
                           inst_->coords[static_cast<std::size_t>(path[k + 1])], -1};
      if (segments_cross(candidate, walked)) {
        if (store.remove_value(VarId(static_cast<std::uint32_t>(last)), v)) changed = true;
        break;
      }
    }
    if (store.failed()) return PropStatus::Failed;
  }
  return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
}

CbpPropagator::CbpPropagator(std::shared_ptr<const TspInstance> inst, double reuse_threshold)
    : inst_(std::move(inst)),
      n_(inst_->n),
      reuse_threshold_(reuse_threshold),
      scope_(succ_scope(n_)) {}

PropStatus CbpPropagator::propagate(Store& store) {
  if (auto status = finalize_if_assigned(store, *inst_, n_)) return *status;

  const InducedGraph graph = induced_graph(store, *inst_);
  const std::vector<Edge> edges = ascending_present_edges(graph, *inst_, reuse_threshold_);

  const auto tree = kruskal_with_fixed(n_, edges, graph.fixed);
  if (!tree) {
    // The remaining graph cannot even be connected, let alone toured.
    store.fail();
    return PropStatus::Failed;
  }

  std::vector<int> odd;
  std::vector<char> is_odd(static_cast<std::size_t>(n_), 0);
  for (int v = 0; v < n_; ++v)
    if (tree->degree[static_cast<std::size_t>(v)] % 2 != 0) {
      odd.push_back(v);
      is_odd[static_cast<std::size_t>(v)] = 1;
    }

  // Pair the odd-degree nodes greedily, preferring edges the domains still
  // allow; nodes that cannot be paired inside the remaining graph fall back
  // to arbitrary instance edges.
  std::vector<Edge> allowed;
  for (const Edge& e : edges)
    if (is_odd[static_cast<std::size_t>(e.u)] && is_odd[static_cast<std::size_t>(e.v)])
      allowed.push_back(e);
  Matching matching = greedy_matching(odd, allowed);

  std::vector<Edge> multigraph = tree->edges;
  multigraph.insert(multigraph.end(), matching.pairs.begin(), matching.pairs.end());

  if (!matching.unmatched.empty()) {
    std::vector<char> open(static_cast<std::size_t>(n_), 0);
    for (int v : matching.unmatched) open[static_cast<std::size_t>(v)] = 1;
    std::vector<Edge> fallback;
    for (const Edge& e : inst_->edges_by_weight)
      if (open[static_cast<std::size_t>(e.u)] && open[static_cast<std::size_t>(e.v)])
        fallback.push_back(e);
    const Matching rest = greedy_matching(matching.unmatched, fallback);
    if (!rest.unmatched.empty()) return PropStatus::AtFixpoint;  // no bound rather than a guess
    multigraph.insert(multigraph.end(), rest.pairs.begin(), rest.pairs.end());
  }

  const std::vector<int> walk = euler_circuit(n_, multigraph);
  const ShortcutResult sc = shortcut_walk(
      walk, [this](int u, int v) { return static_cast<long long>(inst_->weight(u, v)); },
      [&graph](int u, int v) { return graph.has(u, v); });

  witness_ = TourWitness{sc.tour, sc.weight, sc.within_subgraph};
  const bool changed = store.lower_cost_max(sc.weight);
  if (store.failed()) return PropStatus::Failed;
  return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
}

HubTreePropagator::HubTreePropagator(std::shared_ptr<const TspInstance> inst, std::uint64_t seed,
                                     double reuse_threshold)
    : inst_(std::move(inst)),
      n_(inst_->n),
      seed_(seed),
      reuse_threshold_(reuse_threshold),
      scope_(succ_scope(n_)) {}

int HubTreePropagator::choose_hub(const Store& store, const InducedGraph& graph) const {
  long long best = -1;
  std::vector<int> ties;
  for (int i = 0; i < n_; ++i) {
    if (store.domain(VarId(static_cast<std::uint32_t>(i))).is_assigned()) continue;
    long long s1 = std::numeric_limits<long long>::max();
    long long s2 = std::numeric_limits<long long>::max();
    for (int j = 0; j < n_; ++j) {
      if (j == i || !graph.has(i, j)) continue;
      const long long w = inst_->weight(i, j);
      if (w < s1) {
        s2 = s1;
        s1 = w;
      } else if (w < s2) {
        s2 = w;
      }
    }
    if (s2 == std::numeric_limits<long long>::max()) continue;
    const long long score = s1 + s2;
    if (score > best) {
      best = score;
      ties.assign(1, i);
    } else if (score == best) {
      ties.push_back(i);
    }
  }
  if (ties.empty()) return 0;
  if (ties.size() == 1) return ties.front();
  // Deterministic for a given store and seed: the tie-break stream is keyed
  // on how far the store has been assigned.
  std::mt19937_64 rng(seed_ ^
                      (0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(store.assigned_count()) + 1)));
  return ties[static_cast<std::size_t>(rng() % ties.size())];
}

std::uint64_t HubTreePropagator::succ_state(const Store& store) const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < n_; ++i) {
    mix(0x100 + static_cast<std::uint64_t>(i));
    store.domain(VarId(static_cast<std::uint32_t>(i))).for_each([&](int v) {
      mix(static_cast<std::uint64_t>(v) + 1);
    });
  }
  return h;
}

PropStatus HubTreePropagator::propagate(Store& store) {
  if (auto status = finalize_if_assigned(store, *inst_, n_)) return *status;

  // The propagation loop wakes every propagator whenever anything in the
  // store moves, including variables this one never reads (the predecessor
  // mirror of its own removals, say).  The edge-dropping rule below must fire
  // once per change of the successor domains, not once per wake-up, or it
  // feeds on its own echo until the graph degenerates.
  const std::uint64_t entry_state = succ_state(store);
  if (has_seen_state_ && entry_state == seen_succ_state_) return PropStatus::AtFixpoint;

  const InducedGraph graph = induced_graph(store, *inst_);
  if (graph.min_degree < 2) {
    // A city with fewer than two usable edges can never sit on a tour.
    store.fail();
    return PropStatus::Failed;
  }

  const int hub = choose_hub(store, graph);
  const std::vector<Edge> edges = ascending_present_edges(graph, *inst_, reuse_threshold_);
  const auto hub_tree = min_hub_tree(n_, edges, hub, graph.fixed);
  if (!hub_tree) {
    store.fail();
    return PropStatus::Failed;
  }
  summary_ = Summary{hub, hub_tree->weight};

  // Every tour is a hub tree, so no tour is cheaper than the cheapest one.
  bool changed = store.raise_cost_min(hub_tree->weight);
  if (store.failed()) return PropStatus::Failed;

  if (hub_tree->is_circuit()) {
    // The relaxation is itself a tour: adopt it in whichever direction the
    // successor domains still allow.
    std::vector<std::array<int, 2>> neighbours(static_cast<std::size_t>(n_), {-1, -1});
    auto link = [&](int a, int b) {
      auto& slot = neighbours[static_cast<std::size_t>(a)];
      (slot[0] < 0 ? slot[0] : slot[1]) = b;
    };
    for (const Edge& e : hub_tree->tree_edges) {
      link(e.u, e.v);
      link(e.v, e.u);
    }
    for (const Edge& e : hub_tree->hub_edges) {
      link(e.u, e.v);
      link(e.v, e.u);
    }
    std::vector<int> cycle{hub};
    int prev = hub;
    int at = neighbours[static_cast<std::size_t>(hub)][0];
    while (at != hub) {
      cycle.push_back(at);
      const auto& slot = neighbours[static_cast<std::size_t>(at)];
      const int next = slot[0] == prev ? slot[1] : slot[0];
      prev = at;
      at = next;
    }
    auto orientation_allowed = [&](bool forward) {
      for (std::size_t k = 0; k < cycle.size(); ++k) {
        const int u = cycle[k];
        const int v = cycle[(k + 1) % cycle.size()];
        const int from = forward ? u : v;
        const int to = forward ? v : u;
        if (!store.domain(VarId(static_cast<std::uint32_t>(from))).contains(to)) return false;
      }
      return true;
    };
    const bool fwd = orientation_allowed(true);
    const bool bwd = !fwd && orientation_allowed(false);
    if (fwd || bwd) {
      for (std::size_t k = 0; k < cycle.size(); ++k) {
        const int u = cycle[k];
        const int v = cycle[(k + 1) % cycle.size()];
        const int from = fwd ? u : v;
        const int to = fwd ? v : u;
        if (store.assign(VarId(static_cast<std::uint32_t>(from)), to)) changed = true;
        if (store.failed()) return PropStatus::Failed;
      }
    }
    if (changed) {
      // Deliberately no snapshot: the next run must reach the full-assignment
      // verdict above, which vouches for the adopted tour.
      return PropStatus::NotAtFixpoint;
    }
    seen_succ_state_ = entry_state;
    has_seen_state_ = true;
    return PropStatus::AtFixpoint;
  }

  // Heuristic pruning: a tour visits every city exactly twice-adjacent, so a
  // tree node of degree three or more carries at least one edge too many.
  // Dropping its longest non-fixed edge keeps the relaxation honest often
  // enough to pay off, but can discard tours - the half-checking bargain.
  int node = -1;
  for (int v = 0; v < n_; ++v) {
    const int d = hub_tree->tree_degree[static_cast<std::size_t>(v)];
    if (d > 2 && (node < 0 || d > hub_tree->tree_degree[static_cast<std::size_t>(node)]))
      node = v;
  }
  if (node >= 0) {
    std::vector<char> fixed_flag(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0);
    for (const Edge& e : graph.fixed)
      fixed_flag[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(n_) +
                 static_cast<std::size_t>(e.v)] = 1;
    const Edge* longest = nullptr;
    for (const Edge& e : hub_tree->tree_edges) {
      if (e.u != node && e.v != node) continue;
      if (fixed_flag[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(n_) +
                     static_cast<std::size_t>(e.v)])
        continue;
      if (!longest || e.w > longest->w) longest = &e;
    }
    if (longest) {
      if (store.remove_value(VarId(static_cast<std::uint32_t>(longest->u)), longest->v))
        changed = true;
      if (store.failed()) return PropStatus::Failed;
      if (store.remove_value(VarId(static_cast<std::uint32_t>(longest->v)), longest->u))
        changed = true;
      if (store.failed()) return PropStatus::Failed;
    }
  }
  // The snapshot covers this run's own removals, so a wake-up that brings no
  // new successor information returns immediately instead of dropping the
  // next edge.  Claiming a fixpoint is honest for the same reason.
  seen_succ_state_ = changed ? succ_state(store) : entry_state;
  has_seen_state_ = true;
  return PropStatus::AtFixpoint;
}

std::shared_ptr<Propagator> make_halfcheck_propagator(std::string_view key,
                                                      const CircuitModel& model,
                                                      std::uint64_t seed,
                                                      const HalfcheckOptions& options,
                                                      std::shared_ptr<const CrossTable> table) {
  if (key == "ncl") {
    if (!table)
      table = std::make_shared<const CrossTable>(
          CrossTable::build(model.instance(), options.cross_table));
    return std::make_shared<NclPropagator>(model.instance_ptr(), std::move(table));
  }
  if (key == "wncl")
    return std::make_shared<WnclPropagator>(model.instance_ptr(), options.path_start);
  if (key == "cbp")
    return std::make_shared<CbpPropagator>(model.instance_ptr(), options.cbp_reuse_threshold);
  if (key == "onetree")
    return std::make_shared<HubTreePropagator>(model.instance_ptr(), seed,
                                               options.cbp_reuse_threshold);
  if (key == "fail") return std::make_shared<FailPropagator>();
  throw std::invalid_argument("unknown propagator key: " + std::string(key));
}

}  // namespace tourcp
