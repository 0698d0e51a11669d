#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "tourcp/circuit.hpp"
#include "tourcp/geometry.hpp"
#include "tourcp/graphalg.hpp"

namespace tourcp {

// The propagators in this header trade correctness for pruning power: each
// one may remove genuine tours, but whenever it leaves a fully assigned
// store unfailed that assignment is a real tour of the right cost.  A search
// using them can therefore trust every solution it emits, while exhausting
// the tree proves nothing.

struct CrossTableOptions {
  // Table construction is quartic in the node count, so it is refused above
  // this limit instead of silently burning minutes.
  int node_limit = 130;
  int leaf_capacity = 8;
};

class CrossTableLimitError : public std::runtime_error {
public:
  explicit CrossTableLimitError(const std::string& what) : std::runtime_error(what) {}
};

// For every undirected city pair {i,j}, all city pairs {k,l} whose straight
// segment properly crosses segment (i,j).  Symmetric by construction.
class CrossTable {
public:
  static CrossTable build(const TspInstance& inst, const CrossTableOptions& options = {});

  std::span<const std::pair<int, int>> crossing(int i, int j) const;
  int n() const { return n_; }
  std::size_t total_entries() const;

private:
  std::size_t tri_index(int i, int j) const;  // requires i < j

  int n_ = 0;
  std::vector<std::vector<std::pair<int, int>>> lists_;
};

// Undirected view of the graph left by the successor domains: edge {i,j}
// exists while the tour can still use it in either direction, and is fixed
// once some successor variable is assigned across it.
struct InducedGraph {
  int n = 0;
  std::vector<char> present;  // row-major n*n, symmetric
  std::vector<Edge> fixed;    // canonical u < v, deduplicated
  int edge_count = 0;         // undirected count
  int min_degree = 0;

  bool has(int i, int j) const {
    return present[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(j)] != 0;
  }
};

InducedGraph induced_graph(const Store& store, const TspInstance& inst);

// All present edges ascending by (weight, u, v).  When most edges are still
// present the instance's pre-sorted edge list is filtered in order; once
// domains have shrunk below the threshold fraction it is cheaper to collect
// the survivors and sort just those.  Both paths yield the same sequence.
std::vector<Edge> ascending_present_edges(const InducedGraph& graph, const TspInstance& inst,
                                          double reuse_threshold);

// Removes successor values whose edge is known to cross an edge already
// fixed, from a precomputed crossing table.  An optimal tour of a Euclidean
// instance never crosses itself, so the pruning usually only discards
// suboptimal tours - but no such guarantee exists for the tours still
// allowed by an arbitrary store, hence half-checking.
class NclPropagator final : public Propagator {
public:
  NclPropagator(std::shared_ptr<const TspInstance> inst, std::shared_ptr<const CrossTable> table);

  std::string_view name() const override { return "ncl"; }
  std::span<const VarId> scope() const override { return scope_; }
  bool half_checking() const override { return true; }
  bool touches_cost() const override { return true; }
  PropStatus propagate(Store& store) override;

private:
  std::shared_ptr<const TspInstance> inst_;
  std::shared_ptr<const CrossTable> table_;
  int n_;
  std::vector<VarId> scope_;
};

// The on-the-fly variant: follows the fixed successor path from a start
// city and removes the extensions of the path's last node that would cross
// the path drawn so far.  No precomputed table, so it also works for
// instances where building one is too expensive.
class WnclPropagator final : public Propagator {
public:
  WnclPropagator(std::shared_ptr<const TspInstance> inst, int start);

  std::string_view name() const override { return "wncl"; }
  std::span<const VarId> scope() const override { return scope_; }
  bool half_checking() const override { return true; }
  bool touches_cost() const override { return true; }
  PropStatus propagate(Store& store) override;

  int start() const { return start_; }

private:
  std::shared_ptr<const TspInstance> inst_;
  int n_;
  int start_;
  std::vector<VarId> scope_;
};

struct TourWitness {
  std::vector<int> tour;
  long long weight = 0;
  bool within_induced = true;  // whether every tour edge was still present
};

// Upper-bound reasoning on the remaining graph: build a spanning tree that
// honours the fixed edges, fix up odd degrees with a greedy matching (falling
// back to edges outside the remaining graph when needed), walk an Euler
// circuit of the combined multigraph and shortcut it into a tour.  The tour
// is a genuine tour of the instance, so its weight caps the cost interval.
class CbpPropagator final : public Propagator {
public:
  CbpPropagator(std::shared_ptr<const TspInstance> inst, double reuse_threshold = 0.25);

  std::string_view name() const override { return "cbp"; }
  std::span<const VarId> scope() const override { return scope_; }
  bool half_checking() const override { return true; }
  bool touches_cost() const override { return true; }
  bool deferred() const override { return true; }
  PropStatus propagate(Store& store) override;

  // The tour behind the most recent bound update.
  const std::optional<TourWitness>& last_witness() const { return witness_; }

private:
  std::shared_ptr<const TspInstance> inst_;
  int n_;
  double reuse_threshold_;
  std::vector<VarId> scope_;
  std::optional<TourWitness> witness_;
};

// Lower-bound reasoning via the cheapest "spanning tree plus two edges at a
// dedicated hub" relaxation of a tour.  Also assigns the relaxation outright
// when it happens to be a circuit, and heuristically drops the longest edge
// at an over-branched tree node - the step that sacrifices completeness.
class HubTreePropagator final : public Propagator {
public:
  HubTreePropagator(std::shared_ptr<const TspInstance> inst, std::uint64_t seed,
                    double reuse_threshold = 0.25);

  std::string_view name() const override { return "onetree"; }
  std::span<const VarId> scope() const override { return scope_; }
  bool half_checking() const override { return true; }
  bool touches_cost() const override { return true; }
  bool deferred() const override { return true; }
  PropStatus propagate(Store& store) override;

  struct Summary {
    int hub = -1;
    long long bound = 0;
  };
  const std::optional<Summary>& last_summary() const { return summary_; }

private:
  int choose_hub(const Store& store, const InducedGraph& graph) const;
  std::uint64_t succ_state(const Store& store) const;

  std::shared_ptr<const TspInstance> inst_;
  int n_;
  std::uint64_t seed_;
  double reuse_threshold_;
  std::vector<VarId> scope_;
  std::optional<Summary> summary_;
  // Successor-domain snapshot from the previous run; lets the propagator
  // stand down until somebody else changes a variable it actually reads.
  std::uint64_t seen_succ_state_ = 0;
  bool has_seen_state_ = false;
};

struct HalfcheckOptions {
  CrossTableOptions cross_table{};
  double cbp_reuse_threshold = 0.25;
  int path_start = 0;
};

// Builds one of the propagators above by its selection key: "ncl", "wncl",
// "cbp", "onetree", or the debugging key "fail".  A prebuilt crossing table
// may be passed in to share it between assets; "ncl" builds one otherwise.
std::shared_ptr<Propagator> make_halfcheck_propagator(
    std::string_view key, const CircuitModel& model, std::uint64_t seed,
    const HalfcheckOptions& options = {}, std::shared_ptr<const CrossTable> table = nullptr);

}  // namespace tourcp
