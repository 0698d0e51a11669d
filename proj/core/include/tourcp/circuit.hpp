#pragma once

#include <memory>
#include <span>
#include <vector>

#include "tourcp/propagator.hpp"
#include "tourcp/tsplib.hpp"

namespace tourcp {

// True when succ is a single Hamiltonian circuit over all its nodes:
// following successors from node 0 visits every node exactly once and comes
// back.  Deliberately a plain walk, independent of any propagator.
bool is_single_circuit(std::span<const int> succ);

// Total weight of the successor edges (caller must pass a permutation).
long long successor_tour_weight(const TspInstance& inst, std::span<const int> succ);

// One maximal run of already-decided successor edges: start -> ... -> end
// over `length` nodes.
struct PathChain {
  int start = 0;
  int end = 0;
  int length = 1;
};

// The chains of fixed successor edges in the store (successor variables are
// 0..n-1).  Stores with a fixed cycle shorter than n report it via `cycle`.
struct ChainTable {
  std::vector<PathChain> chains;
  bool cycle = false;
};
ChainTable fixed_chains(const Store& store, int n);

// Variable layout and propagators for one tour-finding model: successor
// variables S_0..S_{n-1}, mirrored predecessor variables P_0..P_{n-1}, and
// the integer cost interval.  A solution assigns every S_i a distinct
// successor forming one circuit whose weight is the cost value.
class CircuitModel {
public:
  explicit CircuitModel(std::shared_ptr<const TspInstance> instance);

  int n() const { return n_; }
  int var_count() const { return 2 * n_; }
  VarId succ_var(int i) const { return VarId(static_cast<std::uint32_t>(i)); }
  VarId pred_var(int i) const { return VarId(static_cast<std::uint32_t>(n_ + i)); }

  const TspInstance& instance() const { return *instance_; }
  std::shared_ptr<const TspInstance> instance_ptr() const { return instance_; }

  // Fresh root store: S_i and P_i range over all other nodes; the cost
  // interval spans from zero to the sum of each node's worst outgoing edge.
  Store root_store() const;

  std::shared_ptr<Propagator> make_alldiff_value() const;
  std::shared_ptr<Propagator> make_subtour_elimination() const;
  std::shared_ptr<Propagator> make_cost_bounds() const;
  std::shared_ptr<Propagator> make_inverse_channel() const;
  // The four above, in scheduling order.
  std::vector<std::shared_ptr<Propagator>> standard_propagators() const;

  // Full validation of a candidate solution against the constraint itself.
  bool check_solution(std::span<const int> succ, long long cost) const;

private:
  std::shared_ptr<const TspInstance> instance_;
  int n_;
};

}  // namespace tourcp
