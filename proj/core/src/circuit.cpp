#include "tourcp/circuit.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace tourcp {

bool is_single_circuit(std::span<const int> succ) {
  const int n = static_cast<int>(succ.size());
  if (n == 0) return false;
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  int at = 0;
  for (int steps = 0; steps < n; ++steps) {
    if (at < 0 || at >= n || visited[static_cast<std::size_t>(at)]) return false;
    visited[static_cast<std::size_t>(at)] = true;
    at = succ[static_cast<std::size_t>(at)];
  }
  return at == 0;  // back at the start after exactly n steps
}

long long successor_tour_weight(const TspInstance& inst, std::span<const int> succ) {
  long long total = 0;
  for (int i = 0; i < static_cast<int>(succ.size()); ++i)
    total += inst.weight(i, succ[static_cast<std::size_t>(i)]);
  return total;
}

ChainTable fixed_chains(const Store& store, int n) {
  ChainTable table;
  std::vector<int> next(static_cast<std::size_t>(n), -1);
  std::vector<bool> has_fixed_pred(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(i)));
    if (d.is_assigned()) {
      next[static_cast<std::size_t>(i)] = d.value();
      has_fixed_pred[static_cast<std::size_t>(d.value())] = true;
    }
  }

  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  // Chains begin at nodes with a fixed successor but no fixed predecessor.
  // Mid-propagation a store may transiently give one node two fixed
  // predecessors (it is doomed, but a propagator can still observe it), so a
  // walk must stop when it reaches territory some earlier walk covered.
  for (int i = 0; i < n; ++i) {
    if (next[static_cast<std::size_t>(i)] < 0 || has_fixed_pred[static_cast<std::size_t>(i)])
      continue;
    PathChain chain{i, i, 1};
    int at = i;
    while (next[static_cast<std::size_t>(at)] >= 0) {
      visited[static_cast<std::size_t>(at)] = true;
      at = next[static_cast<std::size_t>(at)];
      ++chain.length;
      if (visited[static_cast<std::size_t>(at)]) break;
    }
    visited[static_cast<std::size_t>(at)] = true;
    chain.end = at;
    table.chains.push_back(chain);
  }
  // Whatever fixed edges remain lie on cycles; only a cycle through all n
  // nodes (a complete tour) is acceptable.
  for (int i = 0; i < n; ++i) {
    if (next[static_cast<std::size_t>(i)] < 0 || visited[static_cast<std::size_t>(i)]) continue;
    int length = 0;
    int at = i;
    while (!visited[static_cast<std::size_t>(at)]) {
      visited[static_cast<std::size_t>(at)] = true;
      at = next[static_cast<std::size_t>(at)];
      ++length;
    }
    if (length < n) table.cycle = true;
  }
  return table;
}

namespace {

std::vector<VarId> succ_scope(int n) {
  std::vector<VarId> scope;
  scope.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) scope.push_back(VarId(static_cast<std::uint32_t>(i)));
  return scope;
}

std::vector<VarId> all_scope(int n) {
  std::vector<VarId> scope;
  scope.reserve(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < 2 * n; ++i) scope.push_back(VarId(static_cast<std::uint32_t>(i)));
  return scope;
}

// Value-consistent alldifferent over the successor variables: an assigned
// value is removed from every other domain.
class AlldiffValueProp final : public Propagator {
public:
  explicit AlldiffValueProp(int n) : n_(n), scope_(succ_scope(n)) {}

  std::string_view name() const override { return "alldiff"; }
  std::span<const VarId> scope() const override { return scope_; }

  PropStatus propagate(Store& store) override {
    bool changed = false;
    for (int i = 0; i < n_; ++i) {
      const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(i)));
      if (!d.is_assigned()) continue;
      const int v = d.value();
      for (int j = 0; j < n_; ++j) {
        if (j == i) continue;
        if (store.remove_value(VarId(static_cast<std::uint32_t>(j)), v)) changed = true;
        if (store.failed()) return PropStatus::Failed;
      }
    }
    return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
  }

private:
  int n_;
  std::vector<VarId> scope_;
};

// Forbids closing a partial path into a short cycle: for every fixed chain
// a -> ... -> b over fewer than n nodes, the edge b -> a is removed.
class SubtourElimProp final : public Propagator {
public:
  explicit SubtourElimProp(int n) : n_(n), scope_(succ_scope(n)) {}

  std::string_view name() const override { return "subtour"; }
  std::span<const VarId> scope() const override { return scope_; }

  PropStatus propagate(Store& store) override {
    const ChainTable table = fixed_chains(store, n_);
    if (table.cycle) {
      store.fail();
      return PropStatus::Failed;
    }
    bool changed = false;
    for (const PathChain& chain : table.chains) {
      if (chain.length >= n_) continue;
      if (store.remove_value(VarId(static_cast<std::uint32_t>(chain.end)), chain.start))
        changed = true;
      if (store.failed()) return PropStatus::Failed;
    }
    return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
  }

private:
  int n_;
  std::vector<VarId> scope_;
};

// Cost interval maintenance from the successor domains: the interval is
// clamped to [sum of row minima, sum of row maxima], and an edge whose
// weight cannot fit under the cost ceiling (relative to every other row's
// minimum) is removed.
class CostBoundsProp final : public Propagator {
public:
  CostBoundsProp(std::shared_ptr<const TspInstance> inst, int n)
      : inst_(std::move(inst)), n_(n), scope_(succ_scope(n)) {}

  std::string_view name() const override { return "cost_bounds"; }
  std::span<const VarId> scope() const override { return scope_; }
  bool touches_cost() const override { return true; }

  PropStatus propagate(Store& store) override {
    std::vector<long long> row_min(static_cast<std::size_t>(n_));
    long long min_sum = 0, max_sum = 0;
    for (int i = 0; i < n_; ++i) {
      const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(i)));
      long long lo = std::numeric_limits<long long>::max();
      long long hi = std::numeric_limits<long long>::min();
      d.for_each([&](int j) {
        const long long w = inst_->weight(i, j);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
      });
      row_min[static_cast<std::size_t>(i)] = lo;
      min_sum += lo;
      max_sum += hi;
    }

    bool changed = false;
    if (store.raise_cost_min(min_sum)) changed = true;
    if (store.failed()) return PropStatus::Failed;
    if (store.lower_cost_max(max_sum)) changed = true;
    if (store.failed()) return PropStatus::Failed;

    for (int i = 0; i < n_; ++i) {
      const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(i)));
      if (d.is_assigned()) continue;
      // Taking edge (i,j) costs at least every other row's minimum on top.
      const long long others = min_sum - row_min[static_cast<std::size_t>(i)];
      for (int j : d.values()) {
        if (others + inst_->weight(i, j) > store.cost_max()) {
          if (store.remove_value(VarId(static_cast<std::uint32_t>(i)), j)) changed = true;
          if (store.failed()) return PropStatus::Failed;
        }
      }
    }
    return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
  }

private:
  std::shared_ptr<const TspInstance> inst_;
  int n_;
  std::vector<VarId> scope_;
};

// Keeps successor and predecessor views consistent:
// j in dom(S_i) if and only if i in dom(P_j).
class InverseChannelProp final : public Propagator {
public:
  explicit InverseChannelProp(int n) : n_(n), scope_(all_scope(n)) {}

  std::string_view name() const override { return "inverse"; }
  std::span<const VarId> scope() const override { return scope_; }

  PropStatus propagate(Store& store) override {
    bool changed = false;
    for (int i = 0; i < n_; ++i) {
      const VarId si(static_cast<std::uint32_t>(i));
      for (int j : store.domain(si).values()) {
        const VarId pj(static_cast<std::uint32_t>(n_ + j));
        if (!store.domain(pj).contains(i)) {
          if (store.remove_value(si, j)) changed = true;
          if (store.failed()) return PropStatus::Failed;
        }
      }
    }
    for (int j = 0; j < n_; ++j) {
      const VarId pj(static_cast<std::uint32_t>(n_ + j));
      for (int i : store.domain(pj).values()) {
        const VarId si(static_cast<std::uint32_t>(i));
        if (!store.domain(si).contains(j)) {
          if (store.remove_value(pj, i)) changed = true;
          if (store.failed()) return PropStatus::Failed;
        }
      }
    }
    return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
  }

private:
  int n_;
  std::vector<VarId> scope_;
};

}  // namespace

CircuitModel::CircuitModel(std::shared_ptr<const TspInstance> instance)
    : instance_(std::move(instance)), n_(instance_ ? instance_->n : 0) {
  if (!instance_) throw std::invalid_argument("circuit model needs an instance");
  if (n_ < 3) throw std::invalid_argument("circuit model needs at least 3 nodes");
}

Store CircuitModel::root_store() const {
  std::vector<Domain> domains;
  domains.reserve(static_cast<std::size_t>(2 * n_));
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < n_; ++i) {
      Domain d(n_);
      d.remove(i);  // no city succeeds or precedes itself
      domains.push_back(std::move(d));
    }
  Store store(std::move(domains));
  long long worst = 0;
  for (int i = 0; i < n_; ++i) {
    long long row = 0;
    for (int j = 0; j < n_; ++j)
      if (j != i) row = std::max(row, static_cast<long long>(instance_->weight(i, j)));
    worst += row;
  }
  store.attach_cost(0, worst);
  return store;
}

std::shared_ptr<Propagator> CircuitModel::make_alldiff_value() const {
  return std::make_shared<AlldiffValueProp>(n_);
}

std::shared_ptr<Propagator> CircuitModel::make_subtour_elimination() const {
  return std::make_shared<SubtourElimProp>(n_);
}

std::shared_ptr<Propagator> CircuitModel::make_cost_bounds() const {
  return std::make_shared<CostBoundsProp>(instance_, n_);
}

std::shared_ptr<Propagator> CircuitModel::make_inverse_channel() const {
  return std::make_shared<InverseChannelProp>(n_);
}

std::vector<std::shared_ptr<Propagator>> CircuitModel::standard_propagators() const {
  return {make_alldiff_value(), make_subtour_elimination(), make_inverse_channel(),
          make_cost_bounds()};
}

bool CircuitModel::check_solution(std::span<const int> succ, long long cost) const {
  if (static_cast<int>(succ.size()) != n_) return false;
  for (int i = 0; i < n_; ++i) {
    const int v = succ[static_cast<std::size_t>(i)];
    if (v < 0 || v >= n_ || v == i) return false;
  }
  if (!is_single_circuit(succ)) return false;
  return successor_tour_weight(*instance_, succ) == cost;
}

}  // namespace tourcp
