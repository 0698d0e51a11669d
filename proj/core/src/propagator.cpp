#include "tourcp/propagator.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace tourcp {

namespace {

// Verifies one propagator step: the result must be a subset of the input
// (contraction) and untouched outside the propagator's scope (locality).  A
// failed result passes both checks since the failed store is a subset of
// everything and equal to any other failed store.
void check_step(const Propagator& p, const Store& before, const Store& after) {
  if (after.failed()) return;
  if (!after.subset_of(before)) {
    std::ostringstream msg;
    msg << "propagator '" << p.name() << "' is not contracting";
    throw ContractViolation(msg.str());
  }
  std::unordered_set<std::uint32_t> in_scope;
  for (VarId v : p.scope()) in_scope.insert(v.index);
  for (int i = 0; i < before.var_count(); ++i) {
    if (in_scope.count(static_cast<std::uint32_t>(i))) continue;
    if (!(before.domain(VarId(static_cast<std::uint32_t>(i))) ==
          after.domain(VarId(static_cast<std::uint32_t>(i))))) {
      std::ostringstream msg;
      msg << "propagator '" << p.name() << "' changed variable " << i << " outside its scope";
      throw ContractViolation(msg.str());
    }
  }
  if (!p.touches_cost() && before.has_cost() &&
      (before.cost_min() != after.cost_min() || before.cost_max() != after.cost_max())) {
    std::ostringstream msg;
    msg << "propagator '" << p.name() << "' changed the cost interval without declaring it";
    throw ContractViolation(msg.str());
  }
}

}  // namespace

FixpointResult propagate_fixpoint(std::span<const std::shared_ptr<Propagator>> props,
                                  Store& store, const FixpointOptions& options) {
  if (store.failed()) return FixpointResult::Failed;

  const std::size_t n = props.size();
  std::deque<std::size_t> normal;
  std::deque<std::size_t> deferred;
  std::vector<bool> queued(n, false);
  std::vector<bool> subsumed(n, false);

  auto enqueue = [&](std::size_t i) {
    if (queued[i] || subsumed[i]) return;
    queued[i] = true;
    if (props[i]->deferred())
      deferred.push_back(i);
    else
      normal.push_back(i);
  };

  for (std::size_t i = 0; i < n; ++i) enqueue(i);

  while (!normal.empty() || !deferred.empty()) {
    std::size_t i;
    if (!normal.empty()) {
      i = normal.front();
      normal.pop_front();
    } else {
      i = deferred.front();
      deferred.pop_front();
    }
    queued[i] = false;

    Propagator& p = *props[i];
    const std::uint64_t before_version = store.version();
    PropStatus status;
    if (options.check_contracts) {
      const Store snapshot = store;
      status = p.propagate(store);
      check_step(p, snapshot, store);
    } else {
      status = p.propagate(store);
    }

    if (status == PropStatus::Failed || store.failed()) return FixpointResult::Failed;
    if (status == PropStatus::Subsumed) subsumed[i] = true;

    const bool changed = store.version() != before_version;
    if (changed) {
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) enqueue(j);
    }
    if (status == PropStatus::NotAtFixpoint) enqueue(i);
  }
  return FixpointResult::Stable;
}

}  // namespace tourcp
