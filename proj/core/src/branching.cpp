#include "tourcp/branching.hpp"

#include <algorithm>
#include <cassert>

namespace tourcp {

WarnsdorffBrancher::WarnsdorffBrancher(std::shared_ptr<const TspInstance> inst, int start,
                                       double epsilon, std::uint64_t seed)
    : inst_(std::move(inst)), n_(inst_->n), start_(start), epsilon_(epsilon), rng_(seed) {}

std::optional<VarId> WarnsdorffBrancher::select_variable(const Store& store) {
  // Walk the fixed path from the start city; the first undecided successor
  // on it is the branching variable.  When the path closes it covers every
  // city (shorter cycles are propagated away), so everything is assigned.
  int at = start_;
  std::vector<bool> seen(static_cast<std::size_t>(n_), false);
  for (;;) {
    if (seen[static_cast<std::size_t>(at)]) break;
    seen[static_cast<std::size_t>(at)] = true;
    const Domain& d = store.domain(VarId(static_cast<std::uint32_t>(at)));
    if (!d.is_assigned()) return VarId(static_cast<std::uint32_t>(at));
    at = d.value();
  }
  // Fallback for stores not reachable through this brancher's own path
  // (e.g. hand-built test stores): branch on any undecided successor.
  for (int i = 0; i < n_; ++i)
    if (!store.domain(VarId(static_cast<std::uint32_t>(i))).is_assigned())
      return VarId(static_cast<std::uint32_t>(i));
  return std::nullopt;
}

int WarnsdorffBrancher::select_value(const Store& store, VarId var) {
  const Domain& d = store.domain(var);
  assert(!d.empty());
  const int from = static_cast<int>(var.index);
  // Two cheapest candidate successors; ties prefer the lower city id.
  int best = -1, second = -1;
  for (int v : d.values()) {
    const int w = inst_->weight(from, v);
    if (best < 0 || w < inst_->weight(from, best)) {
      second = best;
      best = v;
    } else if (second < 0 || w < inst_->weight(from, second)) {
      second = v;
    }
  }
  if (second >= 0 && epsilon_ > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng_) < epsilon_) {
      std::uniform_int_distribution<int> pick(0, 1);
      return pick(rng_) == 0 ? best : second;
    }
  }
  return best;
}

}  // namespace tourcp
