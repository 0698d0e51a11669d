#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tourcp/search.hpp"

namespace tourcp {

struct PortfolioOptions {
  std::optional<std::chrono::duration<double>> time_limit;
  SearchOptions search{};
  // How many search steps each asset advances before the scheduler moves on.
  // Scheduling is deterministic: assets are stepped round-robin in slices, so
  // a run that ends by exhaustion is reproducible node for node.
  std::uint64_t slice_steps = 64;
  // Invoked after every accepted incumbent with the elapsed wall time.
  std::function<void(const SharedIncumbent::Best&, double)> on_incumbent;
};

struct PortfolioOutcome {
  std::optional<SharedIncumbent::Best> incumbent;
  bool proven_optimal = false;  // some complete asset exhausted its tree
  bool timed_out = false;
  std::vector<SearchStats> asset_stats;
  std::vector<bool> asset_exhausted;
  double wall_seconds = 0.0;

  // A complete asset ran dry without any solution ever appearing.
  bool proven_infeasible() const { return proven_optimal && !incumbent; }
};

// Runs every asset on the root store until a complete asset exhausts its
// search space, all assets are exhausted, or the time limit expires.  The
// only mutable state shared between assets is the incumbent: its cost bound
// prunes in every asset, which is safe because a bound never cuts off a
// strictly better solution.  No-goods are never shared implicitly.
PortfolioOutcome portfolio_run(std::span<Asset> assets, const Store& root,
                               const PortfolioOptions& options = {});

// Offers a no-good to an asset, enforcing the hygiene rule: a no-good whose
// origin was an incomplete search prunes soundly only there, so a complete
// asset must reject it.  Returns whether the no-good was installed.
bool portfolio_inject_nogood(Asset& asset, const NoGood& nogood);

}  // namespace tourcp
