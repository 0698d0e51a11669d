#include "tourcp/portfolio.hpp"

namespace tourcp {

PortfolioOutcome portfolio_run(std::span<Asset> assets, const Store& root,
                               const PortfolioOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  SharedIncumbent incumbent;
  if (options.on_incumbent) {
    incumbent.on_improve([&](const SharedIncumbent::Best& best) {
      options.on_incumbent(best, std::chrono::duration<double>(clock::now() - start).count());
    });
  }

  std::vector<SearchRun> runs;
  runs.reserve(assets.size());
  for (Asset& asset : assets)
    runs.emplace_back(asset, root, &incumbent, SolutionSink{}, options.search);

  PortfolioOutcome outcome;
  outcome.asset_stats.resize(assets.size());
  outcome.asset_exhausted.assign(assets.size(), false);

  bool stop = false;
  while (!stop) {
    bool anyone_running = false;
    for (std::size_t i = 0; i < runs.size() && !stop; ++i) {
      if (runs[i].exhausted()) continue;
      anyone_running = true;
      for (std::uint64_t s = 0; s < options.slice_steps; ++s) {
        if (!runs[i].step()) break;
      }
      if (runs[i].exhausted() && assets[i].complete) {
        // A complete asset explored everything under the (monotone) bound:
        // the incumbent is optimal, or the instance has no solution at all.
        outcome.proven_optimal = true;
        stop = true;
      }
      if (options.time_limit &&
          clock::now() - start >= *options.time_limit) {
        outcome.timed_out = true;
        stop = true;
      }
    }
    if (!anyone_running) break;
  }

  for (std::size_t i = 0; i < runs.size(); ++i) {
    outcome.asset_stats[i] = runs[i].stats();
    outcome.asset_exhausted[i] = runs[i].exhausted();
  }
  outcome.incumbent = incumbent.best();
  outcome.wall_seconds = std::chrono::duration<double>(clock::now() - start).count();
  return outcome;
}

bool portfolio_inject_nogood(Asset& asset, const NoGood& nogood) {
  if (asset.complete && nogood.origin_incomplete) return false;
  if (!asset.nogoods) return false;
  asset.nogoods->add(nogood);
  return true;
}

}  // namespace tourcp
