#include "tourcp/search.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

namespace tourcp {

std::uint64_t luby(std::uint64_t i) {
  if (i == 0) throw std::invalid_argument("luby is 1-based");
  // Walk down the sequence structure: if i+1 is a power of two the value is
  // half of it, otherwise strip the largest completed block and repeat.
  for (;;) {
    const std::uint64_t block = std::bit_floor(i + 1);
    if (block == i + 1) return block >> 1;
    i -= block - 1;
  }
}

std::vector<NoGood> extract_nogoods(std::span<const Decision> path, bool origin_complete) {
  std::vector<NoGood> out;
  std::vector<Decision> positives;
  for (const Decision& d : path) {
    if (d.polarity == Polarity::Assign) {
      positives.push_back(d);
    } else {
      NoGood ng;
      ng.decisions = positives;
      ng.decisions.push_back(Decision{d.var, d.value, Polarity::Assign});
      ng.origin_incomplete = !origin_complete;
      out.push_back(std::move(ng));
    }
  }
  return out;
}

NoGoodStore::NoGoodStore(int var_count) {
  scope_.reserve(static_cast<std::size_t>(var_count));
  for (int i = 0; i < var_count; ++i) scope_.push_back(VarId(static_cast<std::uint32_t>(i)));
}

void NoGoodStore::add(NoGood ng) {
  nogoods_.push_back(std::move(ng));
}

PropStatus NoGoodStore::propagate(Store& store) {
  bool changed = false;
  for (const NoGood& ng : nogoods_) {
    int pending = -1;
    bool disabled = false;
    for (std::size_t k = 0; k < ng.decisions.size(); ++k) {
      const Decision& d = ng.decisions[k];
      const Domain& dom = store.domain(d.var);
      if (!dom.contains(d.value)) {
        disabled = true;  // some required assignment is already impossible
        break;
      }
      if (!dom.is_assigned()) {
        if (pending >= 0) {
          pending = -2;  // two or more undecided: nothing to do yet
          break;
        }
        pending = static_cast<int>(k);
      }
    }
    if (disabled || pending == -2) continue;
    if (pending == -1) {
      // Every assignment of the forbidden conjunction holds.
      store.fail();
      return PropStatus::Failed;
    }
    const Decision& unit = ng.decisions[static_cast<std::size_t>(pending)];
    if (store.remove_value(unit.var, unit.value)) changed = true;
    if (store.failed()) return PropStatus::Failed;
  }
  return changed ? PropStatus::NotAtFixpoint : PropStatus::AtFixpoint;
}

Asset Asset::make(std::string name, std::vector<std::shared_ptr<Propagator>> propagators,
                  std::shared_ptr<Brancher> brancher, int var_count, bool complete,
                  bool nogood_recording, RestartPolicy restarts, std::uint64_t seed) {
  Asset a;
  a.name = std::move(name);
  a.propagators = std::move(propagators);
  a.nogoods = std::make_shared<NoGoodStore>(var_count);
  a.brancher = std::move(brancher);
  a.restarts = restarts;
  a.nogood_recording = nogood_recording;
  a.seed = seed;
  // An asset holding any half-checking propagator may drop solutions, so its
  // exhaustion proves nothing; the completeness claim is withdrawn.
  a.complete = complete && !a.any_half_checking();
  return a;
}

bool Asset::any_half_checking() const {
  for (const auto& p : propagators)
    if (p->half_checking()) return true;
  for (const auto& group : rotation)
    for (const auto& p : group)
      if (p->half_checking()) return true;
  return false;
}

bool SharedIncumbent::offer(std::span<const int> assignment, long long cost) {
  std::function<void(const Best&)> cb;
  Best improved;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (best_ && best_->cost <= cost) return false;
    best_ = Best{std::vector<int>(assignment.begin(), assignment.end()), cost};
    improved = *best_;
    cb = callback_;
  }
  if (cb) cb(improved);
  return true;
}

std::optional<long long> SharedIncumbent::bound() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!best_) return std::nullopt;
  return best_->cost;
}

std::optional<SharedIncumbent::Best> SharedIncumbent::best() const {
  std::lock_guard<std::mutex> lock(mu_);
  return best_;
}

void SharedIncumbent::on_improve(std::function<void(const Best&)> callback) {
  std::lock_guard<std::mutex> lock(mu_);
  callback_ = std::move(callback);
}

SearchRun::SearchRun(Asset& asset, Store root, SharedIncumbent* incumbent, SolutionSink sink,
                     SearchOptions options)
    : asset_(asset),
      root_(std::move(root)),
      incumbent_(incumbent),
      sink_(std::move(sink)),
      options_(options) {
  restarts_enabled_ = asset_.restarts.enabled && options_.mode == SearchMode::Optimize;
  budget_ = asset_.restarts.luby_scale * luby(restart_index_);
  active_ = asset_.propagators;
  if (!asset_.rotation.empty())
    for (const auto& p : asset_.rotation[0]) active_.push_back(p);
  if (asset_.nogoods) active_.push_back(asset_.nogoods);
  current_ = root_;
}

std::span<const std::shared_ptr<Propagator>> SearchRun::active_propagators() {
  return active_;
}

bool SearchRun::step() {
  if (exhausted_) return false;
  assert(current_.has_value());
  ++stats_.nodes;

  if (options_.mode == SearchMode::Optimize && incumbent_) {
    // Bounding: only solutions strictly better than the incumbent are left.
    if (auto b = incumbent_->bound()) current_->lower_cost_max(*b - 1);
  }

  const FixpointResult result =
      propagate_fixpoint(active_propagators(), *current_, options_.fixpoint);

  if (result == FixpointResult::Failed) {
    ++stats_.failures;
    ++failures_in_restart_;
    if (restarts_enabled_ && failures_in_restart_ > budget_) {
      begin_restart();
      return !exhausted_;
    }
    return backtrack();
  }

  const std::optional<VarId> var = asset_.brancher->select_variable(*current_);
  if (!var) {
    // Every branching variable is assigned and the propagators are at
    // fixpoint: this is a solution of the asset's propagator set.
    ++stats_.solutions;
    assert(current_->all_assigned());
    const std::vector<int> assignment = current_->assignment();
    const long long cost = current_->has_cost() ? current_->cost_min() : 0;
    if (options_.mode == SearchMode::Optimize && incumbent_) {
      if (incumbent_->offer(assignment, cost) && sink_) sink_(assignment, cost);
    } else if (sink_) {
      sink_(assignment, cost);
    }
    return backtrack();
  }

  const int value = asset_.brancher->select_value(*current_, *var);
  alternatives_.push_back(Alternative{*current_, Decision{*var, value, Polarity::Exclude},
                                      path_.size()});
  current_->assign(*var, value);
  path_.push_back(Decision{*var, value, Polarity::Assign});
  return true;
}

bool SearchRun::backtrack() {
  if (alternatives_.empty()) {
    exhausted_ = true;
    current_.reset();
    return false;
  }
  Alternative alt = std::move(alternatives_.back());
  alternatives_.pop_back();
  path_.resize(alt.path_length);
  current_ = std::move(alt.store);
  current_->remove_value(alt.exclude.var, alt.exclude.value);
  path_.push_back(alt.exclude);
  return true;
}

void SearchRun::record_restart_nogoods() {
  if (!asset_.nogood_recording || !asset_.nogoods) return;
  for (NoGood& ng : extract_nogoods(path_, asset_.complete))
    asset_.nogoods->add(std::move(ng));
}

void SearchRun::begin_restart() {
  ++stats_.restarts;
  record_restart_nogoods();
  ++restart_index_;
  failures_in_restart_ = 0;
  budget_ = asset_.restarts.luby_scale * luby(restart_index_);
  path_.clear();
  alternatives_.clear();
  current_ = root_;
  // Round-robin assets swap the active half-checking group at each restart.
  if (!asset_.rotation.empty()) {
    active_ = asset_.propagators;
    const std::size_t g = static_cast<std::size_t>((restart_index_ - 1) % asset_.rotation.size());
    for (const auto& p : asset_.rotation[g]) active_.push_back(p);
    if (asset_.nogoods) active_.push_back(asset_.nogoods);
  }
}

SearchOutcome search_restarting(Asset& asset, const Store& root, SharedIncumbent& incumbent,
                                SolutionSink sink, SearchOptions options,
                                std::uint64_t max_steps) {
  SearchRun run(asset, root, &incumbent, std::move(sink), options);
  std::uint64_t steps = 0;
  while (steps < max_steps && run.step()) ++steps;
  return SearchOutcome{run.stats(), run.exhausted()};
}

}  // namespace tourcp
