#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tourcp/propagator.hpp"

namespace tourcp {

// i-th element (1-based) of the Luby restart sequence 1,1,2,1,1,2,4,...
std::uint64_t luby(std::uint64_t i);

enum class Polarity { Assign, Exclude };

// One branching decision.  The search always branches binary: the left child
// assigns var=value, the right child excludes value from var.
struct Decision {
  VarId var;
  int value = 0;
  Polarity polarity = Polarity::Assign;

  friend bool operator==(const Decision& a, const Decision& b) {
    return a.var == b.var && a.value == b.value && a.polarity == b.polarity;
  }
};

// A forbidden conjunction of assignments.  No-goods extracted in an asset
// whose search may drop solutions are tagged origin_incomplete; they prune
// correctly only for the search that produced them and must never reach an
// asset that claims completeness.
struct NoGood {
  std::vector<Decision> decisions;  // all Assign polarity
  bool origin_incomplete = false;
};

// Standard prefix no-goods from the decision path alive at a restart: for
// every exclude decision x!=v on the path, the assignments tried before it
// together with x=v form a refuted conjunction.
std::vector<NoGood> extract_nogoods(std::span<const Decision> path, bool origin_complete);

// Accumulates no-goods for one asset and propagates them by the unit rule:
// a no-good with every assignment satisfied fails the store; with exactly
// one assignment pending, that value is removed.
class NoGoodStore final : public Propagator {
public:
  explicit NoGoodStore(int var_count);

  void add(NoGood ng);
  std::size_t size() const { return nogoods_.size(); }
  std::span<const NoGood> entries() const { return nogoods_; }

  std::string_view name() const override { return "nogoods"; }
  std::span<const VarId> scope() const override { return scope_; }
  PropStatus propagate(Store& store) override;

private:
  std::vector<VarId> scope_;
  std::vector<NoGood> nogoods_;
};

// Chooses the variable and value to branch on.  Implementations may hold a
// random stream; the stream is advanced only by select_value so runs with a
// fixed seed reproduce the same tree.
class Brancher {
public:
  virtual ~Brancher() = default;
  // nullopt means every variable the brancher cares about is assigned.
  virtual std::optional<VarId> select_variable(const Store& store) = 0;
  virtual int select_value(const Store& store, VarId var) = 0;
};

struct RestartPolicy {
  bool enabled = true;
  std::uint64_t luby_scale = 32;  // failure budget of restart i is scale * luby(i)
};

// One portfolio asset: a propagator set, a brancher, and a restart policy.
// complete can only be true when no propagator is half-checking; it is the
// licence to interpret search exhaustion as a proof.
struct Asset {
  std::string name;
  std::vector<std::shared_ptr<Propagator>> propagators;
  // Optional round-robin groups: group (restart-1) % size is active during a
  // restart, on top of the always-on propagators above.
  std::vector<std::vector<std::shared_ptr<Propagator>>> rotation;
  std::shared_ptr<NoGoodStore> nogoods;
  std::shared_ptr<Brancher> brancher;
  RestartPolicy restarts;
  bool complete = true;
  bool nogood_recording = true;
  std::uint64_t seed = 1;

  static Asset make(std::string name, std::vector<std::shared_ptr<Propagator>> propagators,
                    std::shared_ptr<Brancher> brancher, int var_count, bool complete,
                    bool nogood_recording, RestartPolicy restarts, std::uint64_t seed);

  bool any_half_checking() const;
};

// Best solution found so far, shared by every asset of a portfolio run.  The
// cost bound is monotone non-increasing and safe to share: it never prunes a
// strictly better solution.  Thread-safe.
class SharedIncumbent {
public:
  struct Best {
    std::vector<int> assignment;
    long long cost = 0;
  };

  // Accepts only strict improvements; returns whether the offer won.
  bool offer(std::span<const int> assignment, long long cost);
  // Exclusive upper bound context: nullopt until a first incumbent exists.
  std::optional<long long> bound() const;
  std::optional<Best> best() const;

  // Called after each accepted improvement, outside no other lock.
  void on_improve(std::function<void(const Best&)> callback);

private:
  mutable std::mutex mu_;
  std::optional<Best> best_;
  std::function<void(const Best&)> callback_;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t failures = 0;
  std::uint64_t solutions = 0;
  std::uint64_t restarts = 0;
};

enum class SearchMode {
  Optimize,      // branch-and-bound on the shared incumbent
  EnumerateAll,  // emit every solution; restarts are disabled
};

struct SearchOptions {
  SearchMode mode = SearchMode::Optimize;
  FixpointOptions fixpoint{};
};

using SolutionSink = std::function<void(std::span<const int>, long long)>;

// Depth-first branch-and-bound with full store copies at branch points and
// Luby-scheduled restarts.  step() advances roughly one node so several runs
// can be interleaved deterministically.  Exhaustion means the tree rooted at
// the given store was fully explored under the asset's propagators, recorded
// no-goods and the incumbent bound.
class SearchRun {
public:
  SearchRun(Asset& asset, Store root, SharedIncumbent* incumbent, SolutionSink sink,
            SearchOptions options = {});

  // Returns false once the run is exhausted.
  bool step();
  bool exhausted() const { return exhausted_; }
  const SearchStats& stats() const { return stats_; }
  std::uint64_t restart_index() const { return restart_index_; }

private:
  struct Alternative {
    Store store;  // copy taken at the branch point, before either child
    Decision exclude;
    std::size_t path_length;
  };

  bool backtrack();
  void begin_restart();
  void record_restart_nogoods();
  std::span<const std::shared_ptr<Propagator>> active_propagators();

  Asset& asset_;
  Store root_;
  SharedIncumbent* incumbent_;
  SolutionSink sink_;
  SearchOptions options_;

  std::vector<std::shared_ptr<Propagator>> active_;
  std::optional<Store> current_;
  std::vector<Decision> path_;
  std::vector<Alternative> alternatives_;

  std::uint64_t restart_index_ = 1;
  std::uint64_t failures_in_restart_ = 0;
  std::uint64_t budget_ = 0;
  bool restarts_enabled_ = false;
  bool exhausted_ = false;
  SearchStats stats_;
};

struct SearchOutcome {
  SearchStats stats;
  bool exhausted = false;
};

// Convenience driver: steps a single asset until exhaustion or max_steps.
SearchOutcome search_restarting(Asset& asset, const Store& root, SharedIncumbent& incumbent,
                                SolutionSink sink, SearchOptions options = {},
                                std::uint64_t max_steps =
                                    std::numeric_limits<std::uint64_t>::max());

}  // namespace tourcp
