#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tourcp/domain.hpp"

namespace tourcp {

enum class PropStatus {
  Failed,         // the store has no solution of this propagator's constraint
  AtFixpoint,     // running again on the same store would change nothing
  NotAtFixpoint,  // the store changed and another run may prune more
  Subsumed,       // every remaining assignment satisfies the constraint
};

// A propagator contracts a store.  Every implementation must be contracting
// (never add values) and local (only touch variables in its scope, plus the
// cost interval when touches_cost() is true).  A propagator that reports
// half_checking() may remove solutions, but it must uphold one guarantee:
// whenever a fully assigned store is reported AtFixpoint or Subsumed, that
// assignment really satisfies the constraint being propagated.
class Propagator {
public:
  virtual ~Propagator() = default;

  virtual std::string_view name() const = 0;
  virtual std::span<const VarId> scope() const = 0;
  virtual bool half_checking() const { return false; }
  virtual bool touches_cost() const { return false; }
  // Deferred propagators only run once the non-deferred queue has drained;
  // used for the expensive bound reasoning that assumes the cheap circuit
  // filtering is already at fixpoint.
  virtual bool deferred() const { return false; }

  virtual PropStatus propagate(Store& store) = 0;
};

// Thrown by the propagation loop when contract checking is enabled and a
// propagator step violates contraction or locality.
class ContractViolation : public std::logic_error {
public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

struct FixpointOptions {
  // Verify contraction/locality of every propagator step.  Defaults to on in
  // debug builds; the randomized oracle harness always turns it on.
  bool check_contracts =
#ifndef NDEBUG
      true;
#else
      false;
#endif
};

enum class FixpointResult { Failed, Stable };

// Runs the propagators to a mutual fixpoint over the store.  Scheduling is a
// FIFO queue in two classes (normal before deferred); a propagator is
// re-queued when the store changed since it last ran or when it reports
// NotAtFixpoint.  Subsumed propagators are dropped for the rest of the call.
FixpointResult propagate_fixpoint(std::span<const std::shared_ptr<Propagator>> props,
                                  Store& store, const FixpointOptions& options = {});

// The propagator that maps every store to the failed store.  It is trivially
// contracting and local, and it is half-checking for any constraint: no full
// assignment is ever accepted, so the guarantee holds vacuously.  Useful as a
// portfolio stress asset and in tests.
class FailPropagator final : public Propagator {
public:
  std::string_view name() const override { return "fail"; }
  std::span<const VarId> scope() const override { return {}; }
  bool half_checking() const override { return true; }
  PropStatus propagate(Store& store) override {
    store.fail();
    return PropStatus::Failed;
  }
};

}  // namespace tourcp
