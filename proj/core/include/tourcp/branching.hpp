#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include "tourcp/circuit.hpp"
#include "tourcp/search.hpp"

namespace tourcp {

// Warnsdorff-style branching for tour models: grow one path from a start
// city by always branching on the successor of the path's current end, and
// prefer the nearest remaining city.  With probability epsilon the choice is
// instead uniform between the two nearest, which is all the diversification
// the restart scheme needs.  Deterministic for a fixed seed.
class WarnsdorffBrancher final : public Brancher {
public:
  WarnsdorffBrancher(std::shared_ptr<const TspInstance> inst, int start, double epsilon,
                     std::uint64_t seed);

  std::optional<VarId> select_variable(const Store& store) override;
  int select_value(const Store& store, VarId var) override;

  int start() const { return start_; }

private:
  std::shared_ptr<const TspInstance> inst_;
  int n_;
  int start_;
  double epsilon_;
  std::mt19937_64 rng_;
};

}  // namespace tourcp
