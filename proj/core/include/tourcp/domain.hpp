#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace tourcp {

// Index of a decision variable inside a store.
struct VarId {
  std::uint32_t index = 0;

  constexpr VarId() = default;
  constexpr explicit VarId(std::uint32_t i) : index(i) {}

  friend constexpr bool operator==(VarId a, VarId b) { return a.index == b.index; }
  friend constexpr bool operator!=(VarId a, VarId b) { return a.index != b.index; }
  friend constexpr bool operator<(VarId a, VarId b) { return a.index < b.index; }
};

// Finite set of non-negative integers, stored as a bitset.  Values live in
// [0, capacity); capacity is fixed when the domain is created.  Equality is
// on set contents, so domains with different capacities but the same values
// compare equal.
class Domain {
public:
  Domain() = default;

  // Full domain {0, ..., universe-1}.
  explicit Domain(int universe);

  static Domain from_values(std::initializer_list<int> values);
  static Domain from_values(std::span<const int> values);

  bool contains(int v) const;
  int size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool is_assigned() const { return count_ == 1; }

  // Smallest / largest value; domain must be non-empty.
  int min() const;
  int max() const;
  // The single value of an assigned domain.
  int value() const;

  // Remove v; returns true when the domain actually changed.
  bool remove(int v);
  // Reduce to {v}; if v is absent the domain becomes empty.  Returns true
  // when the domain changed.
  bool keep_only(int v);

  bool subset_of(const Domain& other) const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = static_cast<int>(w * 64) + count_trailing(bits);
        f(bit);
        bits &= bits - 1;
      }
    }
  }

  std::vector<int> values() const;

  friend bool operator==(const Domain& a, const Domain& b);

private:
  static int count_trailing(std::uint64_t x);
  void ensure_capacity(int v);

  std::vector<std::uint64_t> words_;
  int count_ = 0;
};

// A store maps variables to domains and carries one optional integer cost
// interval used as the objective channel.  All empty domains are equated: as
// soon as any domain (or the cost interval) would become empty the whole
// store switches to the failed state, and every failed store compares equal
// to every other failed store.
class Store {
public:
  Store() = default;
  explicit Store(std::vector<Domain> domains);

  void attach_cost(long long lo, long long hi);
  bool has_cost() const { return has_cost_; }
  long long cost_min() const { return cost_min_; }
  long long cost_max() const { return cost_max_; }

  int var_count() const { return static_cast<int>(domains_.size()); }
  const Domain& domain(VarId v) const;

  bool failed() const { return failed_; }
  void fail();

  // Mutations return true when the store changed.  On a failed store they
  // are no-ops.  A mutation that would empty a domain or the cost interval
  // fails the store instead.
  bool remove_value(VarId var, int value);
  bool assign(VarId var, int value);
  bool raise_cost_min(long long v);
  bool lower_cost_max(long long v);

  bool all_assigned() const { return !failed_ && assigned_ == var_count(); }
  int assigned_count() const { return assigned_; }

  // Values of a fully assigned store, in variable order.
  std::vector<int> assignment() const;

  // Bumped on every effective mutation; lets the propagation loop detect
  // whether a propagator changed anything.
  std::uint64_t version() const { return version_; }

  // Pointwise subset test used by the contraction checks.  A failed store is
  // a subset of everything.
  bool subset_of(const Store& other) const;

  friend bool operator==(const Store& a, const Store& b);

private:
  std::vector<Domain> domains_;
  long long cost_min_ = 0;
  long long cost_max_ = 0;
  bool has_cost_ = false;
  bool failed_ = false;
  int assigned_ = 0;
  std::uint64_t version_ = 0;
};

}  // namespace tourcp

template <>
struct std::hash<tourcp::VarId> {
  std::size_t operator()(tourcp::VarId v) const noexcept {
    return std::hash<std::uint32_t>{}(v.index);
  }
};
