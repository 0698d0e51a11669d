#include "tourcp/domain.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace tourcp {

int Domain::count_trailing(std::uint64_t x) {
  return std::countr_zero(x);
}

Domain::Domain(int universe) {
  if (universe < 0) throw std::invalid_argument("domain universe must be non-negative");
  words_.assign((static_cast<std::size_t>(universe) + 63) / 64, 0);
  for (int v = 0; v < universe; ++v) words_[v / 64] |= (std::uint64_t{1} << (v % 64));
  count_ = universe;
}

Domain Domain::from_values(std::initializer_list<int> values) {
  Domain d;
  for (int v : values) {
    d.ensure_capacity(v);
    if (!d.contains(v)) {
      d.words_[v / 64] |= (std::uint64_t{1} << (v % 64));
      ++d.count_;
    }
  }
  return d;
}

Domain Domain::from_values(std::span<const int> values) {
  Domain d;
  for (int v : values) {
    d.ensure_capacity(v);
    if (!d.contains(v)) {
      d.words_[v / 64] |= (std::uint64_t{1} << (v % 64));
      ++d.count_;
    }
  }
  return d;
}

void Domain::ensure_capacity(int v) {
  if (v < 0) throw std::invalid_argument("domain values must be non-negative");
  const std::size_t need = static_cast<std::size_t>(v) / 64 + 1;
  if (words_.size() < need) words_.resize(need, 0);
}

bool Domain::contains(int v) const {
  if (v < 0) return false;
  const std::size_t w = static_cast<std::size_t>(v) / 64;
  if (w >= words_.size()) return false;
  return (words_[w] >> (v % 64)) & 1u;
}

int Domain::min() const {
  assert(count_ > 0);
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w] != 0) return static_cast<int>(w * 64) + count_trailing(words_[w]);
  return -1;
}

int Domain::max() const {
  assert(count_ > 0);
  for (std::size_t w = words_.size(); w-- > 0;)
    if (words_[w] != 0) return static_cast<int>(w * 64) + 63 - std::countl_zero(words_[w]);
  return -1;
}

int Domain::value() const {
  assert(count_ == 1);
  return min();
}

bool Domain::remove(int v) {
  if (!contains(v)) return false;
  words_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
  --count_;
  return true;
}

bool Domain::keep_only(int v) {
  if (is_assigned() && contains(v)) return false;
  const bool had = contains(v);
  std::fill(words_.begin(), words_.end(), 0);
  if (had) {
    words_[v / 64] |= (std::uint64_t{1} << (v % 64));
    count_ = 1;
  } else {
    count_ = 0;
  }
  return true;
}

bool Domain::subset_of(const Domain& other) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const std::uint64_t theirs = w < other.words_.size() ? other.words_[w] : 0;
    if ((words_[w] & ~theirs) != 0) return false;
  }
  return true;
}

std::vector<int> Domain::values() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count_));
  for_each([&](int v) { out.push_back(v); });
  return out;
}

bool operator==(const Domain& a, const Domain& b) {
  const std::size_t n = std::max(a.words_.size(), b.words_.size());
  for (std::size_t w = 0; w < n; ++w) {
    const std::uint64_t wa = w < a.words_.size() ? a.words_[w] : 0;
    const std::uint64_t wb = w < b.words_.size() ? b.words_[w] : 0;
    if (wa != wb) return false;
  }
  return true;
}

Store::Store(std::vector<Domain> domains) : domains_(std::move(domains)) {
  for (const Domain& d : domains_) {
    if (d.empty()) failed_ = true;
    if (d.is_assigned()) ++assigned_;
  }
}

void Store::attach_cost(long long lo, long long hi) {
  has_cost_ = true;
  cost_min_ = lo;
  cost_max_ = hi;
  if (lo > hi) failed_ = true;
}

const Domain& Store::domain(VarId v) const {
  assert(v.index < domains_.size());
  return domains_[v.index];
}

void Store::fail() {
  if (failed_) return;
  failed_ = true;
  ++version_;
}

bool Store::remove_value(VarId var, int value) {
  if (failed_) return false;
  assert(var.index < domains_.size());
  Domain& d = domains_[var.index];
  const bool was_assigned = d.is_assigned();
  if (!d.remove(value)) return false;
  ++version_;
  if (d.empty()) {
    failed_ = true;
  } else if (!was_assigned && d.is_assigned()) {
    ++assigned_;
  }
  return true;
}

bool Store::assign(VarId var, int value) {
  if (failed_) return false;
  assert(var.index < domains_.size());
  Domain& d = domains_[var.index];
  const bool was_assigned = d.is_assigned();
  if (!d.keep_only(value)) return false;
  ++version_;
  if (d.empty()) {
    failed_ = true;
    if (was_assigned) --assigned_;
  } else if (!was_assigned) {
    ++assigned_;
  }
  return true;
}

bool Store::raise_cost_min(long long v) {
  if (failed_ || !has_cost_ || v <= cost_min_) return false;
  cost_min_ = v;
  ++version_;
  if (cost_min_ > cost_max_) failed_ = true;
  return true;
}

bool Store::lower_cost_max(long long v) {
  if (failed_ || !has_cost_ || v >= cost_max_) return false;
  cost_max_ = v;
  ++version_;
  if (cost_min_ > cost_max_) failed_ = true;
  return true;
}

std::vector<int> Store::assignment() const {
  assert(all_assigned());
  std::vector<int> out(domains_.size());
  for (std::size_t i = 0; i < domains_.size(); ++i) out[i] = domains_[i].value();
  return out;
}

bool Store::subset_of(const Store& other) const {
  if (failed_) return true;
  if (other.failed_) return false;
  if (var_count() != other.var_count()) return false;
  for (int i = 0; i < var_count(); ++i)
    if (!domains_[static_cast<std::size_t>(i)].subset_of(other.domains_[static_cast<std::size_t>(i)]))
      return false;
  if (has_cost_ && other.has_cost_)
    if (cost_min_ < other.cost_min_ || cost_max_ > other.cost_max_) return false;
  return true;
}

bool operator==(const Store& a, const Store& b) {
  // All failed stores are the same store.
  if (a.failed_ || b.failed_) return a.failed_ && b.failed_;
  if (a.var_count() != b.var_count()) return false;
  for (int i = 0; i < a.var_count(); ++i)
    if (!(a.domains_[static_cast<std::size_t>(i)] == b.domains_[static_cast<std::size_t>(i)]))
      return false;
  if (a.has_cost_ != b.has_cost_) return false;
  if (a.has_cost_ && (a.cost_min_ != b.cost_min_ || a.cost_max_ != b.cost_max_)) return false;
  return true;
}

}  // namespace tourcp
