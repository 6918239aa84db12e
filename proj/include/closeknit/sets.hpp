#pragma once

// Subsets of a finite carrier {0,...,n-1} under intersection, with
// delta(S,a) = |S \ f_a| and increment S^a = S ∪ f_a.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "closeknit/engine.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/index.hpp"
#include "closeknit/permutation.hpp"

namespace closeknit {

inline constexpr std::size_t kMaxCarrierSize = 4096;

class FiniteSubset {
 public:
  FiniteSubset() = default;

  explicit FiniteSubset(std::size_t carrier_size) : bits_(checked(carrier_size)) {}

  FiniteSubset(std::size_t carrier_size, std::span<const std::size_t> members)
      : bits_(checked(carrier_size)) {
    for (auto m : members) {
      if (m >= carrier_size) {
        throw ContractViolation("subset member " + std::to_string(m) + " outside carrier of size " +
                                std::to_string(carrier_size));
      }
      bits_.set(m);
    }
  }

  FiniteSubset(std::size_t carrier_size, std::initializer_list<std::size_t> members)
      : FiniteSubset(carrier_size, std::span<const std::size_t>(members.begin(), members.size())) {}

  static FiniteSubset full(std::size_t carrier_size) {
    FiniteSubset s(carrier_size);
    s.bits_.set();
    return s;
  }

  [[nodiscard]] std::size_t carrier_size() const noexcept { return bits_.size(); }
  [[nodiscard]] std::size_t count() const noexcept { return bits_.count(); }
  [[nodiscard]] bool empty() const noexcept { return bits_.none(); }
  [[nodiscard]] bool contains(std::size_t i) const { return i < bits_.size() && bits_.test(i); }

  [[nodiscard]] std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.push_back(i);
    return out;
  }

  [[nodiscard]] FiniteSubset intersect(const FiniteSubset& o) const { return op(o, bits_ & o.bits_); }
  [[nodiscard]] FiniteSubset unite(const FiniteSubset& o) const { return op(o, bits_ | o.bits_); }
  [[nodiscard]] FiniteSubset minus(const FiniteSubset& o) const { return op(o, bits_ - o.bits_); }

  [[nodiscard]] bool subset_of(const FiniteSubset& o) const {
    same_carrier(o);
    return bits_.is_subset_of(o.bits_);
  }

  /// {p(x) : x in S}.
  [[nodiscard]] FiniteSubset image(const Permutation& p) const {
    if (p.size() != bits_.size()) throw StructuralError("permutation degree differs from carrier");
    FiniteSubset out(bits_.size());
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) out.bits_.set(p[i]);
    return out;
  }

  void insert(std::size_t i) { bits_.set(i); }

  friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) { return a.bits_ == b.bits_; }

  friend std::strong_ordering operator<=>(const FiniteSubset& a, const FiniteSubset& b) {
    if (a.bits_.size() != b.bits_.size()) return a.bits_.size() <=> b.bits_.size();
    if (a.bits_ == b.bits_) return std::strong_ordering::equal;
    return a.bits_ < b.bits_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  friend std::ostream& operator<<(std::ostream& os, const FiniteSubset& s) {
    os << '{';
    bool first = true;
    for (auto m : s.members()) {
      if (!first) os << ',';
      os << m;
      first = false;
    }
    return os << '}';
  }

 private:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  static std::size_t checked(std::size_t n) {
    if (n > kMaxCarrierSize) {
      throw ContractViolation("carrier size " + std::to_string(n) + " exceeds " +
                              std::to_string(kMaxCarrierSize));
    }
    return n;
  }

  void same_carrier(const FiniteSubset& o) const {
    if (bits_.size() != o.bits_.size()) throw StructuralError("subsets live on different carriers");
  }

  FiniteSubset op(const FiniteSubset& o, Bits bits) const {
    same_carrier(o);
    FiniteSubset out;
    out.bits_ = std::move(bits);
    return out;
  }

  Bits bits_;
};

/// (|S \ T|, |T \ S|).
inline CountMeasure measure_set(const FiniteSubset& s, const FiniteSubset& t) {
  return {s.minus(t).count(), t.minus(s).count()};
}

class SetInstance {
 public:
  using element_type = FiniteSubset;
  using measure_type = CountMeasure;

  SetInstance(std::size_t carrier_size, std::span<const FiniteSubset> seeds,
              std::vector<Permutation> gamma, std::size_t max_orbit = 10000)
      : carrier_(carrier_size), gamma_(std::move(gamma)) {
    for (const auto& s : seeds) {
      if (s.carrier_size() != carrier_size) throw StructuralError("seed on a different carrier");
    }
    for (const auto& g : gamma_) require_permutation(g, carrier_size);
    auto closed = orbit_closure<FiniteSubset>(
        seeds, gamma_.size(), [this](std::size_t g, const FiniteSubset& s) { return s.image(gamma_[g]); },
        max_orbit);
    family_ = std::move(closed.members);
    action_ = std::move(closed.action);
  }

  [[nodiscard]] std::size_t carrier_size() const noexcept { return carrier_; }
  [[nodiscard]] const std::vector<FiniteSubset>& family() const noexcept { return family_; }
  [[nodiscard]] const std::vector<Permutation>& gamma() const noexcept { return gamma_; }

  [[nodiscard]] FiniteSubset meet(const FiniteSubset& a, const FiniteSubset& b) const {
    return a.intersect(b);
  }
  [[nodiscard]] bool leq(const FiniteSubset& a, const FiniteSubset& b) const { return a.subset_of(b); }

  /// |S \ f_a| as a single natural level.
  [[nodiscard]] IndexValue delta(const FiniteSubset& s, std::size_t a) const {
    return IndexValue::natural({static_cast<std::int64_t>(s.minus(family_.at(a)).count())});
  }

  [[nodiscard]] FiniteSubset increment(const FiniteSubset& s, std::size_t a) const {
    return s.unite(family_.at(a));
  }

  [[nodiscard]] std::size_t gamma_count() const noexcept { return gamma_.size(); }
  [[nodiscard]] FiniteSubset act(std::size_t g, const FiniteSubset& s) const {
    return s.image(gamma_.at(g));
  }
  [[nodiscard]] std::size_t act_on_index(std::size_t g, std::size_t a) const { return action_[g][a]; }

  [[nodiscard]] CountMeasure measure(const FiniteSubset& s, std::size_t a) const {
    return measure_set(s, family_.at(a));
  }

  [[nodiscard]] FiniteSubset join_span() const {
    FiniteSubset u(carrier_);
    for (const auto& f : family_) u = u.unite(f);
    return u;
  }
  [[nodiscard]] bool in_join_span(const FiniteSubset& s) const { return s.subset_of(join_span()); }

  /// Random meets of family members, and random subsets of those meets.
  [[nodiscard]] std::vector<FiniteSubset> sample_elements(std::size_t count,
                                                          std::mt19937_64& rng) const {
    std::vector<FiniteSubset> out;
    std::uniform_int_distribution<std::size_t> pick(0, family_.size() - 1);
    std::bernoulli_distribution coin(0.5);
    while (out.size() < count) {
      auto s = family_[pick(rng)];
      const std::size_t extra = pick(rng) % 3;
      for (std::size_t i = 0; i < extra; ++i) s = s.intersect(family_[pick(rng)]);
      out.push_back(s);
      if (out.size() == count) break;
      FiniteSubset sub(carrier_);
      for (auto m : s.members()) {
        if (coin(rng)) sub.insert(m);
      }
      out.push_back(std::move(sub));
    }
    return out;
  }

 private:
  std::size_t carrier_;
  std::vector<Permutation> gamma_;
  std::vector<FiniteSubset> family_;
  std::vector<std::vector<std::size_t>> action_;
};

}  // namespace closeknit
