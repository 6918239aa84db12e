#pragma once

// Points of the index poset and finitely generated down-sets in it.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "closeknit/errors.hpp"

namespace closeknit {

using Rational = boost::rational<std::int64_t>;

/// Discrete instantiations count things; metric ones live in [0,1].
enum class LevelKind { Natural, Unit };

/// A point of the index space: a fixed-length vector of levels ordered componentwise.
class IndexValue {
 public:
  IndexValue() = default;

  static IndexValue natural(std::initializer_list<std::int64_t> coords) {
    return natural(std::vector<std::int64_t>(coords));
  }

  static IndexValue natural(const std::vector<std::int64_t>& coords) {
    IndexValue v;
    v.kind_ = LevelKind::Natural;
    v.coords_.reserve(coords.size());
    for (auto c : coords) {
      if (c < 0) throw StructuralError("natural index level must be non-negative");
      v.coords_.emplace_back(c);
    }
    return v;
  }

  static IndexValue unit(std::vector<Rational> coords) {
    for (const auto& c : coords) {
      if (c < 0 || c > 1) throw StructuralError("unit index level must lie in [0,1]");
    }
    IndexValue v;
    v.kind_ = LevelKind::Unit;
    v.coords_ = std::move(coords);
    return v;
  }

  [[nodiscard]] LevelKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t size() const noexcept { return coords_.size(); }
  [[nodiscard]] const std::vector<Rational>& coords() const noexcept { return coords_; }
  [[nodiscard]] const Rational& operator[](std::size_t i) const { return coords_[i]; }

  /// Natural levels are integers; this returns coordinate `i` as one.
  [[nodiscard]] std::int64_t count(std::size_t i) const { return coords_.at(i).numerator(); }

  [[nodiscard]] bool same_shape(const IndexValue& other) const noexcept {
    return kind_ == other.kind_ && coords_.size() == other.coords_.size();
  }

  [[nodiscard]] bool bounded_by(std::int64_t cap) const {
    return std::all_of(coords_.begin(), coords_.end(), [cap](const Rational& c) { return c <= cap; });
  }

  friend bool operator==(const IndexValue&, const IndexValue&) = default;

  /// Lexicographic total order; only used for canonical storage, not the poset order.
  friend bool operator<(const IndexValue& a, const IndexValue& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    return std::lexicographical_compare(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                        b.coords_.end());
  }

  friend std::ostream& operator<<(std::ostream& os, const IndexValue& v) {
    os << '(';
    for (std::size_t i = 0; i < v.coords_.size(); ++i) {
      if (i) os << ',';
      os << v.coords_[i];
    }
    return os << ')';
  }

 private:
  LevelKind kind_ = LevelKind::Natural;
  std::vector<Rational> coords_;
};

inline void require_same_shape(const IndexValue& a, const IndexValue& b) {
  if (!a.same_shape(b)) throw StructuralError("index values differ in length or level kind");
}

/// Componentwise order.
inline bool leq(const IndexValue& a, const IndexValue& b) {
  require_same_shape(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

inline bool comparable(const IndexValue& a, const IndexValue& b) { return leq(a, b) || leq(b, a); }

/// Downward closure of a finite set, stored as its antichain of maximal elements
/// (sorted lexicographically so that equal down-sets have equal representations).
class DownSet {
 public:
  [[nodiscard]] const std::vector<IndexValue>& generators() const noexcept { return generators_; }

  [[nodiscard]] bool contains(const IndexValue& v) const {
    return std::any_of(generators_.begin(), generators_.end(),
                       [&](const IndexValue& g) { return leq(v, g); });
  }

  /// Inclusion of down-sets.
  [[nodiscard]] bool subset_of(const DownSet& other) const {
    return std::all_of(generators_.begin(), generators_.end(),
                       [&](const IndexValue& g) { return other.contains(g); });
  }

  friend bool operator==(const DownSet&, const DownSet&) = default;

  friend std::ostream& operator<<(std::ostream& os, const DownSet& d) {
    os << '{';
    for (std::size_t i = 0; i < d.generators_.size(); ++i) {
      if (i) os << ',';
      os << d.generators_[i];
    }
    return os << '}';
  }

 private:
  friend DownSet downset_of(std::span<const IndexValue> values);
  std::vector<IndexValue> generators_;
};

inline DownSet downset_of(std::span<const IndexValue> values) {
  if (values.empty()) throw ContractViolation("downset_of needs a non-empty family of values");
  for (const auto& v : values) require_same_shape(values.front(), v);

  DownSet d;
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < values.size() && !dominated; ++j) {
      if (i == j) continue;
      // Strictly below another value, or a later duplicate.
      if (leq(values[i], values[j]) && (values[i] != values[j] || j < i)) dominated = true;
    }
    if (!dominated) d.generators_.push_back(values[i]);
  }
  std::sort(d.generators_.begin(), d.generators_.end());
  return d;
}

inline DownSet downset_of(std::initializer_list<IndexValue> values) {
  return downset_of(std::span<const IndexValue>(values.begin(), values.size()));
}

inline bool strictly_below(const DownSet& d, const DownSet& e) {
  if (!d.generators().empty() && !e.generators().empty()) {
    require_same_shape(d.generators().front(), e.generators().front());
  }
  return d.subset_of(e) && !e.subset_of(d);
}

/// Indices of `values` that are maximal elements (generators) of `d`.
inline std::vector<std::size_t> maximal_in(const DownSet& d, std::span<const IndexValue> values) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!d.contains(values[i])) {
      throw ContractViolation("maximal_in: value outside the down-set");
    }
    const auto& gens = d.generators();
    if (std::find(gens.begin(), gens.end(), values[i]) != gens.end()) out.push_back(i);
  }
  return out;
}

}  // namespace closeknit
