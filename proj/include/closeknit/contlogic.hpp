#pragma once

// Evaluators for the [0,1]-valued distances delta_{phi,n}(S, a, gamma) on finite
// metric structures, in the set, group and vector-space forms, plus the
// reduction that reads a count (difference, index, codimension) off a discrete
// structure as the largest n with delta_{phi,n} = 1.
//
// Conventions: sup over an empty range is 0, inf over an empty range is 1.
// All arithmetic is exact.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "closeknit/errors.hpp"
#include "closeknit/index.hpp"
#include "closeknit/permutation.hpp"
#include "closeknit/vect.hpp"

namespace closeknit {

/// phi(x, a) tabulated as values[x][a].
struct Formula {
  std::string name;
  std::vector<std::vector<Rational>> values;
};

struct GroupTable {
  std::vector<std::vector<std::size_t>> mul;  // mul[x][y] = x*y
};

struct VectorCoords {
  std::uint32_t p = 2;
  std::size_t dim = 0;
  Matrix coords;  // coords[x] = the vector represented by point x
};

enum class DeltaCase { Set, Group, Vector };

inline const char* to_string(DeltaCase c) {
  switch (c) {
    case DeltaCase::Set: return "set";
    case DeltaCase::Group: return "group";
    case DeltaCase::Vector: return "vector";
  }
  return "?";
}

class MetricStructure {
 public:
  static constexpr std::size_t kMaxFormulas = 256;
  static constexpr std::size_t kMaxTablePoints = 1024;

  MetricStructure(std::size_t points, std::vector<std::vector<Rational>> distance,
                  std::vector<Formula> formulas, std::size_t params,
                  std::optional<GroupTable> group = std::nullopt,
                  std::optional<VectorCoords> vector = std::nullopt)
      : points_(points), params_(params), d_(std::move(distance)), formulas_(std::move(formulas)) {
    check_metric();
    for (const auto& f : formulas_) check_formula(f);
    close_under_max();
    if (group) set_group(std::move(*group));
    if (vector) set_vector(std::move(*vector));
  }

  [[nodiscard]] std::size_t points() const noexcept { return points_; }
  [[nodiscard]] std::size_t params() const noexcept { return params_; }
  [[nodiscard]] const Rational& d(std::size_t x, std::size_t y) const { return d_[x][y]; }
  [[nodiscard]] const std::vector<Formula>& formulas() const noexcept { return formulas_; }
  [[nodiscard]] const Rational& phi(std::size_t f, std::size_t x, std::size_t a) const {
    return formulas_[f].values[x][a];
  }
  [[nodiscard]] bool has_group() const noexcept { return !mul_.empty(); }
  [[nodiscard]] bool has_vector() const noexcept { return vector_.has_value(); }
  [[nodiscard]] const std::optional<VectorCoords>& vector() const noexcept { return vector_; }

  [[nodiscard]] std::size_t mul(std::size_t x, std::size_t y) const { return mul_[x][y]; }
  [[nodiscard]] std::size_t inv(std::size_t x) const { return inv_[x]; }
  [[nodiscard]] std::size_t identity() const noexcept { return identity_; }

  [[nodiscard]] std::size_t vadd(std::size_t x, std::size_t y) const { return add_[x * points_ + y]; }
  [[nodiscard]] std::size_t vscale(std::uint32_t c, std::size_t x) const { return scale_[c * points_ + x]; }
  [[nodiscard]] std::size_t zero() const noexcept { return zero_; }
  [[nodiscard]] std::optional<std::size_t> point_of(const Vec& v) const {
    auto it = vec_index_.find(v);
    if (it == vec_index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] bool discrete_metric() const {
    for (std::size_t x = 0; x < points_; ++x)
      for (std::size_t y = 0; y < points_; ++y)
        if (x != y && d_[x][y] != Rational(1)) return false;
    return true;
  }

  [[nodiscard]] std::optional<std::size_t> formula_index(const std::string& name) const {
    for (std::size_t i = 0; i < formulas_.size(); ++i)
      if (formulas_[i].name == name) return i;
    return std::nullopt;
  }

 private:
  void check_metric() const {
    if (d_.size() != points_) throw MalformedInput("distance table must have one row per point");
    for (const auto& row : d_) {
      if (row.size() != points_) throw MalformedInput("distance table must be square");
      for (const auto& v : row)
        if (v < 0 || v > 1) throw MalformedInput("distances must lie in [0,1]");
    }
    for (std::size_t x = 0; x < points_; ++x) {
      if (d_[x][x] != Rational(0)) throw MalformedInput("distance diagonal must be zero");
      for (std::size_t y = 0; y < points_; ++y) {
        if (d_[x][y] != d_[y][x]) throw MalformedInput("distance table must be symmetric");
        for (std::size_t z = 0; z < points_; ++z) {
          if (d_[x][z] > d_[x][y] + d_[y][z]) throw MalformedInput("distance violates the triangle inequality");
        }
      }
    }
  }

  void check_formula(const Formula& f) const {
    if (f.values.size() != points_) throw MalformedInput("formula " + f.name + " needs one row per point");
    for (const auto& row : f.values) {
      if (row.size() != params_) throw MalformedInput("formula " + f.name + " needs one value per parameter");
      for (const auto& v : row)
        if (v < 0 || v > 1) throw MalformedInput("formula values must lie in [0,1]");
    }
  }

  /// Adds max(phi, psi) for every pair until no new table appears.
  void close_under_max() {
    for (bool grew = true; grew;) {
      grew = false;
      const std::size_t n = formulas_.size();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          Formula m{"max(" + formulas_[i].name + "," + formulas_[j].name + ")", formulas_[i].values};
          for (std::size_t x = 0; x < points_; ++x)
            for (std::size_t a = 0; a < params_; ++a)
              m.values[x][a] = std::max(m.values[x][a], formulas_[j].values[x][a]);
          const bool known = std::any_of(formulas_.begin(), formulas_.end(),
                                         [&](const Formula& f) { return f.values == m.values; });
          if (!known) {
            if (formulas_.size() >= kMaxFormulas) {
              throw EnumerationCapExceeded("max-closure of the formulas exceeds " +
                                           std::to_string(kMaxFormulas));
            }
            formulas_.push_back(std::move(m));
            grew = true;
          }
        }
      }
    }
  }

  void set_group(GroupTable g) {
    if (points_ > kMaxTablePoints) throw MalformedInput("group structure too large");
    if (g.mul.size() != points_) throw MalformedInput("group table must have one row per point");
    for (const auto& row : g.mul) {
      if (row.size() != points_) throw MalformedInput("group table must be square");
      for (auto v : row)
        if (v >= points_) throw MalformedInput("group table entry out of range");
    }
    std::optional<std::size_t> e;
    for (std::size_t x = 0; x < points_ && !e; ++x) {
      bool ok = true;
      for (std::size_t y = 0; y < points_ && ok; ++y) ok = g.mul[x][y] == y && g.mul[y][x] == y;
      if (ok) e = x;
    }
    if (!e) throw MalformedInput("group table has no identity");
    inv_.assign(points_, points_);
    for (std::size_t x = 0; x < points_; ++x)
      for (std::size_t y = 0; y < points_; ++y)
        if (g.mul[x][y] == *e && g.mul[y][x] == *e) inv_[x] = y;
    for (auto v : inv_)
      if (v == points_) throw MalformedInput("group table lacks inverses");
    for (std::size_t x = 0; x < points_; ++x)
      for (std::size_t y = 0; y < points_; ++y)
        for (std::size_t z = 0; z < points_; ++z)
          if (g.mul[g.mul[x][y]][z] != g.mul[x][g.mul[y][z]]) throw MalformedInput("group table is not associative");
    identity_ = *e;
    mul_ = std::move(g.mul);
  }

  void set_vector(VectorCoords v) {
    if (!is_prime(v.p)) throw MalformedInput("vector structure needs a prime p");
    std::size_t expected = 1;
    for (std::size_t i = 0; i < v.dim; ++i) expected *= v.p;
    if (expected != points_ || v.coords.size() != points_ || points_ > kMaxTablePoints) {
      throw MalformedInput("vector structure must list every vector of F_p^dim exactly once (at most " +
                           std::to_string(kMaxTablePoints) + ")");
    }
    for (std::size_t x = 0; x < points_; ++x) {
      if (v.coords[x].size() != v.dim) throw MalformedInput("vector coordinates have the wrong length");
      for (auto c : v.coords[x])
        if (c >= v.p) throw MalformedInput("vector coordinate outside [0,p)");
      if (!vec_index_.emplace(v.coords[x], x).second) throw MalformedInput("duplicate vector");
    }
    add_.resize(points_ * points_);
    scale_.resize(static_cast<std::size_t>(v.p) * points_);
    for (std::size_t x = 0; x < points_; ++x) {
      for (std::size_t y = 0; y < points_; ++y) {
        Vec s(v.dim);
        for (std::size_t k = 0; k < v.dim; ++k) s[k] = (v.coords[x][k] + v.coords[y][k]) % v.p;
        add_[x * points_ + y] = vec_index_.at(s);
      }
      for (std::uint32_t c = 0; c < v.p; ++c) {
        Vec s(v.dim);
        for (std::size_t k = 0; k < v.dim; ++k) s[k] = detail::mul_mod(c, v.coords[x][k], v.p);
        scale_[c * points_ + x] = vec_index_.at(s);
      }
    }
    zero_ = vec_index_.at(Vec(v.dim, 0));
    vector_ = std::move(v);
  }

  std::size_t points_;
  std::size_t params_;
  std::vector<std::vector<Rational>> d_;
  std::vector<Formula> formulas_;

  std::vector<std::vector<std::size_t>> mul_;
  std::vector<std::size_t> inv_;
  std::size_t identity_ = 0;

  std::optional<VectorCoords> vector_;
  std::map<Vec, std::size_t> vec_index_;
  std::vector<std::size_t> add_, scale_;
  std::size_t zero_ = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 50'000'000;

namespace detail {

inline void check_args(const MetricStructure& m, std::span<const std::size_t> s, std::size_t a,
                       const Permutation& gamma, std::size_t phi) {
  if (a >= m.params()) throw ContractViolation("parameter index out of range");
  if (phi >= m.formulas().size()) throw ContractViolation("formula index out of range");
  if (gamma.size() != m.points() || !is_permutation(gamma)) {
    throw ContractViolation("gamma must be a bijection of the points");
  }
  for (auto x : s)
    if (x >= m.points()) throw ContractViolation("subset point out of range");
}

inline void check_tuple_count(std::size_t base, std::size_t n, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= std::max<std::size_t>(base, 1);
    if (total > cap) throw EnumerationCapExceeded("tuple enumeration exceeds cap " + std::to_string(cap));
  }
}

/// Branch-and-bound sup over x in S^n of a min-type expression built incrementally.
/// `extend(depth, chosen, value)` returns the running min after fixing chosen[depth].
template <class Extend>
Rational sup_over_tuples(std::span<const std::size_t> s, std::size_t n, Extend&& extend) {
  if (n == 0) return Rational(1);
  if (s.empty()) return Rational(0);
  Rational best(0);
  std::vector<std::size_t> chosen(n);
  auto rec = [&](auto& self, std::size_t depth, const Rational& value) -> void {
    if (best == Rational(1)) return;
    if (depth == n) {
      best = std::max(best, value);
      return;
    }
    for (auto x : s) {
      chosen[depth] = x;
      Rational v = extend(depth, chosen, value);
      if (depth + 1 < n && v <= best) continue;
      self(self, depth + 1, v);
      if (best == Rational(1)) return;
    }
  };
  rec(rec, 0, Rational(1));
  return best;
}

}  // namespace detail

/// sup_{x in S^n} ( min_{i<j<n} d(g^-1 x_i, g^-1 x_j) ∧ min_{i<n} phi(g^-1 x_i, a) ).
inline Rational delta_phi_n_set(const MetricStructure& m, std::span<const std::size_t> s, std::size_t a,
                                const Permutation& gamma, std::size_t phi, std::size_t n,
                                std::uint64_t cap = kDefaultEnumerationCap) {
  detail::check_args(m, s, a, gamma, phi);
  detail::check_tuple_count(s.size(), n, cap);
  const auto gi = inverse(gamma);
  return detail::sup_over_tuples(s, n, [&](std::size_t depth, const std::vector<std::size_t>& x,
                                           const Rational& value) {
    const auto xi = gi[x[depth]];
    Rational v = std::min(value, m.phi(phi, xi, a));
    for (std::size_t j = 0; j < depth; ++j) v = std::min(v, m.d(gi[x[j]], xi));
    return v;
  });
}

/// sup_{x in S^n} min_{i<j<n} phi(g^-1 (x_i^-1 x_j), a).
inline Rational delta_phi_n_group(const MetricStructure& m, std::span<const std::size_t> s, std::size_t a,
                                  const Permutation& gamma, std::size_t phi, std::size_t n,
                                  std::uint64_t cap = kDefaultEnumerationCap) {
  if (!m.has_group()) throw ContractViolation("structure carries no group table");
  detail::check_args(m, s, a, gamma, phi);
  detail::check_tuple_count(s.size(), n, cap);
  const auto gi = inverse(gamma);
  return detail::sup_over_tuples(s, n, [&](std::size_t depth, const std::vector<std::size_t>& x,
                                           const Rational& value) {
    Rational v = value;
    for (std::size_t i = 0; i < depth; ++i) {
      v = std::min(v, m.phi(phi, gi[m.mul(m.inv(x[i]), x[depth])], a));
    }
    return v;
  });
}

/// sup_{x in S^n} inf_{eta in F_p^n \ 0} phi(g^-1 (sum eta_i x_i), a).
inline Rational delta_phi_n_vect(const MetricStructure& m, std::span<const std::size_t> s, std::size_t a,
                                 const Permutation& gamma, std::size_t phi, std::size_t n,
                                 std::uint64_t cap = kDefaultEnumerationCap) {
  if (!m.has_vector()) throw ContractViolation("structure carries no vector coordinates");
  detail::check_args(m, s, a, gamma, phi);
  const std::uint32_t p = m.vector()->p;
  detail::check_tuple_count(p, n, cap);
  detail::check_tuple_count(s.size(), n, cap);
  const auto gi = inverse(gamma);

  // combos[depth] holds (point, some eta_i nonzero) for every eta over the first depth slots.
  std::vector<std::vector<std::pair<std::size_t, bool>>> combos(n + 1);
  combos[0] = {{m.zero(), false}};
  return detail::sup_over_tuples(s, n, [&](std::size_t depth, const std::vector<std::size_t>& x,
                                           const Rational& value) {
    Rational v = value;
    auto& next = combos[depth + 1];
    next.clear();
    for (const auto& [c, nonzero] : combos[depth]) {
      for (std::uint32_t eta = 0; eta < p; ++eta) {
        const auto point = m.vadd(c, m.vscale(eta, x[depth]));
        const bool nz = nonzero || eta != 0;
        next.emplace_back(point, nz);
        if (eta != 0) v = std::min(v, m.phi(phi, gi[point], a));
      }
    }
    return v;
  });
}

inline Rational delta_phi_n(DeltaCase c, const MetricStructure& m, std::span<const std::size_t> s,
                            std::size_t a, const Permutation& gamma, std::size_t phi, std::size_t n,
                            std::uint64_t cap = kDefaultEnumerationCap) {
  switch (c) {
    case DeltaCase::Set: return delta_phi_n_set(m, s, a, gamma, phi, n, cap);
    case DeltaCase::Group: return delta_phi_n_group(m, s, a, gamma, phi, n, cap);
    case DeltaCase::Vector: return delta_phi_n_vect(m, s, a, gamma, phi, n, cap);
  }
  throw ContractViolation("unknown case");
}

/// delta_{phi,n} for n = 0..n_max.
inline std::vector<Rational> delta_sweep(DeltaCase c, const MetricStructure& m, std::span<const std::size_t> s,
                                         std::size_t a, const Permutation& gamma, std::size_t phi,
                                         std::size_t n_max, std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<Rational> out;
  for (std::size_t n = 0; n <= n_max; ++n) out.push_back(delta_phi_n(c, m, s, a, gamma, phi, n, cap));
  return out;
}

/// Largest n with delta_{phi,n}(S, a) = 1 on a structure with the discrete
/// metric and a {0,1}-valued phi. For phi = 1 - indicator(F_a) this equals
/// |S \ F_a|, [S : S∩F_a] or codim_S(S∩F_a) respectively.
inline std::size_t discrete_reduction(DeltaCase c, const MetricStructure& m, std::span<const std::size_t> s,
                                      std::size_t a, std::size_t phi = 0,
                                      std::uint64_t cap = kDefaultEnumerationCap) {
  if (!m.discrete_metric()) throw ContractViolation("discrete_reduction needs the discrete metric");
  if (phi >= m.formulas().size()) throw ContractViolation("formula index out of range");
  for (std::size_t x = 0; x < m.points(); ++x) {
    const auto& v = m.phi(phi, x, a);
    if (v != Rational(0) && v != Rational(1)) throw ContractViolation("discrete_reduction needs a {0,1}-valued formula");
  }
  const auto id = identity_permutation(m.points());
  std::size_t n = 0;
  while (n <= m.points() && delta_phi_n(c, m, s, a, id, phi, n + 1, cap) == Rational(1)) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// Discrete structures with phi_a = 1 - indicator(F_a)

inline std::vector<std::vector<Rational>> discrete_distance(std::size_t points) {
  std::vector<std::vector<Rational>> d(points, std::vector<Rational>(points, Rational(1)));
  for (std::size_t i = 0; i < points; ++i) d[i][i] = 0;
  return d;
}

inline Formula outside_formula(std::size_t points, const std::vector<std::vector<std::size_t>>& family) {
  Formula f{"outside", std::vector<std::vector<Rational>>(points, std::vector<Rational>(family.size(), Rational(1)))};
  for (std::size_t a = 0; a < family.size(); ++a)
    for (auto x : family[a]) f.values.at(x)[a] = 0;
  return f;
}

inline MetricStructure discrete_set_structure(std::size_t points,
                                              const std::vector<std::vector<std::size_t>>& family) {
  return MetricStructure(points, discrete_distance(points), {outside_formula(points, family)}, family.size());
}

inline MetricStructure discrete_group_structure(GroupTable table,
                                                const std::vector<std::vector<std::size_t>>& family) {
  const std::size_t n = table.mul.size();
  return MetricStructure(n, discrete_distance(n), {outside_formula(n, family)}, family.size(),
                         std::move(table));
}

/// Points are all vectors of F_p^dim in lexicographic order.
inline MetricStructure discrete_vector_structure(std::uint32_t p, std::size_t dim,
                                                 const std::vector<std::vector<std::size_t>>& family) {
  VectorCoords vc{p, dim, {}};
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= p;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec v(dim);
    std::size_t r = idx;
    for (std::size_t k = dim; k-- > 0;) {
      v[k] = static_cast<std::uint32_t>(r % p);
      r /= p;
    }
    vc.coords.push_back(std::move(v));
  }
  return MetricStructure(total, discrete_distance(total), {outside_formula(total, family)}, family.size(),
                         std::nullopt, std::move(vc));
}

/// Index of vector v among all vectors of F_p^dim in lexicographic order.
inline std::size_t vector_point(const Vec& v, std::uint32_t p) {
  std::size_t idx = 0;
  for (auto c : v) idx = idx * p + c;
  return idx;
}

}  // namespace closeknit
