#pragma once

// Subspaces of F_p^n, stored by their canonical reduced row echelon basis.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "closeknit/engine.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/index.hpp"

namespace closeknit {

using Vec = std::vector<std::uint32_t>;
using Matrix = std::vector<Vec>;  // row-major

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

namespace detail {

inline std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // a^(p-2)
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

/// In-place reduced row echelon form over F_p; zero rows are dropped.
inline void rref(Matrix& m, std::uint32_t p, std::size_t ncols) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[row], m[pivot]);
    const auto scale = inv_mod(m[row][col], p);
    for (auto& x : m[row]) x = mul_mod(x, scale, p);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const auto factor = m[r][col];
      for (std::size_t c = 0; c < ncols; ++c) {
        m[r][c] = (m[r][c] + p - mul_mod(factor, m[row][c], p)) % p;
      }
    }
    ++row;
  }
  m.resize(row);
}

}  // namespace detail

class SubspaceBasis {
 public:
  SubspaceBasis() = default;

  static SubspaceBasis span(std::uint32_t p, std::size_t dim, Matrix vectors) {
    if (!is_prime(p) || p >= (1u << 31)) throw ContractViolation("field characteristic must be a prime below 2^31");
    for (auto& v : vectors) {
      if (v.size() != dim) throw StructuralError("vector length differs from ambient dimension");
      for (auto& x : v) x %= p;
    }
    detail::rref(vectors, p, dim);
    SubspaceBasis s;
    s.p_ = p;
    s.dim_ = dim;
    s.rows_ = std::move(vectors);
    return s;
  }

  static SubspaceBasis zero(std::uint32_t p, std::size_t dim) { return span(p, dim, {}); }

  static SubspaceBasis full(std::uint32_t p, std::size_t dim) {
    Matrix id(dim, Vec(dim, 0));
    for (std::size_t i = 0; i < dim; ++i) id[i][i] = 1;
    return span(p, dim, std::move(id));
  }

  [[nodiscard]] std::uint32_t p() const noexcept { return p_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t rank() const noexcept { return rows_.size(); }
  [[nodiscard]] const Matrix& rows() const noexcept { return rows_; }

  [[nodiscard]] bool same_shape(const SubspaceBasis& o) const noexcept {
    return p_ == o.p_ && dim_ == o.dim_;
  }

  [[nodiscard]] bool contains(const Vec& v) const {
    Matrix m = rows_;
    m.push_back(v);
    for (auto& x : m.back()) x %= p_;
    detail::rref(m, p_, dim_);
    return m.size() == rows_.size();
  }

  /// All vectors of the subspace (p^rank of them).
  [[nodiscard]] Matrix elements() const {
    Matrix out{Vec(dim_, 0)};
    for (const auto& r : rows_) {
      const std::size_t n = out.size();
      for (std::uint32_t c = 1; c < p_; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
          Vec v = out[i];
          for (std::size_t k = 0; k < dim_; ++k) v[k] = (v[k] + detail::mul_mod(c, r[k], p_)) % p_;
          out.push_back(std::move(v));
        }
      }
    }
    return out;
  }

  friend bool operator==(const SubspaceBasis&, const SubspaceBasis&) = default;
  friend std::strong_ordering operator<=>(const SubspaceBasis& a, const SubspaceBasis& b) {
    if (auto c = a.p_ <=> b.p_; c != 0) return c;
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return a.rows_ <=> b.rows_;
  }

  friend std::ostream& operator<<(std::ostream& os, const SubspaceBasis& s) {
    os << "span[";
    for (std::size_t i = 0; i < s.rows_.size(); ++i) {
      if (i) os << ' ';
      os << '(';
      for (std::size_t k = 0; k < s.dim_; ++k) os << (k ? "," : "") << s.rows_[i][k];
      os << ')';
    }
    return os << ']';
  }

 private:
  std::uint32_t p_ = 2;
  std::size_t dim_ = 0;
  Matrix rows_;
};

inline void require_same_shape(const SubspaceBasis& s, const SubspaceBasis& t) {
  if (!s.same_shape(t)) throw StructuralError("subspaces of different ambient spaces");
}

inline SubspaceBasis sum(const SubspaceBasis& s, const SubspaceBasis& t) {
  require_same_shape(s, t);
  Matrix m = s.rows();
  m.insert(m.end(), t.rows().begin(), t.rows().end());
  return SubspaceBasis::span(s.p(), s.dim(), std::move(m));
}

/// Zassenhaus: reduce [s | s] over [t | 0]; rows with vanishing left half span S∩T.
inline SubspaceBasis intersect(const SubspaceBasis& s, const SubspaceBasis& t) {
  require_same_shape(s, t);
  const std::size_t n = s.dim();
  Matrix m;
  for (const auto& r : s.rows()) {
    Vec v(r);
    v.insert(v.end(), r.begin(), r.end());
    m.push_back(std::move(v));
  }
  for (const auto& r : t.rows()) {
    Vec v(r);
    v.resize(2 * n, 0);
    m.push_back(std::move(v));
  }
  detail::rref(m, s.p(), 2 * n);
  Matrix out;
  for (const auto& r : m) {
    if (std::all_of(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n), [](auto x) { return x == 0; })) {
      out.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(n), r.end());
    }
  }
  return SubspaceBasis::span(s.p(), n, std::move(out));
}

inline bool subspace_of(const SubspaceBasis& s, const SubspaceBasis& t) {
  require_same_shape(s, t);
  return sum(s, t).rank() == t.rank();
}

/// codim_S(S∩T) = dim S - dim(S∩T).
inline std::uint64_t codim(const SubspaceBasis& s, const SubspaceBasis& t) {
  return s.rank() - intersect(s, t).rank();
}

inline bool is_invertible(const Matrix& m, std::uint32_t p, std::size_t dim) {
  if (m.size() != dim) return false;
  for (const auto& r : m) {
    if (r.size() != dim) return false;
  }
  Matrix copy = m;
  for (auto& r : copy)
    for (auto& x : r) x %= p;
  detail::rref(copy, p, dim);
  return copy.size() == dim;
}

/// {Mv : v in S}, with v a column vector.
inline SubspaceBasis matrix_action(const Matrix& m, const SubspaceBasis& s) {
  if (!is_invertible(m, s.p(), s.dim())) throw InvalidAction("matrix is not invertible mod p");
  Matrix images;
  for (const auto& v : s.rows()) {
    Vec w(s.dim(), 0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < s.dim(); ++j) acc += static_cast<std::uint64_t>(m[i][j] % s.p()) * v[j];
      w[i] = static_cast<std::uint32_t>(acc % s.p());
    }
    images.push_back(std::move(w));
  }
  return SubspaceBasis::span(s.p(), s.dim(), std::move(images));
}

class VectorInstance {
 public:
  using element_type = SubspaceBasis;
  using measure_type = CountMeasure;

  VectorInstance(std::uint32_t p, std::size_t dim, std::span<const SubspaceBasis> seeds,
                 std::vector<Matrix> gamma, std::size_t max_orbit = 10000)
      : p_(p), dim_(dim), gamma_(std::move(gamma)) {
    for (const auto& s : seeds) {
      if (s.p() != p || s.dim() != dim) throw StructuralError("seed lives in a different space");
    }
    for (const auto& g : gamma_) {
      if (!is_invertible(g, p, dim)) throw InvalidAction("gamma matrix is not invertible mod p");
    }
    auto closed = orbit_closure<SubspaceBasis>(
        seeds, gamma_.size(),
        [this](std::size_t g, const SubspaceBasis& s) { return matrix_action(gamma_[g], s); },
        max_orbit);
    family_ = std::move(closed.members);
    action_ = std::move(closed.action);
    span_ = SubspaceBasis::zero(p, dim);
    for (const auto& f : family_) span_ = sum(span_, f);
  }

  [[nodiscard]] std::uint32_t p() const noexcept { return p_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] const std::vector<SubspaceBasis>& family() const noexcept { return family_; }
  [[nodiscard]] const std::vector<Matrix>& gamma() const noexcept { return gamma_; }

  [[nodiscard]] SubspaceBasis meet(const SubspaceBasis& a, const SubspaceBasis& b) const {
    return intersect(a, b);
  }
  [[nodiscard]] bool leq(const SubspaceBasis& a, const SubspaceBasis& b) const {
    return subspace_of(a, b);
  }
  [[nodiscard]] IndexValue delta(const SubspaceBasis& s, std::size_t a) const {
    return IndexValue::natural({static_cast<std::int64_t>(codim(s, family_.at(a)))});
  }
  [[nodiscard]] SubspaceBasis increment(const SubspaceBasis& s, std::size_t a) const {
    return sum(s, family_.at(a));
  }

  [[nodiscard]] std::size_t gamma_count() const noexcept { return gamma_.size(); }
  [[nodiscard]] SubspaceBasis act(std::size_t g, const SubspaceBasis& s) const {
    return matrix_action(gamma_.at(g), s);
  }
  [[nodiscard]] std::size_t act_on_index(std::size_t g, std::size_t a) const { return action_[g][a]; }

  [[nodiscard]] CountMeasure measure(const SubspaceBasis& s, std::size_t a) const {
    return {codim(s, family_.at(a)), codim(family_.at(a), s)};
  }

  [[nodiscard]] const SubspaceBasis& join_span() const noexcept { return span_; }
  [[nodiscard]] bool in_join_span(const SubspaceBasis& s) const { return subspace_of(s, span_); }

  /// Random meets of family members, and spans of random vectors inside them.
  [[nodiscard]] std::vector<SubspaceBasis> sample_elements(std::size_t count,
                                                           std::mt19937_64& rng) const {
    std::vector<SubspaceBasis> out;
    std::uniform_int_distribution<std::size_t> pick(0, family_.size() - 1);
    std::uniform_int_distribution<std::uint32_t> coeff(0, p_ - 1);
    while (out.size() < count) {
      auto s = family_[pick(rng)];
      const std::size_t extra = pick(rng) % 3;
      for (std::size_t i = 0; i < extra; ++i) s = intersect(s, family_[pick(rng)]);
      out.push_back(s);
      if (out.size() == count) break;
      Matrix vs;
      const std::size_t k = pick(rng) % (s.rank() + 1);
      for (std::size_t i = 0; i < k; ++i) {
        Vec v(dim_, 0);
        for (const auto& r : s.rows()) {
          const auto c = coeff(rng);
          for (std::size_t j = 0; j < dim_; ++j) v[j] = (v[j] + detail::mul_mod(c, r[j], p_)) % p_;
        }
        vs.push_back(std::move(v));
      }
      out.push_back(SubspaceBasis::span(p_, dim_, std::move(vs)));
    }
    return out;
  }

 private:
  std::uint32_t p_;
  std::size_t dim_;
  std::vector<Matrix> gamma_;
  std::vector<SubspaceBasis> family_;
  std::vector<std::vector<std::size_t>> action_;
  SubspaceBasis span_;
};

}  // namespace closeknit
