#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include "closeknit/errors.hpp"

namespace closeknit {

/// A permutation of {0,...,n-1} stored as its image array: p[i] is the image of i.
using Permutation = std::vector<std::size_t>;

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

inline bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

inline void require_permutation(const Permutation& p, std::size_t degree) {
  if (p.size() != degree || !is_permutation(p)) {
    throw MalformedInput("expected a permutation image array of length " + std::to_string(degree));
  }
}

/// (p * q)(x) = p(q(x)): apply q first.
inline Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline Permutation inverse(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = i;
  return r;
}

inline bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != i) return false;
  }
  return true;
}

/// Builds a permutation of degree n from disjoint cycles, e.g. cycles({{0,1,2}}, 4).
inline Permutation from_cycles(const std::vector<std::vector<std::size_t>>& cycles, std::size_t n) {
  Permutation p = identity_permutation(n);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) p.at(c[i]) = c[(i + 1) % c.size()];
  }
  if (!is_permutation(p)) throw MalformedInput("cycles are not disjoint");
  return p;
}

}  // namespace closeknit
