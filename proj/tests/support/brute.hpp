#pragma once

// Naive reference computations used as oracles in the tests. Nothing here calls
// into the library's algorithms: groups are plain std::set<Perm>, subspaces are
// explicit vector sets, and sup/inf formulas are evaluated by full enumeration.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace brute {

using Perm = std::vector<std::size_t>;
using PermSet = std::set<Perm>;

inline Perm mul(const Perm& p, const Perm& q) {
  Perm r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline Perm inv(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = i;
  return r;
}

inline Perm id(std::size_t n) {
  Perm r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

/// Closure under multiplication; finite, so this is the generated subgroup.
inline PermSet generate(std::size_t n, const std::vector<Perm>& gens) {
  PermSet out{id(n)};
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Perm> cur(out.begin(), out.end());
    for (const auto& a : cur)
      for (const auto& g : gens) grew |= out.insert(mul(a, g)).second;
  }
  return out;
}

inline PermSet meet(const PermSet& a, const PermSet& b) {
  PermSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline std::size_t index(const PermSet& s, const PermSet& t) { return s.size() / meet(s, t).size(); }

inline PermSet product(const PermSet& s, const PermSet& f) {
  PermSet out;
  for (const auto& x : s)
    for (const auto& y : f) out.insert(mul(x, y));
  return out;
}

/// ⋂_{s in S} s^-1 (SF) s, straight from the definition.
inline PermSet increment(const PermSet& s, const PermSet& f) {
  const auto sf = product(s, f);
  PermSet out = sf;
  for (const auto& x : s) {
    PermSet conj;
    for (const auto& y : sf) conj.insert(mul(mul(inv(x), y), x));
    out = meet(out, conj);
  }
  return out;
}

inline bool is_normal_in(const PermSet& h, const PermSet& g) {
  for (const auto& x : g)
    for (const auto& y : h)
      if (!h.contains(mul(mul(x, y), inv(x)))) return false;
  return true;
}

/// Every subgroup, found as the closure of every subset of size <= 2 of elements and then joins.
inline std::set<PermSet> all_subgroups(std::size_t n, const PermSet& g) {
  std::set<PermSet> out;
  const std::vector<Perm> el(g.begin(), g.end());
  for (std::size_t i = 0; i < el.size(); ++i) {
    for (std::size_t j = i; j < el.size(); ++j) out.insert(generate(n, {el[i], el[j]}));
  }
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<PermSet> cur(out.begin(), out.end());
    for (const auto& a : cur) {
      for (const auto& b : cur) {
        std::vector<Perm> gens(a.begin(), a.end());
        gens.insert(gens.end(), b.begin(), b.end());
        grew |= out.insert(generate(n, gens)).second;
      }
    }
  }
  return out;
}

// Vector spaces over F_p as explicit sets of coordinate vectors.
using Vec = std::vector<std::uint32_t>;
using VecSet = std::set<Vec>;

inline VecSet span(std::uint32_t p, std::size_t dim, const std::vector<Vec>& gens) {
  VecSet out{Vec(dim, 0)};
  for (const auto& g : gens) {
    VecSet next;
    for (const auto& v : out) {
      for (std::uint32_t c = 0; c < p; ++c) {
        Vec w(dim);
        for (std::size_t i = 0; i < dim; ++i) w[i] = (v[i] + c * g[i]) % p;
        next.insert(w);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline VecSet meet(const VecSet& a, const VecSet& b) {
  VecSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline std::size_t log_p(std::size_t size, std::uint32_t p) {
  std::size_t k = 0;
  while (size > 1) {
    size /= p;
    ++k;
  }
  return k;
}

inline std::size_t codim(const VecSet& s, const VecSet& t, std::uint32_t p) {
  return log_p(s.size(), p) - log_p(meet(s, t).size(), p);
}

/// Calls f on every tuple in base^n.
inline void for_each_tuple(const std::vector<std::size_t>& base, std::size_t n,
                           const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> t(n);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == n) {
      f(t);
      return;
    }
    for (auto x : base) {
      t[depth] = x;
      rec(depth + 1);
    }
  };
  rec(0);
}

}  // namespace brute
