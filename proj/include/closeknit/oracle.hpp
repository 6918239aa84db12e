#pragma once

// Brute-force enumeration of invariant candidates, independent of the engine.
// Every enumerator has a hard cap; exceeding it is an error, never a truncation.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "closeknit/abstract.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/groups.hpp"
#include "closeknit/permutation.hpp"
#include "closeknit/sets.hpp"
#include "closeknit/vect.hpp"

namespace closeknit {

inline constexpr std::size_t kMaxOracleOrbits = 20;
inline constexpr std::size_t kMaxOracleGroupOrder = 96;
inline constexpr std::size_t kMaxOracleVectors = 1024;
inline constexpr std::size_t kMaxOracleSubspaces = 200000;

/// Orbits of the group generated by `gamma` on {0,...,n-1}, each sorted.
inline std::vector<std::vector<std::size_t>> point_orbits(std::size_t n, const std::vector<Permutation>& gamma) {
  std::vector<std::size_t> label(n, n);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < n; ++start) {
    if (label[start] != n) continue;
    std::vector<std::size_t> orbit{start};
    label[start] = out.size();
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (const auto& g : gamma) {
        const auto y = g[orbit[i]];
        if (label[y] == n) {
          label[y] = out.size();
          orbit.push_back(y);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

/// Every invariant subset, as a union of orbits.
inline std::vector<FiniteSubset> invariant_subsets(std::size_t n, const std::vector<Permutation>& gamma) {
  for (const auto& g : gamma) require_permutation(g, n);
  const auto orbits = point_orbits(n, gamma);
  if (orbits.size() > kMaxOracleOrbits) {
    throw EnumerationCapExceeded(std::to_string(orbits.size()) + " orbits exceed the oracle cap of " +
                                 std::to_string(kMaxOracleOrbits));
  }
  std::vector<FiniteSubset> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << orbits.size()); ++mask) {
    FiniteSubset s(n);
    for (std::size_t o = 0; o < orbits.size(); ++o)
      if (mask & (std::uint64_t{1} << o))
        for (auto x : orbits[o]) s.insert(x);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All subgroups: cyclic subgroups first, then repeated joins with cyclic subgroups.
inline std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
  if (g->order() > kMaxOracleGroupOrder) {
    throw EnumerationCapExceeded("group order " + std::to_string(g->order()) + " exceeds the oracle cap of " +
                                 std::to_string(kMaxOracleGroupOrder));
  }
  std::set<Subgroup> cyclic;
  for (ElementIndex x = 0; x < g->order(); ++x) cyclic.insert(closure(g, {x}));
  std::set<Subgroup> all(cyclic);
  std::vector<Subgroup> frontier(all.begin(), all.end());
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& h : frontier) {
      for (const auto& c : cyclic) {
        if (c.subgroup_of(h)) continue;
        auto j = join(h, c);
        if (all.insert(j).second) next.push_back(std::move(j));
      }
    }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}

/// All subspaces of F_p^dim.
inline std::vector<SubspaceBasis> all_subspaces(std::uint32_t p, std::size_t dim) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    total *= p;
    if (total > kMaxOracleVectors) {
      throw EnumerationCapExceeded("p^dim exceeds the oracle cap of " + std::to_string(kMaxOracleVectors));
    }
  }
  const auto vectors = SubspaceBasis::full(p, dim).elements();
  std::set<SubspaceBasis> all{SubspaceBasis::zero(p, dim)};
  std::vector<SubspaceBasis> frontier(all.begin(), all.end());
  while (!frontier.empty()) {
    std::vector<SubspaceBasis> next;
    for (const auto& s : frontier) {
      for (const auto& v : vectors) {
        if (s.contains(v)) continue;
        Matrix rows = s.rows();
        rows.push_back(v);
        auto t = SubspaceBasis::span(p, dim, std::move(rows));
        if (all.insert(t).second) {
          if (all.size() > kMaxOracleSubspaces) {
            throw EnumerationCapExceeded("subspace count exceeds the oracle cap of " +
                                         std::to_string(kMaxOracleSubspaces));
          }
          next.push_back(std::move(t));
        }
      }
    }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}

namespace detail {

template <class I>
std::vector<typename I::element_type> filter_feasible(const I& inst, std::vector<typename I::element_type> candidates,
                                                      std::uint64_t bound) {
  std::vector<typename I::element_type> out;
  for (auto& c : candidates) {
    if (!is_gamma_fixed(inst, c)) continue;
    bool ok = true;
    for (std::size_t a = 0; a < inst.family().size() && ok; ++a) {
      const auto m = inst.measure(c, a);
      ok = std::max(m.forward, m.backward) <= bound;
    }
    if (ok) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

/// Invariant elements whose measure against every family member is at most `bound`.
inline std::vector<FiniteSubset> feasible_set(const SetInstance& inst, std::uint64_t bound) {
  return detail::filter_feasible(inst, invariant_subsets(inst.carrier_size(), inst.gamma()), bound);
}

inline std::vector<Subgroup> feasible_set(const GroupInstance& inst, std::uint64_t bound) {
  return detail::filter_feasible(inst, all_subgroups(inst.ambient()), bound);
}

inline std::vector<SubspaceBasis> feasible_set(const VectorInstance& inst, std::uint64_t bound) {
  return detail::filter_feasible(inst, all_subspaces(inst.p(), inst.dim()), bound);
}

/// Fixed lattice points with delta(x, a) <= bound for every a (all fixed points without a bound).
inline std::vector<LatticePoint> feasible_set(const AbstractInstance& inst,
                                              const std::optional<IndexValue>& bound = std::nullopt) {
  std::vector<LatticePoint> out;
  for (auto x : inst.all_points()) {
    if (!is_gamma_fixed(inst, x)) continue;
    bool ok = true;
    for (std::size_t a = 0; a < inst.family().size() && ok && bound; ++a) ok = leq(inst.delta(x, a), *bound);
    if (ok) out.push_back(x);
  }
  return out;
}

}  // namespace closeknit
