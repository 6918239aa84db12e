#pragma once

// Close-knit data given directly as finite tables: a meet table, a family of
// element indices, delta and increment tables indexed by (element, a), and
// automorphisms as permutations of the elements.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "closeknit/engine.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/index.hpp"
#include "closeknit/permutation.hpp"

namespace closeknit {

/// Strong type for an element of a tabulated lattice.
struct LatticePoint {
  std::size_t id = 0;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend std::ostream& operator<<(std::ostream& os, const LatticePoint& p) { return os << '#' << p.id; }
};

struct AbstractDescription {
  std::size_t size = 0;
  std::vector<std::vector<std::size_t>> meet;       // size x size
  std::vector<std::size_t> family;                  // f_a as element ids, repetitions allowed
  std::vector<std::vector<IndexValue>> delta;       // [element][a]
  std::vector<std::vector<std::size_t>> increment;  // [element][a]
  std::vector<Permutation> gamma;                   // permutations of the elements
  std::vector<Permutation> gamma_on_family;         // optional; derived when empty
};

enum class AbstractClause { Structure, Associativity, Monotonicity, Increment, Equivariance };

inline const char* to_string(AbstractClause c) {
  switch (c) {
    case AbstractClause::Structure: return "Structure";
    case AbstractClause::Associativity: return "AssociativityViolation";
    case AbstractClause::Monotonicity: return "MonotonicityViolation";
    case AbstractClause::Increment: return "IncrementViolation";
    case AbstractClause::Equivariance: return "EquivarianceViolation";
  }
  return "?";
}

struct AbstractViolation {
  AbstractClause clause;
  std::string detail;
};

namespace detail {

inline std::string pt(std::size_t x) { return "#" + std::to_string(x); }

inline std::vector<AbstractViolation> check_structure(const AbstractDescription& d) {
  std::vector<AbstractViolation> out;
  auto bad = [&](std::string s) { out.push_back({AbstractClause::Structure, std::move(s)}); };
  const std::size_t n = d.size;
  const std::size_t na = d.family.size();
  if (n == 0) bad("lattice must have at least one element");
  if (na == 0) bad("family must be non-empty");
  if (d.meet.size() != n) bad("meet table must have one row per element");
  for (const auto& row : d.meet) {
    if (row.size() != n) bad("meet table rows must have one entry per element");
    for (auto x : row)
      if (x >= n) bad("meet table entry out of range");
  }
  for (auto f : d.family)
    if (f >= n) bad("family entry out of range");
  if (d.delta.size() != n) bad("delta table must have one row per element");
  std::optional<IndexValue> shape;
  for (const auto& row : d.delta) {
    if (row.size() != na) bad("delta rows must have one entry per family index");
    for (const auto& v : row) {
      if (!shape) shape = v;
      if (!v.same_shape(*shape)) bad("delta values must share length and level kind");
    }
  }
  if (d.increment.size() != n) bad("increment table must have one row per element");
  for (const auto& row : d.increment) {
    if (row.size() != na) bad("increment rows must have one entry per family index");
    for (auto x : row)
      if (x >= n) bad("increment entry out of range");
  }
  for (const auto& g : d.gamma) {
    if (g.size() != n || !is_permutation(g)) bad("gamma entries must be permutations of the elements");
  }
  if (!d.gamma_on_family.empty()) {
    if (d.gamma_on_family.size() != d.gamma.size()) bad("gamma_on_family needs one entry per gamma");
    for (const auto& g : d.gamma_on_family) {
      if (g.size() != na || !is_permutation(g)) bad("gamma_on_family entries must permute family indices");
    }
  }
  return out;
}

inline bool table_leq(const AbstractDescription& d, std::size_t x, std::size_t y) {
  return d.meet[x][y] == x;
}

/// For each generator, the induced permutation of family indices: the lowest
/// unused a' with f_{a'} = g f_a and matching delta/increment columns.
inline std::optional<std::vector<Permutation>> derive_family_action(const AbstractDescription& d) {
  std::vector<Permutation> out;
  const std::size_t na = d.family.size();
  for (const auto& g : d.gamma) {
    Permutation pa(na);
    std::vector<bool> used(na, false);
    for (std::size_t a = 0; a < na; ++a) {
      std::optional<std::size_t> chosen;
      for (std::size_t b = 0; b < na && !chosen; ++b) {
        if (used[b] || d.family[b] != g[d.family[a]]) continue;
        bool ok = true;
        for (std::size_t s = 0; s < d.size && ok; ++s) {
          ok = d.delta[g[s]][b] == d.delta[s][a] && d.increment[g[s]][b] == g[d.increment[s][a]];
        }
        if (ok) chosen = b;
      }
      if (!chosen) return std::nullopt;
      used[*chosen] = true;
      pa[a] = *chosen;
    }
    out.push_back(std::move(pa));
  }
  return out;
}

}  // namespace detail

/// All violations of the close-knit conditions, each tagged with its clause.
/// The increment clauses are checked on every pair of elements, not only on
/// meets of family members.
inline std::vector<AbstractViolation> validate_abstract(const AbstractDescription& d,
                                                        std::size_t max_violations = 50) {
  auto out = detail::check_structure(d);
  if (!out.empty()) return out;
  auto add = [&](AbstractClause c, std::string s) {
    if (out.size() < max_violations) out.push_back({c, std::move(s)});
  };
  using detail::pt;
  const std::size_t n = d.size;
  const std::size_t na = d.family.size();
  const auto& m = d.meet;

  for (std::size_t x = 0; x < n; ++x) {
    if (m[x][x] != x) add(AbstractClause::Associativity, "meet is not idempotent at " + pt(x));
    for (std::size_t y = 0; y < n; ++y) {
      if (m[x][y] != m[y][x]) {
        add(AbstractClause::Associativity, "meet is not commutative at " + pt(x) + "," + pt(y));
      }
      for (std::size_t z = 0; z < n; ++z) {
        if (m[m[x][y]][z] != m[x][m[y][z]]) {
          add(AbstractClause::Associativity,
              "meet is not associative at " + pt(x) + "," + pt(y) + "," + pt(z));
        }
      }
    }
  }
  if (!out.empty()) return out;

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      if (!detail::table_leq(d, s, d.increment[s][a])) {
        add(AbstractClause::Increment, pt(s) + " is not below its increment " +
                                           pt(d.increment[s][a]) + " for a=" + std::to_string(a));
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (t == s || !detail::table_leq(d, t, s)) continue;
      for (std::size_t a = 0; a < na; ++a) {
        if (!leq(d.delta[t][a], d.delta[s][a])) {
          add(AbstractClause::Monotonicity, "delta(" + pt(t) + "," + std::to_string(a) +
                                                ") is not below delta(" + pt(s) + ") though " +
                                                pt(t) + " <= " + pt(s));
        }
        if (d.delta[t][a] == d.delta[s][a] && d.increment[t][a] != d.increment[s][a]) {
          add(AbstractClause::Increment, pt(t) + " <= " + pt(s) + " with equal delta at a=" +
                                             std::to_string(a) + " but increments " +
                                             pt(d.increment[t][a]) + " != " +
                                             pt(d.increment[s][a]));
        }
      }
    }
  }

  for (std::size_t gi = 0; gi < d.gamma.size(); ++gi) {
    const auto& g = d.gamma[gi];
    const std::string tag = "gamma " + std::to_string(gi);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (g[m[x][y]] != m[g[x]][g[y]]) {
          add(AbstractClause::Equivariance, tag + " is not a meet automorphism");
          x = n;
          break;
        }
      }
    }
  }
  if (d.gamma_on_family.empty()) {
    if (!detail::derive_family_action(d)) {
      add(AbstractClause::Equivariance,
          "no action of gamma on family indices carries f_a, delta and increment equivariantly");
    }
  } else {
    for (std::size_t gi = 0; gi < d.gamma.size(); ++gi) {
      const auto& g = d.gamma[gi];
      const auto& ga = d.gamma_on_family[gi];
      for (std::size_t a = 0; a < na; ++a) {
        if (d.family[ga[a]] != g[d.family[a]]) {
          add(AbstractClause::Equivariance, "gamma " + std::to_string(gi) + " does not carry f_" +
                                                std::to_string(a) + " to f_{g.a}");
        }
        for (std::size_t s = 0; s < n; ++s) {
          if (d.delta[g[s]][ga[a]] != d.delta[s][a] || d.increment[g[s]][ga[a]] != g[d.increment[s][a]]) {
            add(AbstractClause::Equivariance, "gamma " + std::to_string(gi) +
                                                  " does not preserve delta/increment at " + pt(s));
            break;
          }
        }
      }
    }
  }
  return out;
}

class AbstractInstance {
 public:
  using element_type = LatticePoint;
  using measure_type = IndexValue;  // delta(N, a); tables carry no backward measure

  [[nodiscard]] const AbstractDescription& description() const noexcept { return d_; }
  [[nodiscard]] std::size_t size() const noexcept { return d_.size; }
  [[nodiscard]] const std::vector<LatticePoint>& family() const noexcept { return family_; }

  [[nodiscard]] LatticePoint meet(LatticePoint x, LatticePoint y) const { return {d_.meet[x.id][y.id]}; }
  [[nodiscard]] bool leq(LatticePoint x, LatticePoint y) const { return d_.meet[x.id][y.id] == x.id; }
  [[nodiscard]] IndexValue delta(LatticePoint s, std::size_t a) const { return d_.delta[s.id][a]; }
  [[nodiscard]] LatticePoint increment(LatticePoint s, std::size_t a) const {
    return {d_.increment[s.id][a]};
  }
  [[nodiscard]] std::size_t gamma_count() const noexcept { return d_.gamma.size(); }
  [[nodiscard]] LatticePoint act(std::size_t g, LatticePoint s) const { return {d_.gamma[g][s.id]}; }
  [[nodiscard]] std::size_t act_on_index(std::size_t g, std::size_t a) const {
    return family_action_[g][a];
  }
  [[nodiscard]] IndexValue measure(LatticePoint s, std::size_t a) const { return delta(s, a); }
  /// A meet-semilattice has no join-span; only the lower half of the sandwich applies.
  [[nodiscard]] bool in_join_span(LatticePoint) const { return true; }

  [[nodiscard]] std::vector<LatticePoint> all_points() const {
    std::vector<LatticePoint> out(d_.size);
    for (std::size_t i = 0; i < d_.size; ++i) out[i] = {i};
    return out;
  }

  /// Tables are small; every element is checked.
  [[nodiscard]] std::vector<LatticePoint> sample_elements(std::size_t, std::mt19937_64&) const {
    return all_points();
  }

 private:
  friend AbstractInstance load_abstract(AbstractDescription d);
  AbstractDescription d_;
  std::vector<LatticePoint> family_;
  std::vector<Permutation> family_action_;
};

/// Validates the tables and returns a usable instance, or throws the typed
/// violation for the first failing clause.
inline AbstractInstance load_abstract(AbstractDescription d) {
  const auto violations = validate_abstract(d, 1);
  if (!violations.empty()) {
    const auto& v = violations.front();
    const std::string msg = std::string(to_string(v.clause)) + ": " + v.detail;
    switch (v.clause) {
      case AbstractClause::Structure: throw MalformedInput(msg);
      case AbstractClause::Associativity: throw AssociativityViolation(msg);
      case AbstractClause::Monotonicity: throw MonotonicityViolation(msg);
      case AbstractClause::Increment: throw IncrementViolation(msg);
      case AbstractClause::Equivariance: throw EquivarianceViolation(msg);
    }
  }
  AbstractInstance inst;
  if (d.gamma_on_family.empty()) d.gamma_on_family = *detail::derive_family_action(d);
  inst.family_action_ = d.gamma_on_family;
  for (auto f : d.family) inst.family_.push_back({f});
  inst.d_ = std::move(d);
  return inst;
}

/// Tabulates a concrete instance over a universe of elements that contains the
/// family and is closed under meet, increment and the generators.
template <CloseKnitInstance I>
AbstractDescription tabulate(const I& inst, std::vector<typename I::element_type> universe) {
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  std::map<typename I::element_type, std::size_t> id;
  for (std::size_t i = 0; i < universe.size(); ++i) id.emplace(universe[i], i);
  auto lookup = [&](const typename I::element_type& e) {
    auto it = id.find(e);
    if (it == id.end()) throw ContractViolation("tabulation universe is not closed");
    return it->second;
  };

  AbstractDescription d;
  const std::size_t n = universe.size();
  const std::size_t na = inst.family().size();
  d.size = n;
  d.meet.assign(n, std::vector<std::size_t>(n));
  d.delta.assign(n, {});
  d.increment.assign(n, std::vector<std::size_t>(na));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) d.meet[x][y] = lookup(inst.meet(universe[x], universe[y]));
    for (std::size_t a = 0; a < na; ++a) {
      d.delta[x].push_back(inst.delta(universe[x], a));
      d.increment[x][a] = lookup(inst.increment(universe[x], a));
    }
  }
  for (const auto& f : inst.family()) d.family.push_back(lookup(f));
  for (std::size_t g = 0; g < inst.gamma_count(); ++g) {
    Permutation p(n);
    for (std::size_t x = 0; x < n; ++x) p[x] = lookup(inst.act(g, universe[x]));
    d.gamma.push_back(std::move(p));
    Permutation pa(na);
    for (std::size_t a = 0; a < na; ++a) pa[a] = inst.act_on_index(g, a);
    d.gamma_on_family.push_back(std::move(pa));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Random valid instances
//
// Elements are down-sets of a random poset P (or a meet-closed, automorphism-
// invariant family of them containing P itself). Delta is a weighted count of
// s \ f_a split along an invariant subset of P; increments are the least
// element containing s ∪ f_a. Automorphisms of P act on everything.

struct RandomAbstractOptions {
  std::size_t max_points = 4;
  std::size_t max_size = 12;
  std::size_t max_family = 6;
  std::size_t max_attempts = 10000;
};

namespace detail {

using Mask = std::uint32_t;

inline Mask image_mask(Mask m, const Permutation& p) {
  Mask out = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (m & (Mask{1} << i)) out |= Mask{1} << p[i];
  return out;
}

inline std::optional<AbstractDescription> try_random_abstract(std::mt19937_64& rng,
                                                              const RandomAbstractOptions& opt) {
  std::uniform_int_distribution<std::size_t> npoints(1, opt.max_points);
  const std::size_t k = npoints(rng);
  std::bernoulli_distribution edge(0.35), coin(0.5);

  // Random strict order, transitively closed.
  std::vector<std::vector<bool>> less(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) less[i][j] = edge(rng);
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (less[i][m] && less[m][j]) less[i][j] = true;

  std::vector<Mask> downsets;
  for (Mask d = 0; d < (Mask{1} << k); ++d) {
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) {
      if (!(d & (Mask{1} << j))) continue;
      for (std::size_t i = 0; i < k && ok; ++i)
        if (less[i][j] && !(d & (Mask{1} << i))) ok = false;
    }
    if (ok) downsets.push_back(d);
  }

  std::vector<Permutation> autos;
  Permutation perm = identity_permutation(k);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      for (std::size_t j = 0; j < k && ok; ++j) ok = less[i][j] == less[perm[i]][perm[j]];
    if (ok && !is_identity(perm)) autos.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Permutation> gens;
  if (!autos.empty()) {
    std::uniform_int_distribution<std::size_t> ngens(0, 2), which(0, autos.size() - 1);
    const std::size_t count = ngens(rng);
    for (std::size_t i = 0; i < count; ++i) gens.push_back(autos[which(rng)]);
  }

  auto close = [&](std::set<Mask> s, bool under_meet) {
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Mask> cur(s.begin(), s.end());
      for (auto x : cur) {
        for (const auto& g : gens) grew |= s.insert(image_mask(x, g)).second;
        if (under_meet)
          for (auto y : cur) grew |= s.insert(x & y).second;
      }
    }
    return s;
  };

  std::uniform_int_distribution<std::size_t> pick(0, downsets.size() - 1);
  std::set<Mask> fam_seed{downsets[pick(rng)]};
  if (coin(rng)) fam_seed.insert(downsets[pick(rng)]);
  const auto fam_set = close(fam_seed, false);
  if (fam_set.size() > opt.max_family) return std::nullopt;

  const Mask top = (Mask{1} << k) - 1;
  std::set<Mask> universe;
  if (coin(rng)) {
    universe.insert(downsets.begin(), downsets.end());
  } else {
    std::set<Mask> seed(fam_set);
    seed.insert(top);
    std::uniform_int_distribution<std::size_t> nextra(0, 2);
    const std::size_t extra = nextra(rng);
    for (std::size_t i = 0; i < extra; ++i) seed.insert(downsets[pick(rng)]);
    universe = close(seed, true);
  }
  if (universe.size() > opt.max_size) return std::nullopt;

  std::vector<Mask> elems(universe.begin(), universe.end());
  std::map<Mask, std::size_t> id;
  for (std::size_t i = 0; i < elems.size(); ++i) id[elems[i]] = i;
  const std::vector<Mask> fam(fam_set.begin(), fam_set.end());

  // Invariant positive weights and an invariant split of P.
  std::vector<std::size_t> orbit(k);
  std::iota(orbit.begin(), orbit.end(), std::size_t{0});
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& g : gens)
      for (std::size_t i = 0; i < k; ++i) {
        const auto lo = std::min(orbit[i], orbit[g[i]]);
        if (orbit[i] != lo || orbit[g[i]] != lo) {
          orbit[i] = orbit[g[i]] = lo;
          changed = true;
        }
      }
  }
  std::uniform_int_distribution<std::int64_t> wdist(1, 3);
  std::vector<std::int64_t> orbit_weight(k), orbit_split(k);
  for (std::size_t i = 0; i < k; ++i) {
    orbit_weight[i] = wdist(rng);
    orbit_split[i] = coin(rng);
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < k; ++i) total += orbit_weight[orbit[i]];

  std::uniform_int_distribution<int> shape(0, 2);
  const int delta_shape = shape(rng);
  auto delta_of = [&](Mask diff) {
    std::int64_t in = 0, out = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(diff & (Mask{1} << i))) continue;
      (orbit_split[orbit[i]] ? in : out) += orbit_weight[orbit[i]];
    }
    switch (delta_shape) {
      case 0: return IndexValue::natural({in + out});
      case 1: return IndexValue::natural({in, out});
      default: return IndexValue::unit({Rational(in, total), Rational(out, total)});
    }
  };

  AbstractDescription d;
  const std::size_t n = elems.size();
  d.size = n;
  d.meet.assign(n, std::vector<std::size_t>(n));
  d.delta.assign(n, {});
  d.increment.assign(n, std::vector<std::size_t>(fam.size()));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) d.meet[x][y] = id.at(elems[x] & elems[y]);
    for (std::size_t a = 0; a < fam.size(); ++a) {
      d.delta[x].push_back(delta_of(elems[x] & ~fam[a]));
      const Mask need = elems[x] | fam[a];
      Mask least = top;
      for (auto e : elems)
        if ((e & need) == need) least &= e;
      d.increment[x][a] = id.at(least);
    }
  }
  for (auto f : fam) d.family.push_back(id.at(f));
  for (const auto& g : gens) {
    Permutation p(n);
    for (std::size_t x = 0; x < n; ++x) p[x] = id.at(image_mask(elems[x], g));
    d.gamma.push_back(std::move(p));
  }
  return d;
}

}  // namespace detail

/// A random description that passes validate_abstract.
inline AbstractDescription random_abstract(std::mt19937_64& rng, const RandomAbstractOptions& opt = {}) {
  for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
    auto d = detail::try_random_abstract(rng, opt);
    if (d && validate_abstract(*d, 1).empty()) return *d;
  }
  throw InternalInvariantViolation("random_abstract: no valid instance within the attempt budget");
}

}  // namespace closeknit
