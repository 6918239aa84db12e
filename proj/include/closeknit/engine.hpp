#pragma once

// Generic fixed-point engine for close-knit families.
//
// An instance supplies a finite meet-semilattice (through its element type), an
// orbit-closed family f_a, the index-valued distance delta(s, a), the increment
// (s, a) -> s^a and a finite list of automorphism generators. The engine computes
// the minimal down-set m over meets of family members, a strong element s with
// m(s) = m, the argmax set A(s), n(s) = meet{s^a : a in A(s)}, and the greatest
// n(s); the latter is fixed by every generator.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "closeknit/errors.hpp"
#include "closeknit/index.hpp"

namespace closeknit {

enum class SolveMode { FullMeet, Proof, Both };
enum class StrongMode { FullMeet, Greedy };

/// Forward/backward commensurability measure of N against a family member:
/// (|N\F|, |F\N|), ([N:N∩F], [F:F∩N]) or (codim_N(N∩F), codim_F(F∩N)).
struct CountMeasure {
  std::uint64_t forward = 0;
  std::uint64_t backward = 0;
  friend bool operator==(const CountMeasure&, const CountMeasure&) = default;
};

template <class I>
concept CloseKnitInstance =
    std::totally_ordered<typename I::element_type> &&
    requires(const I& inst, const typename I::element_type& s, std::size_t a, std::size_t g,
             std::ostream& os) {
      typename I::measure_type;
      { inst.family() } -> std::same_as<const std::vector<typename I::element_type>&>;
      { inst.meet(s, s) } -> std::same_as<typename I::element_type>;
      { inst.leq(s, s) } -> std::same_as<bool>;
      { inst.delta(s, a) } -> std::same_as<IndexValue>;
      { inst.increment(s, a) } -> std::same_as<typename I::element_type>;
      { inst.gamma_count() } -> std::convertible_to<std::size_t>;
      { inst.act(g, s) } -> std::same_as<typename I::element_type>;
      { inst.act_on_index(g, a) } -> std::convertible_to<std::size_t>;
      { inst.measure(s, a) } -> std::same_as<typename I::measure_type>;
      { inst.in_join_span(s) } -> std::same_as<bool>;
      { os << s };
    };

/// Instances that can produce test elements for condition checking.
template <class I>
concept SampledInstance =
    CloseKnitInstance<I> && requires(const I& inst, std::size_t count, std::mt19937_64& rng) {
      { inst.sample_elements(count, rng) } -> std::same_as<std::vector<typename I::element_type>>;
    };

template <class E>
struct ClosedFamily {
  std::vector<E> members;                        // sorted, deduplicated
  std::vector<std::vector<std::size_t>> action;  // action[g][a] = index of g·f_a
};

/// Smallest family containing `seeds` and closed under every generator.
/// Members are returned in sorted order, so the indexing does not depend on seed order.
template <class E, class Act>
ClosedFamily<E> orbit_closure(std::span<const E> seeds, std::size_t gamma_count, Act&& act,
                              std::size_t cap) {
  if (seeds.empty()) throw ContractViolation("orbit_closure needs at least one seed");
  std::set<E> seen;
  std::vector<E> frontier;
  for (const auto& s : seeds) {
    if (seen.insert(s).second) frontier.push_back(s);
  }
  if (seen.size() > cap) throw OrbitCapExceeded("orbit closure exceeds cap " + std::to_string(cap));
  while (!frontier.empty()) {
    std::vector<E> next;
    for (const auto& x : frontier) {
      for (std::size_t g = 0; g < gamma_count; ++g) {
        E y = act(g, x);
        if (seen.insert(y).second) {
          if (seen.size() > cap) {
            throw OrbitCapExceeded("orbit closure exceeds cap " + std::to_string(cap));
          }
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }

  ClosedFamily<E> out;
  out.members.assign(seen.begin(), seen.end());
  std::map<E, std::size_t> position;
  for (std::size_t i = 0; i < out.members.size(); ++i) position.emplace(out.members[i], i);
  out.action.assign(gamma_count, std::vector<std::size_t>(out.members.size()));
  for (std::size_t g = 0; g < gamma_count; ++g) {
    for (std::size_t a = 0; a < out.members.size(); ++a) {
      out.action[g][a] = position.at(act(g, out.members[a]));
    }
  }
  return out;
}

struct SearchLimits {
  std::size_t max_strong_candidates = 100000;
  std::size_t max_greedy_steps = std::numeric_limits<std::size_t>::max();
  std::size_t max_subset_size = 4;
};

struct SolveOptions {
  SolveMode mode = SolveMode::FullMeet;
  bool trace = false;
  SearchLimits limits;
};

template <class E>
struct TraceStep {
  std::string event;  // "start", "descend" or "result"
  E element;          // the current strong element s
  E n_value;          // n(s)
  std::optional<std::size_t> candidate;  // index of t in the meet closure, for "descend"
};

template <class E, class M>
struct Certificate {
  E invariant_element;
  bool gamma_fixed = false;
  std::vector<M> measures;
  std::size_t orbit_size = 0;
  E strong_element;
  std::vector<std::size_t> argmax_indices;
  DownSet m_generators;
  std::optional<bool> mode_agreement;
  std::optional<std::vector<TraceStep<E>>> trace;
  std::optional<std::uint64_t> measure_bound;
  SolveMode mode = SolveMode::FullMeet;
};

template <CloseKnitInstance I>
using CertificateFor = Certificate<typename I::element_type, typename I::measure_type>;

inline std::optional<std::uint64_t> measure_bound(const std::vector<CountMeasure>& ms) {
  std::uint64_t b = 0;
  for (const auto& m : ms) b = std::max({b, m.forward, m.backward});
  return b;
}

template <class M>
std::optional<std::uint64_t> measure_bound(const std::vector<M>&) {
  return std::nullopt;
}

template <class E>
std::string describe(const E& e) {
  std::ostringstream os;
  os << e;
  return os.str();
}

// ---------------------------------------------------------------------------
// Core quantities

template <CloseKnitInstance I>
std::vector<IndexValue> deltas(const I& inst, const typename I::element_type& s) {
  std::vector<IndexValue> out;
  out.reserve(inst.family().size());
  for (std::size_t a = 0; a < inst.family().size(); ++a) out.push_back(inst.delta(s, a));
  return out;
}

/// m(s): downward closure of {delta(s,a) : a in A}.
template <CloseKnitInstance I>
DownSet compute_m(const I& inst, const typename I::element_type& s) {
  const auto ds = deltas(inst, s);
  return downset_of(ds);
}

template <CloseKnitInstance I>
typename I::element_type meet_of_family(const I& inst) {
  const auto& fam = inst.family();
  if (fam.empty()) throw ContractViolation("empty family");
  auto s = fam.front();
  for (std::size_t a = 1; a < fam.size(); ++a) s = inst.meet(s, fam[a]);
  return s;
}

namespace detail {

template <CloseKnitInstance I>
bool below_every_member(const I& inst, const typename I::element_type& s) {
  const auto& fam = inst.family();
  return std::all_of(fam.begin(), fam.end(), [&](const auto& f) { return inst.leq(s, f); });
}

/// Exhaustive meets over index subsets of size <= k, lowest subsets first.
template <CloseKnitInstance I>
std::optional<typename I::element_type> subset_meet_search(const I& inst, std::size_t k) {
  const std::size_t n = inst.family().size();
  std::vector<std::size_t> idx;
  for (std::size_t size = 1; size <= std::min(k, n); ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      auto s = inst.family()[idx[0]];
      for (std::size_t i = 1; i < size; ++i) s = inst.meet(s, inst.family()[idx[i]]);
      if (below_every_member(inst, s)) return s;
      // next combination
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// A strong element: a meet of family members whose m is the minimal one.
///
/// FullMeet returns the meet of the whole family. Greedy starts from f_0 and meets
/// with the lowest-indexed f_b that strictly shrinks m(s) or s itself, stopping when
/// s <= f_b for every b. If the step budget runs out it falls back to exhaustive
/// subset meets of bounded size.
template <CloseKnitInstance I>
typename I::element_type find_strong(const I& inst, StrongMode mode,
                                     const SearchLimits& limits = {}) {
  if (mode == StrongMode::FullMeet) return meet_of_family(inst);

  const auto& fam = inst.family();
  auto s = fam.front();
  auto ms = compute_m(inst, s);
  std::size_t steps = 0;
  while (true) {
    bool moved = false;
    for (std::size_t b = 0; b < fam.size(); ++b) {
      auto t = inst.meet(s, fam[b]);
      if (t == s) continue;
      auto mt = compute_m(inst, t);
      const bool shrinks_m = strictly_below(mt, ms);
      const bool shrinks_element = inst.leq(t, s);
      if (shrinks_m || shrinks_element) {
        if (steps++ >= limits.max_greedy_steps) {
          if (auto r = detail::subset_meet_search(inst, limits.max_subset_size)) return *r;
          throw StrongSearchExhausted("greedy strong search exhausted its budget and no meet of <= " +
                                      std::to_string(limits.max_subset_size) +
                                      " family members certifies minimality");
        }
        s = std::move(t);
        ms = std::move(mt);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (!detail::below_every_member(inst, s)) {
    throw InternalInvariantViolation("greedy strong search stopped above a family member");
  }
  return s;
}

/// A(s): indices a whose delta(s,a) is maximal in m(s).
template <CloseKnitInstance I>
std::vector<std::size_t> argmax_set(const I& inst, const typename I::element_type& s) {
  const auto ds = deltas(inst, s);
  const auto m = downset_of(ds);
  auto out = maximal_in(m, ds);
  if (out.empty()) throw InternalInvariantViolation("argmax set is empty");
  return out;
}

/// n(s) = meet of the increments s^a over a in A(s).
template <CloseKnitInstance I>
typename I::element_type n_of(const I& inst, const typename I::element_type& s) {
  const auto args = argmax_set(inst, s);
  auto n = inst.increment(s, args.front());
  for (std::size_t i = 1; i < args.size(); ++i) n = inst.meet(n, inst.increment(s, args[i]));
  return n;
}

/// All meets of non-empty finite subfamilies, in discovery order (family order first).
template <CloseKnitInstance I>
std::vector<typename I::element_type> meet_closure(const I& inst, std::size_t cap) {
  using E = typename I::element_type;
  std::vector<E> out;
  std::set<E> seen;
  for (const auto& f : inst.family()) {
    if (seen.insert(f).second) out.push_back(f);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.size() > cap) {
      throw StrongSearchExhausted("meet closure of the family exceeds " + std::to_string(cap));
    }
    for (const auto& f : inst.family()) {
      auto m = inst.meet(out[i], f);
      if (seen.insert(m).second) out.push_back(std::move(m));
    }
  }
  if (out.size() > cap) {
    throw StrongSearchExhausted("meet closure of the family exceeds " + std::to_string(cap));
  }
  return out;
}

template <class E>
struct GreatestN {
  E value;   // the greatest n(s)
  E strong;  // the strong s it was read from
  std::vector<TraceStep<E>> steps;
};

/// The greatest n(s) over strong s, by the descent of the fixed-point argument:
/// start at a strong s; while some strong t has n(t) not below n(s), replace s by
/// s ∧ t. n(s) strictly increases, so this terminates on finite data.
template <CloseKnitInstance I>
GreatestN<typename I::element_type> greatest_n(const I& inst, const SearchLimits& limits = {}) {
  using E = typename I::element_type;
  const auto candidates = meet_closure(inst, limits.max_strong_candidates);
  const auto m = compute_m(inst, find_strong(inst, StrongMode::Greedy, limits));

  std::vector<std::size_t> strong;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto mi = compute_m(inst, candidates[i]);
    if (!m.subset_of(mi)) {
      throw InternalInvariantViolation("m is not the minimum over meets of family members (delta "
                                       "is not monotone)");
    }
    if (mi == m) strong.push_back(i);
  }
  if (strong.empty()) throw InternalInvariantViolation("no strong element among family meets");

  std::vector<E> n_cache(candidates.size());
  std::vector<bool> have(candidates.size(), false);
  auto n_at = [&](std::size_t i) -> const E& {
    if (!have[i]) {
      n_cache[i] = n_of(inst, candidates[i]);
      have[i] = true;
    }
    return n_cache[i];
  };

  GreatestN<E> out{candidates[strong.front()], candidates[strong.front()], {}};
  E n_s = n_at(strong.front());
  out.steps.push_back({"start", out.strong, n_s, strong.front()});
  while (true) {
    std::optional<std::size_t> found;
    for (auto t : strong) {
      if (!inst.leq(n_at(t), n_s)) {
        found = t;
        break;
      }
    }
    if (!found) break;
    E next = inst.meet(out.strong, candidates[*found]);
    if (compute_m(inst, next) != m) {
      throw InternalInvariantViolation("meet of strong elements is not strong");
    }
    E n_next = n_of(inst, next);
    if (!(inst.leq(n_s, n_next) && n_s != n_next)) {
      throw InternalInvariantViolation("n(s) failed to increase along the descent");
    }
    out.strong = std::move(next);
    n_s = std::move(n_next);
    out.steps.push_back({"descend", out.strong, n_s, found});
  }
  out.value = n_s;
  out.steps.push_back({"result", out.strong, n_s, std::nullopt});
  return out;
}

template <CloseKnitInstance I>
bool is_gamma_fixed(const I& inst, const typename I::element_type& x) {
  for (std::size_t g = 0; g < inst.gamma_count(); ++g) {
    if (inst.act(g, x) != x) return false;
  }
  return true;
}

template <CloseKnitInstance I>
std::vector<typename I::measure_type> measures_of(const I& inst, const typename I::element_type& n) {
  std::vector<typename I::measure_type> out;
  out.reserve(inst.family().size());
  for (std::size_t a = 0; a < inst.family().size(); ++a) out.push_back(inst.measure(n, a));
  return out;
}

template <CloseKnitInstance I>
CertificateFor<I> solve(const I& inst, const SolveOptions& opts = {}) {
  using E = typename I::element_type;
  CertificateFor<I> cert;
  cert.mode = opts.mode;
  cert.orbit_size = inst.family().size();

  std::optional<E> full_n;
  std::optional<E> full_strong;
  if (opts.mode != SolveMode::Proof) {
    full_strong = find_strong(inst, StrongMode::FullMeet, opts.limits);
    full_n = n_of(inst, *full_strong);
  }
  std::optional<GreatestN<E>> proof;
  if (opts.mode != SolveMode::FullMeet) proof = greatest_n(inst, opts.limits);

  if (opts.mode == SolveMode::Proof) {
    cert.invariant_element = proof->value;
    cert.strong_element = proof->strong;
  } else {
    cert.invariant_element = *full_n;
    cert.strong_element = *full_strong;
  }
  if (opts.mode == SolveMode::Both) cert.mode_agreement = (*full_n == proof->value);
  if (opts.trace && proof) cert.trace = proof->steps;

  cert.gamma_fixed = is_gamma_fixed(inst, cert.invariant_element);
  cert.measures = measures_of(inst, cert.invariant_element);
  cert.measure_bound = measure_bound(cert.measures);
  cert.argmax_indices = argmax_set(inst, cert.strong_element);
  cert.m_generators = compute_m(inst, cert.strong_element);
  return cert;
}

/// Recomputes fixedness, measures and the sandwich meet(family) <= N <= join-span.
template <CloseKnitInstance I>
bool verify_certificate(const I& inst, const CertificateFor<I>& cert) {
  const auto& n = cert.invariant_element;
  if (!cert.gamma_fixed || !is_gamma_fixed(inst, n)) return false;
  if (cert.orbit_size != inst.family().size()) return false;
  if (cert.measures != measures_of(inst, n)) return false;
  if (cert.measure_bound != measure_bound(cert.measures)) return false;
  if (!inst.leq(meet_of_family(inst), n)) return false;
  if (!inst.in_join_span(n)) return false;
  if (cert.mode_agreement && !*cert.mode_agreement) return false;
  if (cert.m_generators != compute_m(inst, cert.strong_element)) return false;
  if (cert.argmax_indices != argmax_set(inst, cert.strong_element)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Condition checking

enum class Clause {
  Monotonicity,        // t <= s implies delta(t,a) <= delta(s,a)
  IncrementAbove,      // s <= s^a
  IncrementStability,  // t <= s and delta(t,a) = delta(s,a) imply t^a = s^a
  Equivariance,        // generators commute with the family, delta and increment
  LatticeLaw,          // meet is idempotent, commutative, associative
};

inline const char* to_string(Clause c) {
  switch (c) {
    case Clause::Monotonicity: return "monotonicity";
    case Clause::IncrementAbove: return "increment-above";
    case Clause::IncrementStability: return "increment-stability";
    case Clause::Equivariance: return "equivariance";
    case Clause::LatticeLaw: return "lattice-law";
  }
  return "?";
}

struct Violation {
  Clause clause;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::size_t elements_checked = 0;
  std::size_t pairs_checked = 0;
  std::vector<std::string> notes;
  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

inline std::vector<std::string> finite_scale_notes() {
  return {
      "compactness holds vacuously: the index grid is finite",
      "the bounded-chain condition holds trivially: every chain in a finite lattice is finite",
  };
}

/// Checks monotonicity of delta, s <= s^a, the increment stability clause and
/// equivariance on a set of elements. Violations are returned, never thrown.
template <CloseKnitInstance I>
ValidationReport check_conditions_on(const I& inst, std::vector<typename I::element_type> elems,
                                     std::size_t max_violations = 50) {
  using E = typename I::element_type;
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());

  ValidationReport report;
  report.notes = finite_scale_notes();
  report.elements_checked = elems.size();
  auto add = [&](Clause c, std::string detail) {
    if (report.violations.size() < max_violations) report.violations.push_back({c, std::move(detail)});
  };

  const std::size_t na = inst.family().size();
  std::vector<std::vector<IndexValue>> ds(elems.size());
  std::vector<std::vector<E>> incs(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) {
    ds[i] = deltas(inst, elems[i]);
    incs[i].reserve(na);
    for (std::size_t a = 0; a < na; ++a) {
      incs[i].push_back(inst.increment(elems[i], a));
      if (!inst.leq(elems[i], incs[i][a])) {
        add(Clause::IncrementAbove, describe(elems[i]) + " is not below its increment for a=" +
                                        std::to_string(a));
      }
    }
  }

  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      if (i == j || !inst.leq(elems[i], elems[j])) continue;
      ++report.pairs_checked;
      for (std::size_t a = 0; a < na; ++a) {
        if (!leq(ds[i][a], ds[j][a])) {
          add(Clause::Monotonicity, "t=" + describe(elems[i]) + " <= s=" + describe(elems[j]) +
                                        " but delta(t," + std::to_string(a) + ")=" +
                                        describe(ds[i][a]) + " > delta(s)=" + describe(ds[j][a]));
        }
        if (ds[i][a] == ds[j][a] && incs[i][a] != incs[j][a]) {
          add(Clause::IncrementStability,
              "t=" + describe(elems[i]) + " <= s=" + describe(elems[j]) + ", equal delta at a=" +
                  std::to_string(a) + ", but t^a=" + describe(incs[i][a]) +
                  " differs from s^a=" + describe(incs[j][a]));
        }
      }
    }
  }

  for (std::size_t g = 0; g < inst.gamma_count(); ++g) {
    for (std::size_t a = 0; a < na; ++a) {
      if (inst.act(g, inst.family()[a]) != inst.family()[inst.act_on_index(g, a)]) {
        add(Clause::Equivariance, "generator " + std::to_string(g) + " does not carry f_" +
                                      std::to_string(a) + " to f_{g.a}");
      }
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const E moved = inst.act(g, elems[i]);
      for (std::size_t a = 0; a < na; ++a) {
        const std::size_t ga = inst.act_on_index(g, a);
        if (inst.delta(moved, ga) != ds[i][a]) {
          add(Clause::Equivariance, "delta not invariant under generator " + std::to_string(g));
        }
        if (inst.increment(moved, ga) != inst.act(g, incs[i][a])) {
          add(Clause::Equivariance, "increment not equivariant under generator " +
                                        std::to_string(g));
        }
      }
    }
  }
  return report;
}

template <SampledInstance I>
ValidationReport validate_conditions(const I& inst, std::size_t samples, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  return check_conditions_on(inst, inst.sample_elements(samples, rng));
}

}  // namespace closeknit
