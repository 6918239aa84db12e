#pragma once

// Finite permutation groups and the lattice of subgroups of an ambient group.
//
// Elements of the ambient group are enumerated once (identity at index 0) and
// subgroups are stored as sorted index sets. Products follow permutation
// composition: (p * q)(x) = p(q(x)). Conjugation inside increments uses
// X^s = s^-1 X s.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "closeknit/engine.hpp"
#include "closeknit/errors.hpp"
#include "closeknit/index.hpp"
#include "closeknit/permutation.hpp"

namespace closeknit {

using ElementIndex = std::uint32_t;

class PermGroup {
 public:
  static constexpr std::size_t kDefaultMaxElements = 100000;
  static constexpr std::size_t kTableThreshold = 1024;

  PermGroup(std::size_t degree, std::vector<Permutation> generators,
            std::size_t max_elements = kDefaultMaxElements)
      : degree_(degree), generators_(std::move(generators)) {
    for (const auto& g : generators_) require_permutation(g, degree_);
    add(identity_permutation(degree_));
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      for (const auto& g : generators_) {
        auto p = compose(elements_[i], g);
        if (!index_.contains(p)) {
          if (elements_.size() >= max_elements) {
            throw ElementCapExceeded("group exceeds element cap " + std::to_string(max_elements));
          }
          add(std::move(p));
        }
      }
    }
    inverse_.resize(elements_.size());
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      inverse_[i] = index_.at(closeknit::inverse(elements_[i]));
    }
    if (elements_.size() <= kTableThreshold) {
      const std::size_t n = elements_.size();
      table_.resize(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          table_[i * n + j] = index_.at(compose(elements_[i], elements_[j]));
        }
      }
    }
  }

  static std::shared_ptr<const PermGroup> make(std::size_t degree, std::vector<Permutation> gens,
                                               std::size_t max_elements = kDefaultMaxElements) {
    return std::make_shared<const PermGroup>(degree, std::move(gens), max_elements);
  }

  [[nodiscard]] std::size_t degree() const noexcept { return degree_; }
  [[nodiscard]] std::size_t order() const noexcept { return elements_.size(); }
  [[nodiscard]] const std::vector<Permutation>& generators() const noexcept { return generators_; }
  [[nodiscard]] const Permutation& element(ElementIndex i) const { return elements_.at(i); }

  [[nodiscard]] std::optional<ElementIndex> find(const Permutation& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] bool contains(const Permutation& p) const { return index_.contains(p); }

  [[nodiscard]] ElementIndex mul(ElementIndex a, ElementIndex b) const {
    if (!table_.empty()) return table_[static_cast<std::size_t>(a) * elements_.size() + b];
    return index_.at(compose(elements_[a], elements_[b]));
  }

  [[nodiscard]] ElementIndex inv(ElementIndex a) const { return inverse_[a]; }

  /// s^-1 x s
  [[nodiscard]] ElementIndex conj(ElementIndex x, ElementIndex s) const {
    return mul(mul(inv(s), x), s);
  }

  /// Does the permutation normalize this group (g G g^-1 = G)?
  [[nodiscard]] bool normalized_by(const Permutation& g) const {
    if (g.size() != degree_) return false;
    const auto gi = closeknit::inverse(g);
    return std::all_of(generators_.begin(), generators_.end(), [&](const Permutation& x) {
      return contains(compose(compose(g, x), gi));
    });
  }

 private:
  void add(Permutation p) {
    index_.emplace(p, static_cast<ElementIndex>(elements_.size()));
    elements_.push_back(std::move(p));
  }

  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
  std::map<Permutation, ElementIndex> index_;
  std::vector<ElementIndex> inverse_;
  std::vector<ElementIndex> table_;
};

using GroupPtr = std::shared_ptr<const PermGroup>;

class Subgroup {
 public:
  Subgroup() = default;

  /// Wraps an element set, checking that it is a subgroup of the ambient group.
  static Subgroup from_members(GroupPtr ambient, std::vector<ElementIndex> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Subgroup s(std::move(ambient), std::move(members));
    if (!s.is_closed()) throw ContractViolation("element set is not a subgroup");
    return s;
  }

  static Subgroup trivial(GroupPtr ambient) { return Subgroup(std::move(ambient), {0}); }

  static Subgroup whole(GroupPtr ambient) {
    std::vector<ElementIndex> all(ambient->order());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<ElementIndex>(i);
    return Subgroup(std::move(ambient), std::move(all));
  }

  [[nodiscard]] const GroupPtr& ambient() const noexcept { return ambient_; }
  [[nodiscard]] const std::vector<ElementIndex>& members() const noexcept { return members_; }
  [[nodiscard]] std::size_t order() const noexcept { return members_.size(); }
  [[nodiscard]] bool contains(ElementIndex x) const {
    return std::binary_search(members_.begin(), members_.end(), x);
  }
  [[nodiscard]] bool subgroup_of(const Subgroup& o) const {
    return std::includes(o.members_.begin(), o.members_.end(), members_.begin(), members_.end());
  }

  friend bool operator==(const Subgroup& a, const Subgroup& b) {
    return a.ambient_ == b.ambient_ && a.members_ == b.members_;
  }
  friend std::strong_ordering operator<=>(const Subgroup& a, const Subgroup& b) {
    if (auto c = std::compare_three_way{}(a.ambient_.get(), b.ambient_.get()); c != 0) return c;
    return a.members_ <=> b.members_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Subgroup& s) {
    os << "<order " << s.order() << ":";
    for (auto m : s.members_) os << ' ' << m;
    return os << '>';
  }

 private:
  friend Subgroup closure(const GroupPtr&, std::span<const ElementIndex>);
  friend Subgroup intersect(const Subgroup&, const Subgroup&);
  friend Subgroup increment_group(const Subgroup&, const Subgroup&);
  friend Subgroup increment_group_full(const Subgroup&, const Subgroup&);
  friend Subgroup conjugate_action(const Permutation&, const Subgroup&);

  Subgroup(GroupPtr ambient, std::vector<ElementIndex> members)
      : ambient_(std::move(ambient)), members_(std::move(members)) {}

  [[nodiscard]] bool is_closed() const {
    if (!contains(0)) return false;
    for (auto a : members_) {
      if (!contains(ambient_->inv(a))) return false;
      for (auto b : members_) {
        if (!contains(ambient_->mul(a, b))) return false;
      }
    }
    return true;
  }

  GroupPtr ambient_;
  std::vector<ElementIndex> members_;
};

inline void require_same_ambient(const Subgroup& s, const Subgroup& t) {
  if (s.ambient() != t.ambient()) throw StructuralError("subgroups of different ambient groups");
}

/// Smallest subgroup containing the given elements.
inline Subgroup closure(const GroupPtr& ambient, std::span<const ElementIndex> gens) {
  for (auto g : gens) {
    if (g >= ambient->order()) throw ContractViolation("element index out of range");
  }
  std::vector<bool> in(ambient->order(), false);
  std::vector<ElementIndex> members{0};
  in[0] = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (auto g : gens) {
      auto p = ambient->mul(members[i], g);
      if (!in[p]) {
        in[p] = true;
        members.push_back(p);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return Subgroup(ambient, std::move(members));
}

inline Subgroup closure(const GroupPtr& ambient, std::initializer_list<ElementIndex> gens) {
  return closure(ambient, std::span<const ElementIndex>(gens.begin(), gens.size()));
}

/// Subgroup generated by permutations given as image arrays.
inline Subgroup generated_by(const GroupPtr& ambient, const std::vector<Permutation>& perms) {
  std::vector<ElementIndex> gens;
  for (const auto& p : perms) {
    auto i = ambient->find(p);
    if (!i) throw ContractViolation("generator is not an element of the ambient group");
    gens.push_back(*i);
  }
  return closure(ambient, gens);
}

inline Subgroup intersect(const Subgroup& s, const Subgroup& t) {
  require_same_ambient(s, t);
  std::vector<ElementIndex> out;
  std::set_intersection(s.members_.begin(), s.members_.end(), t.members_.begin(), t.members_.end(),
                        std::back_inserter(out));
  return Subgroup(s.ambient_, std::move(out));
}

inline Subgroup join(const Subgroup& s, const Subgroup& t) {
  require_same_ambient(s, t);
  std::vector<ElementIndex> gens(s.members());
  gens.insert(gens.end(), t.members().begin(), t.members().end());
  return closure(s.ambient(), gens);
}

/// [S : S∩T], counted as the number of left cosets x(S∩T) inside S.
inline std::uint64_t index_of(const Subgroup& s, const Subgroup& t) {
  require_same_ambient(s, t);
  const auto& g = *s.ambient();
  const auto inter = intersect(s, t);
  std::vector<bool> covered(g.order(), false);
  std::uint64_t cosets = 0;
  for (auto x : s.members()) {
    if (covered[x]) continue;
    ++cosets;
    for (auto h : inter.members()) covered[g.mul(x, h)] = true;
  }
  return cosets;
}

/// {s f : s in S, f in F}, sorted; in general not a subgroup.
inline std::vector<ElementIndex> product_set(const Subgroup& s, const Subgroup& f) {
  require_same_ambient(s, f);
  const auto& g = *s.ambient();
  std::vector<bool> in(g.order(), false);
  for (auto x : s.members()) {
    for (auto y : f.members()) in[g.mul(x, y)] = true;
  }
  std::vector<ElementIndex> out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i]) out.push_back(static_cast<ElementIndex>(i));
  }
  return out;
}

namespace detail {

inline Subgroup intersect_conjugates(const Subgroup& s, const Subgroup& f,
                                     std::span<const ElementIndex> conjugators) {
  const auto& g = *s.ambient();
  const auto sf = product_set(s, f);
  std::vector<int> hits(g.order(), 0);
  for (auto c : conjugators) {
    for (auto x : sf) ++hits[g.conj(x, c)];
  }
  std::vector<ElementIndex> out;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] == static_cast<int>(conjugators.size())) out.push_back(static_cast<ElementIndex>(i));
  }
  return Subgroup::from_members(s.ambient(), std::move(out));
}

}  // namespace detail

/// S^F = ⋂_{s in S} s^-1 (SF) s, intersected only over representatives of the
/// right cosets (S∩F)s, since s^-1 (SF) s = SF s depends only on that coset.
inline Subgroup increment_group(const Subgroup& s, const Subgroup& f) {
  require_same_ambient(s, f);
  const auto& g = *s.ambient();
  const auto inter = intersect(s, f);
  std::vector<bool> covered(g.order(), false);
  std::vector<ElementIndex> reps;
  for (auto x : s.members()) {
    if (covered[x]) continue;
    reps.push_back(x);
    for (auto h : inter.members()) covered[g.mul(h, x)] = true;
  }
  Subgroup out;
  try {
    out = detail::intersect_conjugates(s, f, reps);
  } catch (const ContractViolation&) {
    throw InternalInvariantViolation("group increment is not a subgroup");
  }
  if (!s.subgroup_of(out)) throw InternalInvariantViolation("group increment does not contain S");
  return out;
}

/// Unoptimized ⋂_{s in S} s^-1 (SF) s, used to cross-check increment_group.
inline Subgroup increment_group_full(const Subgroup& s, const Subgroup& f) {
  require_same_ambient(s, f);
  return detail::intersect_conjugates(s, f, s.members());
}

/// γ S γ^-1 for a permutation γ of the same degree normalizing the ambient group.
inline Subgroup conjugate_action(const Permutation& gamma, const Subgroup& s) {
  const auto& g = *s.ambient();
  if (!g.normalized_by(gamma)) throw InvalidAction("permutation does not normalize the ambient group");
  const auto gi = closeknit::inverse(gamma);
  std::vector<ElementIndex> out;
  out.reserve(s.order());
  for (auto x : s.members()) out.push_back(*g.find(compose(compose(gamma, g.element(x)), gi)));
  std::sort(out.begin(), out.end());
  return Subgroup(s.ambient_, std::move(out));
}

inline bool is_normal(const Subgroup& s) {
  const auto& g = *s.ambient();
  return std::all_of(g.generators().begin(), g.generators().end(),
                     [&](const Permutation& x) { return conjugate_action(x, s) == s; });
}

/// A small generating set, chosen greedily in element order.
inline std::vector<ElementIndex> generating_set(const Subgroup& s) {
  std::vector<ElementIndex> gens;
  Subgroup cur = Subgroup::trivial(s.ambient());
  for (auto x : s.members()) {
    if (cur.contains(x)) continue;
    gens.push_back(x);
    cur = closure(s.ambient(), gens);
    if (cur.order() == s.order()) break;
  }
  return gens;
}

class GroupInstance {
 public:
  using element_type = Subgroup;
  using measure_type = CountMeasure;

  GroupInstance(GroupPtr ambient, std::span<const Subgroup> seeds, std::vector<Permutation> gamma,
                std::size_t max_orbit = 10000)
      : ambient_(std::move(ambient)), gamma_(std::move(gamma)) {
    for (const auto& s : seeds) {
      if (s.ambient() != ambient_) throw StructuralError("seed is not a subgroup of the ambient group");
    }
    for (const auto& g : gamma_) {
      require_permutation(g, ambient_->degree());
      if (!ambient_->normalized_by(g)) {
        throw InvalidAction("gamma generator does not normalize the ambient group");
      }
    }
    auto closed = orbit_closure<Subgroup>(
        seeds, gamma_.size(),
        [this](std::size_t g, const Subgroup& s) { return conjugate_action(gamma_[g], s); },
        max_orbit);
    family_ = std::move(closed.members);
    action_ = std::move(closed.action);
    span_ = family_.front();
    for (const auto& f : family_) span_ = join(span_, f);
  }

  [[nodiscard]] const GroupPtr& ambient() const noexcept { return ambient_; }
  [[nodiscard]] const std::vector<Subgroup>& family() const noexcept { return family_; }
  [[nodiscard]] const std::vector<Permutation>& gamma() const noexcept { return gamma_; }

  [[nodiscard]] Subgroup meet(const Subgroup& a, const Subgroup& b) const { return intersect(a, b); }
  [[nodiscard]] bool leq(const Subgroup& a, const Subgroup& b) const { return a.subgroup_of(b); }

  /// [S : S∩f_a] as a single natural level.
  [[nodiscard]] IndexValue delta(const Subgroup& s, std::size_t a) const {
    return IndexValue::natural({static_cast<std::int64_t>(index_of(s, family_.at(a)))});
  }
  [[nodiscard]] Subgroup increment(const Subgroup& s, std::size_t a) const {
    return increment_group(s, family_.at(a));
  }

  [[nodiscard]] std::size_t gamma_count() const noexcept { return gamma_.size(); }
  [[nodiscard]] Subgroup act(std::size_t g, const Subgroup& s) const {
    return conjugate_action(gamma_.at(g), s);
  }
  [[nodiscard]] std::size_t act_on_index(std::size_t g, std::size_t a) const { return action_[g][a]; }

  [[nodiscard]] CountMeasure measure(const Subgroup& s, std::size_t a) const {
    return {index_of(s, family_.at(a)), index_of(family_.at(a), s)};
  }

  [[nodiscard]] const Subgroup& join_span() const noexcept { return span_; }
  [[nodiscard]] bool in_join_span(const Subgroup& s) const { return s.subgroup_of(span_); }

  /// Random meets of family members and subgroups generated by a few of their elements.
  [[nodiscard]] std::vector<Subgroup> sample_elements(std::size_t count, std::mt19937_64& rng) const {
    std::vector<Subgroup> out;
    std::uniform_int_distribution<std::size_t> pick(0, family_.size() - 1);
    while (out.size() < count) {
      auto s = family_[pick(rng)];
      const std::size_t extra = pick(rng) % 3;
      for (std::size_t i = 0; i < extra; ++i) s = intersect(s, family_[pick(rng)]);
      out.push_back(s);
      if (out.size() == count) break;
      std::uniform_int_distribution<std::size_t> elem(0, s.order() - 1);
      std::vector<ElementIndex> gens;
      const std::size_t k = pick(rng) % 3;
      for (std::size_t i = 0; i < k; ++i) gens.push_back(s.members()[elem(rng)]);
      out.push_back(closure(ambient_, gens));
    }
    return out;
  }

 private:
  GroupPtr ambient_;
  std::vector<Permutation> gamma_;
  std::vector<Subgroup> family_;
  std::vector<std::vector<std::size_t>> action_;
  Subgroup span_;
};

}  // namespace closeknit
