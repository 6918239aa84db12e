#pragma once

// Galois-group side of the field statement: given a finite group G standing in
// for Aut(K), a family of subgroups H_F = Gal(K/F∩K) and automorphisms acting by
// conjugation, find an invariant subgroup H commensurable with every H_F and
// describe N = Fix(H) through subgroup indices. No field arithmetic is done.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "closeknit/engine.hpp"
#include "closeknit/groups.hpp"

namespace closeknit {

struct GaloisInstance {
  GroupPtr group;
  std::vector<Subgroup> seeds;
  std::vector<Permutation> gamma;
  std::size_t max_orbit = 10000;
};

struct MemberIndices {
  std::size_t family_index = 0;
  std::uint64_t member_over_meet = 0;  // [H_F : H_F ∩ H]
  std::uint64_t h_over_meet = 0;       // [H : H_F ∩ H]
};

struct FixedFieldDescriptor {
  std::uint64_t group_order = 0;
  std::uint64_t h_order = 0;
  std::uint64_t index_in_group = 0;  // [G : H] = [N : Fix(G)]
  bool normal_in_group = false;
  bool closed = true;  // every subgroup of a finite group is closed
  std::uint64_t family_max_index = 0;  // max [H_F : H_F ∩ H_F'] over the family
  std::vector<MemberIndices> members;
  std::vector<std::string> relations;
};

struct GaloisResult {
  Subgroup h;
  FixedFieldDescriptor descriptor;
  CertificateFor<GroupInstance> certificate;
  GroupInstance instance;
};

inline GaloisResult solve_galois(const GaloisInstance& gi, const SolveOptions& opts = {}) {
  GroupInstance inst(gi.group, gi.seeds, gi.gamma, gi.max_orbit);
  auto cert = solve(inst, opts);
  const auto& h = cert.invariant_element;

  FixedFieldDescriptor d;
  d.group_order = gi.group->order();
  d.h_order = h.order();
  d.index_in_group = gi.group->order() / h.order();
  d.normal_in_group = is_normal(h);
  for (const auto& f : inst.family())
    for (const auto& f2 : inst.family()) d.family_max_index = std::max(d.family_max_index, index_of(f, f2));
  for (std::size_t a = 0; a < inst.family().size(); ++a) {
    const auto& f = inst.family()[a];
    d.members.push_back({a, index_of(f, h), index_of(h, f)});
  }
  d.relations = {
      "N = Fix(H)",
      "[N : Fix(G)] = [G : H] = " + std::to_string(d.index_in_group),
      "for each F: [Fix(H_F ∩ H) : Fix(H_F)] = [H_F : H_F ∩ H] and [Fix(H_F ∩ H) : N] = [H : H_F ∩ H]",
      "H is closed: at finite scale the topology of pointwise convergence is discrete",
  };
  if (d.normal_in_group) d.relations.push_back("H is normal in G, so N/Fix(G) is Galois");
  return {h, std::move(d), std::move(cert), std::move(inst)};
}

}  // namespace closeknit
