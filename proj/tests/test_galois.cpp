#include <gtest/gtest.h>

#include <vector>

#include "closeknit/galois.hpp"
#include "closeknit/oracle.hpp"
#include "support/brute.hpp"
#include "support/catalog.hpp"

using namespace closeknit;

namespace {

GaloisInstance inner(const catalog::GroupDef& def, std::vector<Permutation> seed_gens) {
  const auto g = catalog::make(def);
  return {g, {generated_by(g, seed_gens)}, def.gens, 10000};
}

}  // namespace

TEST(SolveGalois, S3TranspositionGivesTrivialNormalSubgroup) {
  const auto r = solve_galois(inner(catalog::s3(), {from_cycles({{0, 1}}, 3)}));
  EXPECT_EQ(r.h.order(), 1u);
  EXPECT_TRUE(r.descriptor.normal_in_group);
  EXPECT_EQ(r.descriptor.index_in_group, 6u);
  // Oracle: the trivial group is the only normal subgroup inside every conjugate of <(01)>.
  std::size_t candidates = 0;
  for (const auto& h : all_subgroups(r.h.ambient())) {
    bool below_all = true;
    for (const auto& f : r.instance.family()) below_all = below_all && h.subgroup_of(f);
    candidates += below_all && is_normal(h);
  }
  EXPECT_EQ(candidates, 1u);
}

TEST(SolveGalois, TrivialGammaReturnsTheSeed) {
  const auto g = catalog::make(catalog::s4());
  const auto seed = generated_by(g, {from_cycles({{0, 1, 2, 3}}, 4)});
  const auto r = solve_galois({g, {seed}, {}, 10000});
  EXPECT_EQ(r.h, seed);
  EXPECT_EQ(r.descriptor.family_max_index, 1u);
}

TEST(SolveGalois, S4SylowGivesKleinFour) {
  const auto def = catalog::s4();
  // D4 on the square 0-1-2-3 is a Sylow 2-subgroup.
  const auto r = solve_galois(inner(def, {catalog::rotation(4), from_cycles({{0, 2}}, 4)}));
  ASSERT_EQ(r.instance.family().size(), 3u);
  EXPECT_EQ(r.h.order(), 4u);
  EXPECT_TRUE(r.descriptor.normal_in_group);

  // Oracle: intersection of the three Sylow 2-subgroups, by plain set algebra.
  brute::PermSet common = brute::generate(4, def.gens);
  for (const auto& f : r.instance.family()) {
    brute::PermSet fs;
    for (auto m : f.members()) fs.insert(f.ambient()->element(m));
    common = brute::meet(common, fs);
  }
  brute::PermSet hs;
  for (auto m : r.h.members()) hs.insert(r.h.ambient()->element(m));
  EXPECT_EQ(hs, common);
  EXPECT_EQ(hs, brute::generate(4, {from_cycles({{0, 1}, {2, 3}}, 4), from_cycles({{0, 2}, {1, 3}}, 4)}));

  for (const auto& m : r.descriptor.members) {
    EXPECT_EQ(m.member_over_meet, 2u);  // [D4 : V4]
    EXPECT_EQ(m.h_over_meet, 1u);       // V4 lies inside every Sylow 2-subgroup
  }
  EXPECT_TRUE(verify_certificate(r.instance, r.certificate));
}

TEST(SolveGalois, InnerGammaOutputsAreNormal) {
  for (const auto& def : {catalog::s3(), catalog::d4(), catalog::a4(), catalog::s4()}) {
    const auto g = catalog::make(def);
    for (const auto& seed : all_subgroups(g)) {
      const auto r = solve_galois({g, {seed}, def.gens, 10000});
      EXPECT_TRUE(r.descriptor.normal_in_group) << def.name;
    }
  }
}
