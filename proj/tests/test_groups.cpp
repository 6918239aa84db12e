#include <gtest/gtest.h>

#include <vector>

#include "closeknit/groups.hpp"
#include "closeknit/oracle.hpp"
#include "support/brute.hpp"
#include "support/catalog.hpp"

using namespace closeknit;

namespace {

class S3 : public ::testing::Test {
 protected:
  GroupPtr g = catalog::make(catalog::s3());
  Permutation t01 = from_cycles({{0, 1}}, 3);
  Permutation t02 = from_cycles({{0, 2}}, 3);
  Permutation t12 = from_cycles({{1, 2}}, 3);
  Permutation c012 = from_cycles({{0, 1, 2}}, 3);

  ElementIndex at(const Permutation& p) const { return *g->find(p); }
  Subgroup gen(std::vector<Permutation> ps) const { return generated_by(g, ps); }
};

brute::PermSet as_set(const Subgroup& s) {
  brute::PermSet out;
  for (auto m : s.members()) out.insert(s.ambient()->element(m));
  return out;
}

}  // namespace

TEST(Catalog, OrdersMatchTheLabels) {
  for (const auto& d : catalog::small_groups()) {
    EXPECT_EQ(catalog::make(d)->order(), d.order) << d.name;
    EXPECT_EQ(brute::generate(d.degree, d.gens).size(), d.order) << d.name;
  }
}

TEST_F(S3, ClosureExamples) {
  EXPECT_EQ(closure(g, {}).order(), 1u);
  const auto h = closure(g, {at(t01)});
  EXPECT_EQ(as_set(h), (brute::PermSet{identity_permutation(3), t01}));
  EXPECT_EQ(closure(g, {at(t01), at(t02)}).order(), 6u);
}

TEST_F(S3, IndexExamples) {
  const auto whole = Subgroup::whole(g);
  const auto h = gen({t01});
  EXPECT_EQ(index_of(h, whole), 1u);
  EXPECT_EQ(index_of(whole, h), 3u);
  EXPECT_EQ(index_of(h, Subgroup::trivial(g)), 2u);
}

TEST_F(S3, ProductSetExample) {
  const auto s = gen({t01}), f = gen({t02});
  const auto prod = product_set(s, f);
  EXPECT_EQ(prod.size(), 4u);
  brute::PermSet got;
  for (auto x : prod) got.insert(g->element(x));
  EXPECT_EQ(got, brute::product(as_set(s), as_set(f)));
  EXPECT_EQ(got, (brute::PermSet{identity_permutation(3), t02, t01, compose(t01, t02)}));
  std::vector<ElementIndex> fm(f.members());
  EXPECT_EQ(product_set(Subgroup::trivial(g), f), fm);
  EXPECT_EQ(product_set(Subgroup::whole(g), f), Subgroup::whole(g).members());
}

TEST_F(S3, IncrementExamples) {
  const auto s = gen({t01}), f = gen({t02});
  EXPECT_EQ(increment_group(s, f), s);
  EXPECT_EQ(as_set(increment_group(s, f)), brute::increment(as_set(s), as_set(f)));
  EXPECT_EQ(increment_group(f, f), f);
  EXPECT_EQ(increment_group(Subgroup::trivial(g), f), f);
}

TEST_F(S3, ConjugationExamples) {
  const auto s = gen({t01});
  EXPECT_EQ(conjugate_action(identity_permutation(3), s), s);
  EXPECT_EQ(conjugate_action(c012, s), gen({t12}));
  EXPECT_THROW(conjugate_action(from_cycles({{0, 1}}, 4), s), Error);
}

TEST(Conjugation, CentralElementFixesEverySubgroup) {
  const auto g = catalog::make(catalog::d4());
  const auto z = from_cycles({{0, 2}, {1, 3}}, 4);  // r^2 is central in D4
  for (const auto& h : all_subgroups(g)) EXPECT_EQ(conjugate_action(z, h), h);
}

TEST(Conjugation, NonNormalizingPermutationIsRejected) {
  const auto g = PermGroup::make(4, {from_cycles({{0, 1}}, 4)});
  EXPECT_THROW(conjugate_action(from_cycles({{1, 2}}, 4), Subgroup::whole(g)), InvalidAction);
}

TEST(Increment, BelowFamilyMemberGivesTheMember) {
  for (const auto& def : {catalog::s3(), catalog::s4()}) {
    const auto g = catalog::make(def);
    const auto subs = all_subgroups(g);
    for (const auto& f : subs)
      for (const auto& s : subs) {
        if (s.subgroup_of(f)) {
          EXPECT_EQ(increment_group(s, f), f);
        }
      }
  }
}

TEST(Increment, AgreesWithDefinitionOnSmallGroups) {
  for (const auto& def : {catalog::s3(), catalog::d4(), catalog::a4(), catalog::quaternion()}) {
    const auto g = catalog::make(def);
    const auto subs = all_subgroups(g);
    for (const auto& s : subs) {
      for (const auto& f : subs) {
        const auto inc = increment_group(s, f);
        EXPECT_EQ(inc, increment_group_full(s, f));
        EXPECT_EQ(as_set(inc), brute::increment(as_set(s), as_set(f))) << def.name;
        EXPECT_TRUE(s.subgroup_of(inc));
      }
    }
  }
}

TEST(Index, LagrangeAndBruteForce) {
  for (const auto& def : {catalog::s4(), catalog::dihedral(6), catalog::sl23()}) {
    const auto g = catalog::make(def);
    const auto subs = all_subgroups(g);
    for (const auto& s : subs) {
      EXPECT_EQ(def.order % s.order(), 0u);
      for (const auto& t : subs) {
        EXPECT_EQ(index_of(s, t), brute::index(as_set(s), as_set(t)));
        EXPECT_EQ(index_of(s, t) * intersect(s, t).order(), s.order());
      }
    }
  }
}

TEST(Lattice, MeetAndJoinMatchBruteForce) {
  const auto def = catalog::s4();
  const auto g = catalog::make(def);
  const auto subs = all_subgroups(g);
  for (const auto& s : subs) {
    for (const auto& t : subs) {
      EXPECT_EQ(as_set(intersect(s, t)), brute::meet(as_set(s), as_set(t)));
      const auto js = as_set(s), jt = as_set(t);
      std::vector<brute::Perm> gens(js.begin(), js.end());
      gens.insert(gens.end(), jt.begin(), jt.end());
      EXPECT_EQ(as_set(join(s, t)), brute::generate(4, gens));
    }
  }
}

TEST(Normality, MatchesBruteForce) {
  const auto def = catalog::s4();
  const auto g = catalog::make(def);
  const auto whole = brute::generate(4, def.gens);
  std::size_t normal = 0;
  for (const auto& h : all_subgroups(g)) {
    EXPECT_EQ(is_normal(h), brute::is_normal_in(as_set(h), whole));
    normal += is_normal(h);
  }
  EXPECT_EQ(normal, 4u);  // 1, V4, A4, S4
}

TEST(GeneratingSet, GeneratesTheSubgroup) {
  const auto g = catalog::make(catalog::s4());
  for (const auto& h : all_subgroups(g)) {
    const auto gens = generating_set(h);
    EXPECT_EQ(closure(g, gens), h);
  }
}

TEST(PermGroup, ElementCapIsEnforced) {
  EXPECT_THROW(PermGroup(4, catalog::s4().gens, 10), ElementCapExceeded);
}

TEST(PermGroup, RejectsMalformedGenerators) {
  EXPECT_THROW(PermGroup(3, {Permutation{0, 0, 1}}), MalformedInput);
}

TEST(PermGroup, LargeGroupWithoutTable) {
  // 5040 elements is past the table threshold, so mul goes through the map.
  const auto g = PermGroup::make(7, {from_cycles({{0, 1}}, 7), catalog::rotation(7)});
  EXPECT_EQ(g->order(), 5040u);
  const auto a = *g->find(from_cycles({{0, 1, 2}}, 7));
  const auto b = *g->find(from_cycles({{3, 4}}, 7));
  EXPECT_EQ(g->element(g->mul(a, b)), compose(g->element(a), g->element(b)));
  EXPECT_EQ(g->mul(a, g->inv(a)), 0u);
}

TEST(GroupInstance, RejectsGammaOutsideNormalizer) {
  const auto g = PermGroup::make(4, {from_cycles({{0, 1}}, 4)});
  const std::vector<Subgroup> seeds{Subgroup::whole(g)};
  EXPECT_THROW(GroupInstance(g, seeds, {from_cycles({{1, 2}}, 4)}), InvalidAction);
}
