#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "closeknit/abstract.hpp"
#include "closeknit/engine.hpp"
#include "closeknit/oracle.hpp"
#include "closeknit/sets.hpp"

using namespace closeknit;

namespace {

IndexValue nat(std::int64_t v) { return IndexValue::natural({v}); }

// Diamond 0 < 1,2 < 3.
const std::vector<std::vector<std::size_t>> kDiamondMeet{{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 2, 2}, {0, 1, 2, 3}};

AbstractDescription chain(std::size_t bottom_increment) {
  AbstractDescription d;
  d.size = 2;
  d.meet = {{0, 0}, {0, 1}};
  d.family = {1};
  d.delta = {{nat(1)}, {nat(1)}};
  d.increment = {{bottom_increment}, {1}};
  return d;
}

AbstractDescription swapped_diamond() {
  AbstractDescription d;
  d.size = 4;
  d.meet = kDiamondMeet;
  d.family = {1, 2};
  const std::size_t join[4][4] = {{0, 1, 2, 3}, {1, 1, 3, 3}, {2, 3, 2, 3}, {3, 3, 3, 3}};
  for (std::size_t s = 0; s < 4; ++s) {
    d.delta.push_back({nat(kDiamondMeet[s][1] == s ? 0 : 1), nat(kDiamondMeet[s][2] == s ? 0 : 1)});
    d.increment.push_back({join[s][1], join[s][2]});
  }
  d.gamma = {{0, 2, 1, 3}};
  return d;
}

// Two strong elements with different n values; the larger one is the top.
AbstractDescription two_strong() {
  AbstractDescription d;
  d.size = 4;
  d.meet = kDiamondMeet;
  d.family = {1, 2};
  d.delta = {{nat(1), nat(0)}, {nat(1), nat(1)}, {nat(1), nat(0)}, {nat(1), nat(2)}};
  d.increment = {{3, 2}, {3, 1}, {3, 2}, {3, 3}};
  return d;
}

bool below(const AbstractDescription& d, std::size_t x, std::size_t y) { return d.meet[x][y] == x; }

// Greatest n(s) over strong s, read straight off the tables. Only for
// single-coordinate natural levels, where m(s) is fixed by the largest delta.
std::size_t naive_greatest_n(const AbstractDescription& d) {
  const std::size_t na = d.family.size();
  std::set<std::size_t> meets;
  for (std::uint32_t mask = 1; mask < (1u << na); ++mask) {
    std::size_t s = d.size;
    for (std::size_t a = 0; a < na; ++a)
      if (mask & (1u << a)) s = s == d.size ? d.family[a] : d.meet[s][d.family[a]];
    meets.insert(s);
  }
  auto top_delta = [&](std::size_t s) {
    std::int64_t best = 0;
    for (std::size_t a = 0; a < na; ++a) best = std::max(best, d.delta[s][a].count(0));
    return best;
  };
  std::int64_t m = top_delta(*meets.begin());
  for (auto s : meets) m = std::min(m, top_delta(s));

  std::vector<std::size_t> ns;
  for (auto s : meets) {
    if (top_delta(s) != m) continue;
    std::size_t n = d.size;
    for (std::size_t a = 0; a < na; ++a)
      if (d.delta[s][a].count(0) == m) n = n == d.size ? d.increment[s][a] : d.meet[n][d.increment[s][a]];
    ns.push_back(n);
  }
  std::size_t best = ns.front();
  for (auto n : ns)
    if (below(d, best, n)) best = n;
  for (auto n : ns) EXPECT_TRUE(below(d, n, best)) << "no greatest n value";
  return best;
}

SolveOptions both() {
  SolveOptions o;
  o.mode = SolveMode::Both;
  return o;
}

}  // namespace

TEST(LoadAbstract, ChainSolvesToTop) {
  const auto inst = load_abstract(chain(1));
  const auto cert = solve(inst, both());
  EXPECT_EQ(cert.invariant_element, LatticePoint{1});
  // Both lattice points are fixed; the output is the top.
  EXPECT_EQ(feasible_set(inst).size(), 2u);
  EXPECT_TRUE(verify_certificate(inst, cert));
}

TEST(LoadAbstract, BrokenIncrementIsReported) {
  EXPECT_THROW(load_abstract(chain(0)), IncrementViolation);
  const auto vs = validate_abstract(chain(0));
  ASSERT_FALSE(vs.empty());
  EXPECT_EQ(vs.front().clause, AbstractClause::Increment);
  EXPECT_STREQ(to_string(vs.front().clause), "IncrementViolation");
}

TEST(LoadAbstract, SwappedDiamondGivesAFixedPoint) {
  const auto inst = load_abstract(swapped_diamond());
  const auto cert = solve(inst, both());
  std::vector<LatticePoint> fixed;
  for (std::size_t x = 0; x < 4; ++x)
    if (swapped_diamond().gamma[0][x] == x) fixed.push_back({x});
  EXPECT_EQ(fixed, (std::vector<LatticePoint>{{0}, {3}}));
  EXPECT_NE(std::find(fixed.begin(), fixed.end(), cert.invariant_element), fixed.end());
  EXPECT_EQ(cert.invariant_element, LatticePoint{0});
  EXPECT_EQ(cert.mode_agreement, std::optional<bool>(true));
}

TEST(GreatestN, PicksTheLargerOfTwoNValues) {
  const auto d = two_strong();
  const auto inst = load_abstract(d);
  EXPECT_EQ(n_of(inst, LatticePoint{1}), LatticePoint{1});
  EXPECT_EQ(n_of(inst, LatticePoint{2}), LatticePoint{3});
  const auto g = greatest_n(inst);
  EXPECT_EQ(g.value, LatticePoint{naive_greatest_n(d)});
  EXPECT_EQ(g.value, LatticePoint{3});
  // The descent starts from a family member and has to move.
  EXPECT_GE(g.steps.size(), 3u);
}

TEST(ValidateAbstract, CatchesEachClause) {
  auto bad_meet = chain(1);
  bad_meet.meet = {{0, 1}, {0, 1}};  // not commutative
  EXPECT_FALSE(validate_abstract(bad_meet).empty());

  auto bad_mono = two_strong();
  bad_mono.delta[0][1] = nat(3);  // bottom above x at a=1
  const auto mv = validate_abstract(bad_mono);
  ASSERT_FALSE(mv.empty());
  EXPECT_EQ(mv.front().clause, AbstractClause::Monotonicity);

  auto bad_gamma = swapped_diamond();
  bad_gamma.gamma = {{3, 1, 2, 0}};  // swaps top and bottom: not a meet automorphism
  EXPECT_THROW(load_abstract(bad_gamma), EquivarianceViolation);

  auto bad_shape = chain(1);
  bad_shape.increment = {{1}};
  EXPECT_THROW(load_abstract(bad_shape), MalformedInput);
}

TEST(RandomAbstract, ProducesValidBoundedInstances) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto d = random_abstract(rng);
    EXPECT_LE(d.size, 12u);
    EXPECT_LE(d.family.size(), 6u);
    EXPECT_TRUE(validate_abstract(d).empty());
  }
}

TEST(RandomAbstract, EngineMatchesNaiveGreatestN) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const auto d = random_abstract(rng);
    if (d.delta[0][0].size() != 1 || d.delta[0][0].kind() != LevelKind::Natural) continue;
    const auto inst = load_abstract(d);
    EXPECT_EQ(greatest_n(inst).value, LatticePoint{naive_greatest_n(d)});
  }
}

TEST(Tabulate, ConcreteAndTabulatedInstancesAgree) {
  const std::vector<FiniteSubset> seeds{FiniteSubset(5, {0, 1, 2})};
  const SetInstance inst(5, seeds, {{1, 2, 3, 4, 0}});
  std::vector<FiniteSubset> universe;
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    FiniteSubset s(5);
    for (std::size_t i = 0; i < 5; ++i)
      if (mask & (1u << i)) s.insert(i);
    universe.push_back(s);
  }
  const auto table = tabulate(inst, universe);
  const auto abs = load_abstract(table);
  std::sort(universe.begin(), universe.end());
  EXPECT_EQ(universe[solve(abs, both()).invariant_element.id], solve(inst).invariant_element);
}
