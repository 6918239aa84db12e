#include <gtest/gtest.h>

#include <map>
#include <random>
#include <vector>

#include "closeknit/contlogic.hpp"
#include "closeknit/groups.hpp"
#include "support/brute.hpp"
#include "support/catalog.hpp"

using namespace closeknit;

namespace {

using Pts = std::vector<std::size_t>;

GroupTable table_of(const PermGroup& g) {
  GroupTable t;
  t.mul.assign(g.order(), std::vector<std::size_t>(g.order()));
  for (ElementIndex x = 0; x < g.order(); ++x)
    for (ElementIndex y = 0; y < g.order(); ++y) t.mul[x][y] = g.mul(x, y);
  return t;
}

Pts all_points(std::size_t n) {
  Pts out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

// Plain enumeration of the three formulas, with no pruning.
Rational naive_set(const MetricStructure& m, const Pts& s, std::size_t a, const Permutation& g, std::size_t phi,
                   std::size_t n) {
  const auto gi = inverse(g);
  Rational best(0);
  bool any = false;
  brute::for_each_tuple(s, n, [&](const Pts& x) {
    any = true;
    Rational v(1);
    for (std::size_t i = 0; i < n; ++i) {
      v = std::min(v, m.phi(phi, gi[x[i]], a));
      for (std::size_t j = i + 1; j < n; ++j) v = std::min(v, m.d(gi[x[i]], gi[x[j]]));
    }
    best = std::max(best, v);
  });
  return any ? best : Rational(0);
}

Rational naive_group(const MetricStructure& m, const Pts& s, std::size_t a, const Permutation& g, std::size_t phi,
                     std::size_t n) {
  const auto gi = inverse(g);
  Rational best(0);
  bool any = false;
  brute::for_each_tuple(s, n, [&](const Pts& x) {
    any = true;
    Rational v(1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) v = std::min(v, m.phi(phi, gi[m.mul(m.inv(x[i]), x[j])], a));
    best = std::max(best, v);
  });
  return any ? best : Rational(0);
}

Rational naive_vect(const MetricStructure& m, const Pts& s, std::size_t a, const Permutation& g, std::size_t phi,
                    std::size_t n) {
  const auto& vc = *m.vector();
  std::map<Vec, std::size_t> index;
  for (std::size_t i = 0; i < vc.coords.size(); ++i) index[vc.coords[i]] = i;
  Pts scalars(vc.p);
  for (std::uint32_t c = 0; c < vc.p; ++c) scalars[c] = c;
  const auto gi = inverse(g);
  Rational best(0);
  bool any = false;
  brute::for_each_tuple(s, n, [&](const Pts& x) {
    any = true;
    Rational v(1);
    brute::for_each_tuple(scalars, n, [&](const Pts& eta) {
      bool zero = true;
      Vec sum(vc.dim, 0);
      for (std::size_t i = 0; i < n; ++i) {
        zero = zero && eta[i] == 0;
        for (std::size_t k = 0; k < vc.dim; ++k) sum[k] = (sum[k] + eta[i] * vc.coords[x[i]][k]) % vc.p;
      }
      if (!zero) v = std::min(v, m.phi(phi, gi[index.at(sum)], a));
    });
    best = std::max(best, v);
  });
  return any ? best : Rational(0);
}

struct S3Table {
  GroupPtr g = catalog::make(catalog::s3());
  Pts h12 = {0, *g->find(from_cycles({{0, 1}}, 3))};
  MetricStructure m = discrete_group_structure(table_of(*g), {h12});
};

}  // namespace

TEST(DeltaSet, Examples) {
  const auto m = discrete_set_structure(4, {{2, 3}});
  const auto id = identity_permutation(4);
  const Pts s{1, 2};
  EXPECT_EQ(delta_phi_n_set(m, s, 0, id, 0, 0), Rational(1));
  EXPECT_EQ(delta_phi_n_set(m, s, 0, id, 0, 1), Rational(1));
  EXPECT_EQ(delta_phi_n_set(m, s, 0, id, 0, 2), Rational(0));
  EXPECT_EQ(naive_set(m, s, 0, id, 0, 2), Rational(0));
  EXPECT_EQ(delta_phi_n_set(m, Pts{}, 0, id, 0, 1), Rational(0));
  EXPECT_EQ(delta_phi_n_set(m, Pts{}, 0, id, 0, 3), Rational(0));
}

TEST(DeltaGroup, Examples) {
  const S3Table t;
  const auto id = identity_permutation(6);
  const auto whole = all_points(6);
  EXPECT_EQ(delta_phi_n_group(t.m, whole, 0, id, 0, 1), Rational(1));
  EXPECT_EQ(delta_phi_n_group(t.m, whole, 0, id, 0, 3), Rational(1));
  EXPECT_EQ(delta_phi_n_group(t.m, whole, 0, id, 0, 4), Rational(0));
  EXPECT_EQ(naive_group(t.m, whole, 0, id, 0, 3), Rational(1));
  EXPECT_EQ(naive_group(t.m, whole, 0, id, 0, 4), Rational(0));
  EXPECT_EQ(delta_phi_n_group(t.m, t.h12, 0, id, 0, 2), Rational(0));
}

TEST(DeltaVect, Examples) {
  // Points of F_2^2 in lexicographic order: 00, 01, 10, 11.
  const Pts x_axis{vector_point({0, 0}, 2), vector_point({1, 0}, 2)};
  const auto m = discrete_vector_structure(2, 2, {x_axis});
  const auto id = identity_permutation(4);
  const auto whole = all_points(4);
  EXPECT_EQ(delta_phi_n_vect(m, whole, 0, id, 0, 0), Rational(1));
  EXPECT_EQ(delta_phi_n_vect(m, whole, 0, id, 0, 1), Rational(1));
  EXPECT_EQ(delta_phi_n_vect(m, whole, 0, id, 0, 2), Rational(0));
  EXPECT_EQ(naive_vect(m, whole, 0, id, 0, 2), Rational(0));
  EXPECT_EQ(delta_phi_n_vect(m, Pts{0}, 0, id, 0, 1), Rational(0));
}

TEST(DiscreteReduction, Examples) {
  EXPECT_EQ(discrete_reduction(DeltaCase::Set, discrete_set_structure(4, {{2, 3}}), Pts{1, 2}, 0), 1u);
  const S3Table t;
  EXPECT_EQ(discrete_reduction(DeltaCase::Group, t.m, all_points(6), 0), 3u);
  const auto m = discrete_vector_structure(2, 2, {{0, 2}});
  EXPECT_EQ(discrete_reduction(DeltaCase::Vector, m, all_points(4), 0), 1u);
}

TEST(DiscreteReduction, NeedsDiscreteData) {
  auto d = discrete_distance(3);
  d[0][1] = d[1][0] = Rational(1, 2);
  const MetricStructure m(3, d, {outside_formula(3, {{0}})}, 1);
  EXPECT_THROW(discrete_reduction(DeltaCase::Set, m, Pts{0, 1}, 0), ContractViolation);
  const MetricStructure half(3, discrete_distance(3),
                             {Formula{"half", {{Rational(1, 2)}, {Rational(1)}, {Rational(0)}}}}, 1);
  EXPECT_THROW(discrete_reduction(DeltaCase::Set, half, Pts{0, 1}, 0), ContractViolation);
}

TEST(DeltaGamma, ActsThroughTheInverse) {
  // Moving S by gamma and evaluating at gamma gives the value at the identity.
  const auto m = discrete_set_structure(4, {{2, 3}});
  const Permutation g{1, 2, 3, 0};
  const Pts s{1, 2};
  Pts moved;
  for (auto x : s) moved.push_back(g[x]);
  for (std::size_t n = 0; n <= 3; ++n) {
    EXPECT_EQ(delta_phi_n_set(m, moved, 0, g, 0, n), delta_phi_n_set(m, s, 0, identity_permutation(4), 0, n));
  }
}

TEST(DeltaSet, MatchesNaiveOnRandomStructures) {
  std::mt19937_64 rng(21);
  const Rational grid[3] = {Rational(0), Rational(1, 2), Rational(1)};
  std::uniform_int_distribution<int> pick(0, 2);
  int checked = 0;
  while (checked < 60) {
    const std::size_t pts = 4;
    auto d = discrete_distance(pts);
    for (std::size_t i = 0; i < pts; ++i)
      for (std::size_t j = i + 1; j < pts; ++j) d[i][j] = d[j][i] = grid[pick(rng)];
    std::vector<std::vector<Rational>> phi(pts, std::vector<Rational>(1));
    for (auto& row : phi) row[0] = grid[pick(rng)];
    std::unique_ptr<MetricStructure> m;
    try {
      m = std::make_unique<MetricStructure>(pts, d, std::vector<Formula>{{"phi", phi}}, 1);
    } catch (const MalformedInput&) {
      continue;  // not a pseudometric
    }
    ++checked;
    std::vector<std::size_t> perm = all_points(pts);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
      Pts s;
      for (std::size_t i = 0; i < pts; ++i)
        if (mask & (1u << i)) s.push_back(i);
      for (std::size_t n = 0; n <= 4; ++n) ASSERT_EQ(delta_phi_n_set(*m, s, 0, perm, 0, n), naive_set(*m, s, 0, perm, 0, n));
    }
  }
}

TEST(DeltaGroup, MatchesNaiveOnC4) {
  const auto g = catalog::make(catalog::cyclic(4));
  std::mt19937_64 rng(4);
  const Rational grid[3] = {Rational(0), Rational(1, 2), Rational(1)};
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<Rational>> phi(4, std::vector<Rational>(1));
    for (auto& row : phi) row[0] = grid[pick(rng)];
    const MetricStructure m(4, discrete_distance(4), {{"phi", phi}}, 1, table_of(*g));
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
      Pts s;
      for (std::size_t i = 0; i < 4; ++i)
        if (mask & (1u << i)) s.push_back(i);
      for (std::size_t n = 0; n <= 4; ++n) {
        ASSERT_EQ(delta_phi_n_group(m, s, 0, identity_permutation(4), 0, n),
                  naive_group(m, s, 0, identity_permutation(4), 0, n));
      }
    }
  }
}

TEST(DeltaVect, MatchesNaiveOnF3) {
  std::mt19937_64 rng(8);
  const Rational grid[3] = {Rational(0), Rational(1, 2), Rational(1)};
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 10; ++trial) {
    auto base = discrete_vector_structure(3, 2, {{0}});
    std::vector<std::vector<Rational>> phi(9, std::vector<Rational>(1));
    for (auto& row : phi) row[0] = grid[pick(rng)];
    const MetricStructure m(9, discrete_distance(9), {{"phi", phi}}, 1, std::nullopt, *base.vector());
    for (const Pts& s : {Pts{}, Pts{0}, Pts{1, 3}, Pts{2, 4, 8}, all_points(9)}) {
      for (std::size_t n = 0; n <= 3; ++n) {
        ASSERT_EQ(delta_phi_n_vect(m, s, 0, identity_permutation(9), 0, n),
                  naive_vect(m, s, 0, identity_permutation(9), 0, n));
      }
    }
  }
}

TEST(MetricStructure, ValidatesInput) {
  auto asym = discrete_distance(3);
  asym[0][1] = Rational(1, 2);
  EXPECT_THROW(MetricStructure(3, asym, {outside_formula(3, {{0}})}, 1), MalformedInput);
  auto tri = discrete_distance(3);
  tri[0][1] = tri[1][0] = Rational(0);
  tri[1][2] = tri[2][1] = Rational(0);  // d(0,2) = 1 > d(0,1) + d(1,2)
  EXPECT_THROW(MetricStructure(3, tri, {outside_formula(3, {{0}})}, 1), MalformedInput);
  EXPECT_THROW(MetricStructure(2, discrete_distance(2), {{"big", {{Rational(2)}, {Rational(0)}}}}, 1), MalformedInput);
  GroupTable bad{{{0, 1}, {1, 1}}};
  EXPECT_THROW(MetricStructure(2, discrete_distance(2), {outside_formula(2, {{0}})}, 1, bad), MalformedInput);
}

TEST(MetricStructure, ClosesFormulasUnderMax) {
  const MetricStructure m(2, discrete_distance(2),
                          {{"p", {{Rational(0)}, {Rational(1)}}}, {"q", {{Rational(1, 2)}, {Rational(0)}}}}, 1);
  ASSERT_EQ(m.formulas().size(), 3u);
  const auto idx = m.formula_index("max(p,q)");
  ASSERT_TRUE(idx.has_value());
  EXPECT_EQ(m.phi(*idx, 0, 0), Rational(1, 2));
  EXPECT_EQ(m.phi(*idx, 1, 0), Rational(1));
}

TEST(Enumeration, CapIsEnforced) {
  const auto m = discrete_set_structure(4, {{0}});
  EXPECT_THROW(delta_phi_n_set(m, all_points(4), 0, identity_permutation(4), 0, 4, 100), EnumerationCapExceeded);
}
