#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sosym/errors.hpp"
#include "sosym/symmetry.hpp"
#include "support.hpp"

using namespace sosym;
using sosym::test::poly;

namespace {

GramMatrix random_gram(std::mt19937_64& rng, std::size_t n, std::uint32_t d) {
  MonomialBasis basis(n, d);
  std::uniform_int_distribution<int> dist(-3, 3);
  GramMatrix q(basis);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i; j < q.size(); ++j) q.entries(i, j) = q.entries(j, i) = dist(rng);
  return q;
}

Permutation random_element(std::mt19937_64& rng, const GroupSpec& g) {
  std::vector<std::size_t> images(g.ambient());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = i;
  for (std::size_t b = 0; b < g.block_count(); ++b) {
    auto first = images.begin() + static_cast<std::ptrdiff_t>(g.block_start(b));
    std::shuffle(first, first + static_cast<std::ptrdiff_t>(g.block_sizes()[b]), rng);
  }
  return Permutation(images);
}

}  // namespace

TEST_CASE("action on monomials and polynomials") {
  const Permutation swap = Permutation::transposition(2, 0, 1);
  CHECK(act_on_monomial(swap, Monomial{2, 1}) == Monomial{1, 2});
  CHECK(act_on_monomial(Permutation::identity(2), Monomial{2, 1}) == Monomial{2, 1});
  const Permutation cyc = Permutation::cycle(3, {0, 1, 2});
  CHECK(act_on_monomial(cyc, Monomial{1, 0, 0}) == Monomial{0, 1, 0});

  CHECK(act_on_polynomial(swap, poly("x1 + 2*x2", 2)) == poly("x2 + 2*x1", 2));
  CHECK(act_on_polynomial(swap, poly("x1^2 + x2^2", 2)) == poly("x1^2 + x2^2", 2));
  CHECK(act_on_polynomial(swap, poly("x1 - 1", 2)) == poly("x2 - 1", 2));
  CHECK((cyc * cyc.inverse()) == Permutation::identity(3));
}

TEST_CASE("action on Gram matrices commutes with expansion") {
  std::mt19937_64 rng(1);
  const GroupSpec g = GroupSpec::symmetric(3);
  for (int i = 0; i < 30; ++i) {
    const GramMatrix q = random_gram(rng, 3, 2);
    const Permutation p = random_element(rng, g);
    CHECK(act_on_gram(p, q).to_polynomial() == act_on_polynomial(p, q.to_polynomial()));
  }
  const GramMatrix id(MonomialBasis(2, 1), RationalMatrix::identity(3));
  CHECK(act_on_gram(Permutation::transposition(2, 0, 1), id) == id);
  const GramMatrix q = random_gram(rng, 2, 1);
  CHECK(act_on_gram(Permutation::identity(2), q) == q);
}

TEST_CASE("Reynolds operator on polynomials") {
  CHECK(reynolds_poly(GroupSpec::symmetric(2), poly("x1", 2)) == poly("1/2*x1 + 1/2*x2", 2));
  const Polynomial sym = poly("x1*x2 + x1 + x2", 2);
  CHECK(reynolds_poly(GroupSpec::symmetric(2), sym) == sym);
  CHECK(reynolds_poly(GroupSpec({2, 1}), poly("x3", 3)) == poly("x3", 3));
}

TEST_CASE("Reynolds operator on Gram matrices") {
  const MonomialBasis basis(2, 1);  // 1, x2, x1 in grlex ascending order
  GramMatrix rank_one(basis);
  const std::size_t i1 = basis.index_of(Monomial{1, 0});
  const std::size_t i2 = basis.index_of(Monomial{0, 1});
  rank_one.entries(i1, i1) = 1;
  const GramMatrix avg = reynolds_gram(GroupSpec::symmetric(2), rank_one);
  GramMatrix expected(basis);
  expected.entries(i1, i1) = Rational(1, 2);
  expected.entries(i2, i2) = Rational(1, 2);
  CHECK(avg == expected);
  CHECK(reynolds_gram(GroupSpec::symmetric(2), expected) == expected);
  CHECK(reynolds_gram(GroupSpec::symmetric(2), GramMatrix(basis)) == GramMatrix(basis));
}

TEST_CASE("Reynolds properties on random inputs") {
  std::mt19937_64 rng(99);
  const std::vector<GroupSpec> groups = {GroupSpec::symmetric(3), GroupSpec({2, 2}), GroupSpec({1, 3}),
                                         GroupSpec::trivial(2), GroupSpec({3, 2})};
  for (int i = 0; i < 60; ++i) {
    const GroupSpec& g = groups[static_cast<std::size_t>(i) % groups.size()];
    const Polynomial p = test::random_polynomial(rng, g.ambient(), 3, 6);
    const Polynomial avg = reynolds_poly(g, p);
    CHECK(is_invariant(g, avg));
    CHECK(reynolds_poly(g, avg) == avg);
  }
}

TEST_CASE("monomial orbits") {
  CHECK(enumerate_monomial_orbits(GroupSpec::symmetric(3), 2).size() == 4);
  CHECK(enumerate_monomial_orbits(GroupSpec::symmetric(3), 0).size() == 1);
  CHECK(enumerate_monomial_orbits(GroupSpec::trivial(2), 1).size() == 3);
  CHECK(monomial_orbit_size(GroupSpec::symmetric(4), Monomial{2, 1, 0, 0}) == 12);
  CHECK(monomial_orbit(GroupSpec::symmetric(4), Monomial{2, 1, 0, 0}).size() == 12);
  CHECK(orbit_sum(GroupSpec::symmetric(2), Monomial{1, 0}) == poly("x1 + x2", 2));
}

TEST_CASE("pair orbits") {
  // (1,1), (1,x), (x,1), (x_i,x_i), (x_i,x_j) with i != j.
  for (std::size_t n = 2; n <= 6; ++n) CHECK(enumerate_pair_orbits(GroupSpec::symmetric(n), 1).size() == 5);
  CHECK(enumerate_pair_orbits(GroupSpec::symmetric(3), 0).size() == 1);
  CHECK(enumerate_pair_orbits(GroupSpec::trivial(1), 1).size() == 4);
  // Brute-force oracle (tests/oracles/orbit_counts.py): 26 orbits at d = 2 for n = 4..8.
  for (std::size_t n = 4; n <= 6; ++n) CHECK(enumerate_pair_orbits(GroupSpec::symmetric(n), 2).size() == 26);
}

TEST_CASE("bi-integer partitions") {
  CHECK(bipartition_count(0, 0) == 1);
  CHECK(bipartition_count(1, 1) == 2);
  CHECK(bipartition_count(2, 0) == 2);
  Integer total = 0;
  for (unsigned k = 0; k <= 2; ++k)
    for (unsigned l = 0; l <= 2; ++l) total += bipartition_count(k, l);
  CHECK(total == 26);
}

TEST_CASE("orbit indicator matrices partition the grid") {
  const MonomialBasis basis(2, 1);
  const IndicatorSet set = orbit_indicator_matrices(enumerate_pair_orbits(GroupSpec::symmetric(2), 1), basis);
  CHECK(set.matrices.size() == 4);
  RationalMatrix total(3, 3);
  for (const auto& m : set.matrices) {
    CHECK(m.entries.is_symmetric());
    total += m.entries;
  }
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(total(i, j) == 1);

  const IndicatorSet trivial = orbit_indicator_matrices(enumerate_pair_orbits(GroupSpec::trivial(2), 1), basis);
  CHECK(trivial.matrices.size() == 6);
}

TEST_CASE("invariance checks") {
  CHECK(is_invariant(GroupSpec::symmetric(2), poly("x1 + x2", 2)));
  CHECK_FALSE(is_invariant(GroupSpec::symmetric(2), poly("x1", 2)));
  CHECK(is_invariant(GroupSpec({2, 1}), poly("x1 + x2", 3)));

  const SystemInvariance a = is_invariant_system(GroupSpec::symmetric(2), {poly("x1", 2), poly("x2", 2)});
  CHECK(a.invariant);
  CHECK(a.orbits.size() == 1);
  CHECK_FALSE(is_invariant_system(GroupSpec::symmetric(2), {poly("x1", 2)}).invariant);
  const SystemInvariance c =
      is_invariant_system(GroupSpec::symmetric(2), {poly("x1 - x2", 2), poly("x2 - x1", 2)});
  CHECK(c.invariant);
  CHECK(c.orbits.size() == 1);
}

TEST_CASE("group enumeration cap") {
  std::size_t count = 0;
  for_each_element(GroupSpec({3, 2}), [&](const Permutation&) { ++count; });
  CHECK(count == 12);
  CHECK(GroupSpec({3, 2}).order() == 12);
  CHECK_THROWS_AS(for_each_element(GroupSpec::symmetric(9), [](const Permutation&) {}), ResourceError);
  CHECK(to_string(GroupSpec({2, 1})) == "S(2)xS(1)");
}
