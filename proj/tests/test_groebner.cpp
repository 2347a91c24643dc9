#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sosym/errors.hpp"
#include "sosym/groebner.hpp"
#include "support.hpp"

using namespace sosym;
using sosym::test::poly;

namespace {

GroebnerBasis boolean(std::size_t n) { return finite_domain_basis(n, {0, 1}); }

Polynomial sum(const std::vector<Polynomial>& ps, std::size_t n) {
  Polynomial out(n);
  for (const auto& p : ps) out += p;
  return out;
}

}  // namespace

TEST_CASE("division by the Boolean axiom") {
  const GroebnerBasis b1 = finite_domain_basis(1, {0, 1});
  const DivisionResult sq = divide(poly("x1^2", 1), b1);
  CHECK(sq.quotients()[0] == Polynomial(1, 1));
  CHECK(sq.remainder() == poly("x1", 1));

  const DivisionResult cube = divide(poly("x1^3", 1), b1);
  CHECK(cube.quotients()[0] == poly("x1 + 1", 1));
  CHECK(cube.remainder() == poly("x1", 1));

  const DivisionResult other = divide(poly("x2", 2), GroebnerBasis(2, {poly("x1^2 - x1", 2)}));
  CHECK(other.quotients()[0].is_zero());
  CHECK(other.remainder() == poly("x2", 2));
}

TEST_CASE("finite domain generators") {
  const GroebnerBasis b = boolean(2);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == poly("x1^2 - x1", 2));
  CHECK(b[1] == poly("x2^2 - x2", 2));
  CHECK(finite_domain_basis(1, {-1, 1})[0] == poly("x1^2 - 1", 1));
  CHECK(finite_domain_basis(1, {0, 1, 2, 3})[0] == poly("x1^4 - 6*x1^3 + 11*x1^2 - 6*x1", 1));
  CHECK_THROWS_AS(finite_domain_basis(1, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(finite_domain_basis(1, {}), std::invalid_argument);
  CHECK_THROWS_AS(finite_domain_basis(1, {1, 1}), InvalidInput);
  CHECK(count_nonzero_s_pair_remainders(b) == 0);
  CHECK(count_nonzero_s_pair_remainders(GroebnerBasis(2, {poly("x1*x2 - 1", 2), poly("x1^2 - x2", 2)})) > 0);
}

TEST_CASE("reduce_identity examples") {
  const GroebnerBasis b = boolean(1);
  ReducedIdentity r1 = reduce_identity(poly("(1 - x1)^2", 1), {}, b);
  CHECK(r1.sigma == poly("1 - x1", 1));
  ReducedIdentity r2 = reduce_identity(Polynomial(1), {poly("x1^2 - x1", 1)}, b);
  CHECK(r2.sigma.is_zero());
  REQUIRE(r2.products.size() == 1);
  CHECK(r2.products[0].is_zero());
  ReducedIdentity r3 = reduce_identity(Polynomial(1, 1), {}, b);
  CHECK(r3.sigma == Polynomial(1, 1));
  CHECK(r3.products.empty());
}

TEST_CASE("reconstruct_proof examples") {
  // x1 = x1^2 - (x1^2 - x1)
  const std::vector<Polynomial> g = reconstruct_proof(poly("x1", 1), poly("x1^2", 1), {}, boolean(1));
  CHECK(g == std::vector<Polynomial>{Polynomial(1, -1)});

  const Polynomial r = poly("x1*x2 + 3", 2);
  const std::vector<Polynomial> zero = reconstruct_proof(r, r, {}, boolean(2));
  for (const auto& gi : zero) CHECK(gi.is_zero());

  const GroebnerBasis empty(1, {});
  const std::vector<Polynomial> none = reconstruct_proof(
      Polynomial(1, -1), Polynomial(1), {{Polynomial(1, 1), poly("x1 - 1", 1)}, {Polynomial(1, -1), poly("x1", 1)}},
      empty);
  CHECK(none.empty());

  CHECK_THROWS_AS(reconstruct_proof(Polynomial(1, -1), Polynomial(1), {}, boolean(1)), ReconstructionError);
  try {
    reconstruct_proof(Polynomial(1, -1), Polynomial(1), {}, boolean(1));
  } catch (const ReconstructionError& e) {
    CHECK(e.residual() == Polynomial(1, -1));
  }
}

TEST_CASE("normal form cache matches division") {
  std::mt19937_64 rng(5);
  const GroebnerBasis b = finite_domain_basis(3, {-1, 0, 1, 2});
  NormalFormCache nf(b);
  for (int i = 0; i < 50; ++i) {
    const Polynomial p = test::random_polynomial(rng, 3, 6, 8);
    CHECK(nf.of(p) == divide(p, b).remainder());
  }
}

TEST_CASE("division identity and irreducible remainder on random inputs") {
  std::mt19937_64 rng(17);
  const GroebnerBasis b = boolean(3);
  for (int i = 0; i < 100; ++i) {
    const Polynomial p = test::random_polynomial(rng, 3, 5, 7);
    const DivisionResult d = divide(p, b);
    Polynomial recombined = d.remainder();
    for (std::size_t j = 0; j < b.size(); ++j) recombined += d.quotients()[j] * b[j];
    CHECK(recombined == p);
    for (const auto& [m, c] : d.remainder().terms())
      for (std::size_t j = 0; j < b.size(); ++j) CHECK_FALSE(b.leading(j).divides(m));
  }
}

TEST_CASE("planted identities survive reduce and reconstruct") {
  std::mt19937_64 rng(23);
  const std::size_t n = 3;
  const GroebnerBasis b = boolean(n);
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial s = test::random_polynomial(rng, n, 1, 3);
    const Polynomial sigma = s * s;
    std::vector<EqualityTerm> eqs;
    for (int j = 0; j < 2; ++j) eqs.push_back({test::random_polynomial(rng, n, 1, 2), test::random_polynomial(rng, n, 2, 3)});
    Polynomial r = sigma;
    for (const auto& e : eqs) r += e.multiplier * e.constraint;
    for (std::size_t i = 0; i < b.size(); ++i) r += test::random_polynomial(rng, n, 2, 2) * b[i];

    std::vector<Polynomial> products;
    for (const auto& e : eqs) products.push_back(e.multiplier * e.constraint);
    const ReducedIdentity reduced = reduce_identity(sigma, products, b);
    CHECK(divide(r, b).remainder() == reduced.sigma + sum(reduced.products, n));

    const std::vector<Polynomial> g = reconstruct_proof(r, sigma, eqs, b);
    Polynomial rebuilt = sigma + sum(products, n);
    for (std::size_t i = 0; i < g.size(); ++i) rebuilt += g[i] * b[i];
    CHECK((rebuilt - r).is_zero());
  }
}
