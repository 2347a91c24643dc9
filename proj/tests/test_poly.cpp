#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sosym/errors.hpp"
#include "sosym/exact_linalg.hpp"
#include "sosym/numeric_linalg.hpp"
#include "support.hpp"

using namespace sosym;
using sosym::test::poly;

TEST_CASE("grlex ordering") {
  CHECK(grlex_compare(Monomial{2, 0}, Monomial{1, 1}) == std::strong_ordering::greater);
  CHECK(grlex_compare(Monomial{0, 0}, Monomial{0, 0}) == std::strong_ordering::equal);
  CHECK(grlex_compare(Monomial{1, 0, 0}, Monomial{0, 1, 1}) == std::strong_ordering::less);
  CHECK_THROWS_AS(grlex_compare(Monomial{1}, Monomial{1, 0}), DimensionError);
}

TEST_CASE("addition and multiplication") {
  CHECK(poly("x1 + 1", 1) + poly("-x1", 1) == Polynomial(1, 1));
  const Polynomial p = poly("3*x1*x2 - x2^2 + 1/2", 2);
  CHECK(p + Polynomial(2) == p);
  CHECK(poly("x1*x2", 2) + poly("x1*x2", 2) == poly("2*x1*x2", 2));
  CHECK(poly("x1 - 1", 1) * poly("x1 + 1", 1) == poly("x1^2 - 1", 1));
  CHECK(p * Polynomial(2, 1) == p);
  CHECK(poly("(x1 + x2)^2", 2) == poly("x1^2 + 2*x1*x2 + x2^2", 2));
  CHECK_THROWS_AS(poly("x1", 1) + poly("x1", 2), DimensionError);
}

TEST_CASE("zero polynomial has degree -1 and no leading term") {
  const Polynomial z(3);
  CHECK(z.degree() == -1);
  CHECK(z.is_zero());
  CHECK(poly("x1 - x1", 1).is_zero());
}

TEST_CASE("evaluation") {
  const std::vector<Rational> two{2};
  CHECK(poly("x1^2 - 1", 1).evaluate(two) == 3);
  const Polynomial p = poly("x1^3 - 2*x2 + 7/3", 2);
  const std::vector<Rational> zero{0, 0};
  CHECK(p.evaluate(zero) == p.constant_term());
  const std::vector<Rational> pt{Rational(1, 2), Rational(1, 3)};
  CHECK(poly("x1*x2", 2).evaluate(pt) == Rational(1, 6));
}

TEST_CASE("coefficient norm divides by multinomials") {
  CHECK(coefficient_norm(poly("6*x1*x2", 2)) == 3);
  CHECK(coefficient_norm(Polynomial(2, 5)) == 5);
  CHECK(coefficient_norm(poly("x1^2 + x2^2", 2)) == 1);
}

TEST_CASE("grid lower bound on the sup over the cube") {
  GridOptions three{3, 1000};
  CHECK(grid_sup_lower_bound(Polynomial(2, 1), three) == 1);
  CHECK(grid_sup_lower_bound(poly("x1", 1), three) == 1);
  CHECK(grid_sup_lower_bound(poly("x1^2 - 1", 1), three) == 1);
  CHECK(grid_sup_lower_bound(poly("x1^3 - x1", 1), GridOptions{5, 1000}) == Rational(3, 8));
  CHECK_THROWS_AS(grid_sup_lower_bound(poly("x1", 8), GridOptions{9, 100}), ResourceError);
}

TEST_CASE("parser forms and errors") {
  CHECK(poly("3/2*x1^2*x3 - x2 + 1", 3).coefficient(Monomial{2, 0, 1}) == Rational(3, 2));
  CHECK(poly("0.25*x1", 1) == poly("1/4*x1", 1));
  CHECK(poly("-(x1 - 1)", 1) == poly("1 - x1", 1));
  CHECK_THROWS_AS(poly("x1 + x3", 2), ParseError);
  CHECK_THROWS_AS(poly("x1 +", 1), ParseError);
  CHECK_THROWS_AS(poly("1/0", 1), ParseError);
  try {
    parse_polynomial("x1 + x3", 2, 4, 5);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() == 10);
  }
}

TEST_CASE("printing round-trips through the parser") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Polynomial p = test::random_polynomial(rng, 3, 3, 6);
    CHECK(parse_polynomial(to_string(p), 3) == p);
  }
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Polynomial a = test::random_polynomial(rng, 3, 2, 5);
    const Polynomial b = test::random_polynomial(rng, 3, 2, 5);
    const Polynomial c = test::random_polynomial(rng, 3, 2, 5);
    CHECK(a * b == b * a);
    CHECK((a + b) * c == a * c + b * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a - a).is_zero());
    const std::vector<Rational> pt{Rational(1, 3), Rational(-2), Rational(5, 7)};
    CHECK((a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt));
  }
}

TEST_CASE("monomial basis enumeration") {
  const MonomialBasis b(3, 2);
  CHECK(b.size() == 10);
  CHECK(b[0] == Monomial(3));
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b[i]) == i);
  CHECK(binomial(5, 2) == 10);
  CHECK(multinomial(Monomial{2, 1}) == 3);
}

TEST_CASE("rational parsing and continued fractions") {
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK(best_rational_approximation(0.999999997, 100) == 1);
  CHECK(best_rational_approximation(3.14159265358979, 1000) == Rational(355, 113));
  CHECK(best_rational_approximation(-0.3333333, 10) == Rational(-1, 3));
  CHECK(bit_length(Integer(5)) == 3);
}

TEST_CASE("exact LDLT") {
  RationalMatrix s(2, 2);
  s(0, 0) = 1;
  s(0, 1) = s(1, 0) = 1;
  s(1, 1) = 1;
  CHECK(ldlt_psd(s).psd);
  s(1, 1) = Rational(1, 2);
  const LdltResult bad = ldlt_psd(s);
  REQUIRE_FALSE(bad.psd);
  REQUIRE(bad.witness);
  CHECK(quadratic_form(s, *bad.witness) < 0);

  RationalMatrix off(2, 2);  // zero diagonal, nonzero off-diagonal
  off(0, 1) = off(1, 0) = 3;
  const LdltResult w = ldlt_psd(off);
  REQUIRE_FALSE(w.psd);
  CHECK(quadratic_form(off, *w.witness) < 0);

  RationalMatrix asym(2, 2);
  asym(0, 1) = 1;
  CHECK_THROWS(ldlt_psd(asym));
}

TEST_CASE("random Gram matrices: LDLT agrees with construction") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dist(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4;
    RationalMatrix b(n, 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 2; ++j) b(i, j) = dist(rng);
    const RationalMatrix g = b * b.transpose();
    CHECK(ldlt_psd(g).psd);
    RationalMatrix shifted = g;
    shifted(trial % n, trial % n) -= 1000;
    const LdltResult r = ldlt_psd(shifted);
    REQUIRE_FALSE(r.psd);
    CHECK(quadratic_form(shifted, *r.witness) < 0);
  }
}

TEST_CASE("affine solve and row compression") {
  RationalMatrix a(3, 3);
  a(0, 0) = 1, a(0, 1) = 1;
  a(1, 1) = 1, a(1, 2) = 1;
  a(2, 0) = 1, a(2, 2) = -1;  // row0 - row1
  RationalVector c{3, 2, 1};
  auto sol = solve_affine(a, c);
  REQUIRE(sol);
  CHECK(a * sol->particular == c);
  CHECK(sol->nullspace.size() == 1);
  CHECK(a * sol->nullspace[0] == RationalVector{0, 0, 0});
  auto compressed = compress_rows(a, c);
  REQUIRE(compressed);
  CHECK(compressed->first.rows() == 2);
  c[2] = 5;
  CHECK_FALSE(solve_affine(a, c));
  CHECK_FALSE(compress_rows(a, c));
}

TEST_CASE("numeric eigen and PSD projection") {
  numeric::Matrix m(2, 2);
  m(0, 0) = 2, m(0, 1) = m(1, 0) = 1, m(1, 1) = 2;
  CHECK(numeric::min_eigenvalue(m) == doctest::Approx(1.0));
  m(1, 1) = -2;
  const numeric::Matrix p = numeric::project_psd(m);
  CHECK(numeric::min_eigenvalue(p) >= -1e-12);
}
