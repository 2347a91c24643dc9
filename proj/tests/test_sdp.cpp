#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "sosym/errors.hpp"
#include "sosym/sdp.hpp"

using namespace sosym;

namespace {

RationalMatrix scalar(const Rational& v) {
  RationalMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

RationalMatrix diag(const Rational& a, const Rational& b) {
  RationalMatrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// a1 [1] PSD, a1 = c
FeasibilitySystem one_variable(const Rational& c) {
  FeasibilitySystem sys;
  sys.psd_matrices = {scalar(1)};
  sys.linear_map = RationalMatrix(1, 1);
  sys.linear_map(0, 0) = 1;
  sys.rhs = {c};
  return sys;
}

// -1 = c (x - 1/2)^2 + g (x^2 - x), matched on 1, x, x^2; no PSD part.
FeasibilitySystem knapsack_multipliers() {
  FeasibilitySystem sys;
  sys.linear_map = RationalMatrix(3, 2);
  sys.linear_map(0, 0) = Rational(1, 4);
  sys.linear_map(1, 0) = -1;
  sys.linear_map(1, 1) = -1;
  sys.linear_map(2, 0) = 1;
  sys.linear_map(2, 1) = 1;
  sys.rhs = {-1, 0, 0};
  return sys;
}

bool exactly_psd(const BlockEncoding& enc, const RationalVector& y) { return ldlt_psd(enc.evaluate(y)).psd; }

}  // namespace

TEST_CASE("block-diagonal encoding") {
  const FeasibilitySystem sys = one_variable(1);
  const BlockEncoding enc = block_diagonal_encode(sys);
  CHECK(enc.size() == 3);
  CHECK(exactly_psd(enc, {1}));
  CHECK_FALSE(exactly_psd(enc, {2}));
  CHECK_FALSE(exactly_psd(enc, {Rational(1, 2)}));

  FeasibilitySystem free_only;
  free_only.psd_matrices = {diag(1, 0), diag(0, 1)};
  free_only.linear_map = RationalMatrix(0, 2);
  const BlockEncoding bare = block_diagonal_encode(free_only);
  CHECK(bare.size() == 2);
  CHECK(bare.evaluate({2, 3}) == diag(2, 3));

  const BlockEncoding neg = block_diagonal_encode(one_variable(-1));
  CHECK_FALSE(exactly_psd(neg, {-1}));
  const SolveResult r = solve_feasibility(as_feasibility_system(neg));
  CHECK_FALSE(r.feasible());
}

TEST_CASE("solver on tiny systems") {
  const SolveResult ok = solve_feasibility(one_variable(1));
  REQUIRE(ok.feasible());
  CHECK(ok.solution->values[0] == doctest::Approx(1.0).epsilon(1e-8));

  const SolveResult bad = solve_feasibility(one_variable(-1));
  CHECK_FALSE(bad.feasible());
  CHECK_FALSE(bad.affine_inconsistent);

  FeasibilitySystem inconsistent = one_variable(1);
  inconsistent.linear_map = RationalMatrix(2, 1);
  inconsistent.linear_map(0, 0) = 1;
  inconsistent.linear_map(1, 0) = 1;
  inconsistent.rhs = {1, 2};
  const SolveResult none = solve_feasibility(inconsistent);
  CHECK_FALSE(none.feasible());
  CHECK(none.affine_inconsistent);
}

TEST_CASE("knapsack multiplier system") {
  const FeasibilitySystem sys = knapsack_multipliers();
  const SolveResult r = solve_feasibility(sys);
  REQUIRE(r.feasible());
  CHECK(r.solution->values[0] == doctest::Approx(-4.0));
  CHECK(r.solution->values[1] == doctest::Approx(4.0));

  NumericSolution noisy;
  noisy.values = {-3.9999998, 4.0000001};
  const RationalizeResult exact = rationalize(noisy, sys, Integer(1) << 32);
  REQUIRE(exact.ok());
  CHECK(*exact.values == RationalVector{-4, 4});
}

TEST_CASE("rationalize rounds to small denominators") {
  NumericSolution near_one;
  near_one.values = {0.999999997};
  const RationalizeResult r = rationalize(near_one, one_variable(1), 100);
  REQUIRE(r.ok());
  CHECK((*r.values)[0] == 1);
  CHECK(r.denominator_used == 1);
}

TEST_CASE("rationalize fails when exact solutions need a large denominator") {
  // a1 diag(1,-1) + a2 diag(-1,1) PSD forces a1 = a2; a1 + 2 a2 = 3/999983.
  FeasibilitySystem sys;
  sys.psd_matrices = {diag(1, -1), diag(-1, 1)};
  sys.linear_map = RationalMatrix(1, 2);
  sys.linear_map(0, 0) = 1;
  sys.linear_map(0, 1) = 2;
  sys.rhs = {Rational(3, 999983)};
  NumericSolution sol;
  sol.values = {1.0 / 999983.0, 1.0 / 999983.0};
  const RationalizeResult r = rationalize(sol, sys, 100);
  CHECK_FALSE(r.ok());
  CHECK(r.failure == RationalizeFailure::psd);
  const RationalizeResult wide = rationalize(sol, sys, 10'000'000);
  REQUIRE(wide.ok());
  CHECK((*wide.values)[0] == Rational(1, 999983));
}

TEST_CASE("evaluate_solution recomputes residual and eigenvalue") {
  const NumericSolution s = evaluate_solution(one_variable(1), {0.5});
  CHECK(s.linear_residual == doctest::Approx(0.5));
  CHECK(s.min_eigenvalue == doctest::Approx(0.5));
  CHECK_THROWS_AS(evaluate_solution(one_variable(1), {0.5, 1.0}), DimensionError);
}

TEST_CASE("sparse dump format") {
  FeasibilitySystem sys = one_variable(Rational(3, 2));
  sys.psd_matrices = {diag(1, 2)};
  std::ostringstream out;
  write_sparse(out, sys);
  CHECK(out.str() == "1 1 0 2\nQ 1 1 1 1\nQ 1 2 2 2\nA 1 1 1\nc 1 3/2\n");
}

TEST_CASE("shape validation and resource cap") {
  FeasibilitySystem sys = one_variable(1);
  sys.rhs = {1, 2};
  CHECK_THROWS_AS(sys.validate(), DimensionError);
  FeasibilitySystem big;
  big.psd_matrices.assign(3, scalar(1));
  big.linear_map = RationalMatrix(0, 3);
  SolverOptions tight;
  tight.variable_cap = 2;
  CHECK_THROWS_AS(solve_feasibility(big, tight), ResourceError);
}

TEST_CASE("random planted feasible systems round to exact solutions") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dist(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3;
    FeasibilitySystem sys;
    for (int k = 0; k < 4; ++k) {
      RationalMatrix q(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) q(i, j) = q(j, i) = dist(rng);
      sys.psd_matrices.push_back(q);
    }
    sys.psd_matrices[0] = RationalMatrix::identity(n);  // planted point y = e_1 is interior
    sys.linear_map = RationalMatrix(2, 5);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 5; ++c) sys.linear_map(r, c) = dist(rng);
    RationalVector planted{1, 0, 0, 0, Rational(1, 2)};
    sys.rhs = sys.linear_map * planted;
    const SolveResult r = solve_feasibility(sys);
    REQUIRE(r.feasible());
    const RationalizeResult exact = rationalize(*r.solution, sys, Integer(1) << 32);
    REQUIRE(exact.ok());
    CHECK(sys.linear_map * *exact.values == sys.rhs);
    CHECK(ldlt_psd(sys.psd_combination(*exact.values)).psd);
  }
}
