#pragma once

#include <random>
#include <string_view>

#include "sosym/poly.hpp"
#include "sosym/poly_parse.hpp"

namespace sosym::test {

inline Polynomial poly(std::string_view text, std::size_t n) { return parse_polynomial(text, n); }

// Random polynomial with small integer-over-small-denominator coefficients.
inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, std::uint32_t d, std::size_t terms) {
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  const auto monos = monomials_up_to(n, d);
  std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
  Polynomial p(n);
  for (std::size_t i = 0; i < terms; ++i) {
    Rational c(coeff(rng), den(rng));
    c.canonicalize();
    p.add_term(monos[pick(rng)], c);
  }
  return p;
}

}  // namespace sosym::test
