#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace sosym {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "7", "-3/4", "0.125", "1e-3"-free decimal forms. Throws
// std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

// "n" for integers, "n/d" otherwise (canonical form).
std::string to_string(const Rational& value);

// Number of bits of |value|; zero takes one bit.
std::size_t bit_length(const Integer& value);

// Best rational approximation of x with denominator <= max_denominator,
// computed from the continued-fraction expansion (convergents and
// semiconvergents).
Rational best_rational_approximation(double x, const Integer& max_denominator);

inline double to_double(const Rational& value) { return value.get_d(); }

}  // namespace sosym
