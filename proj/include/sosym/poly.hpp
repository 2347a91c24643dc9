#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sosym/rational.hpp"

namespace sosym {

// Exponent vector alpha in N^n; x^alpha = x_1^alpha_1 ... x_n^alpha_n.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t n) : exponents_(n, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exponents);
  Monomial(std::initializer_list<std::uint32_t> exponents);

  static Monomial variable(std::size_t n, std::size_t index, std::uint32_t power = 1);

  std::size_t ambient() const { return exponents_.size(); }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t operator[](std::size_t i) const { return exponents_[i]; }
  std::span<const std::uint32_t> exponents() const { return exponents_; }

  bool divides(const Monomial& other) const;
  // Requires divides(other); returns other / *this.
  Monomial quotient_of(const Monomial& other) const;

  Monomial operator*(const Monomial& other) const;

  // Lexicographic on the raw exponent vector (no degree grading); used for
  // map keys where only a total order is needed.
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    return a.exponents_ <=> b.exponents_;
  }

 private:
  std::vector<std::uint32_t> exponents_;
  std::uint32_t degree_ = 0;
};

// Graded lexicographic order: total degree first, then lexicographic with
// x_1 > x_2 > ... > x_n. Throws DimensionError on mismatched ambient sizes.
std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b);

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return grlex_compare(a, b) == std::strong_ordering::greater;
  }
};

// Multinomial coefficient |alpha|! / (alpha_1! ... alpha_n!).
Integer multinomial(const Monomial& m);

// Sparse polynomial with exact rational coefficients. Terms iterate in
// grlex-descending order; no stored coefficient is zero.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {}
  Polynomial(std::size_t n, const Rational& constant);
  Polynomial(const Monomial& m, const Rational& coefficient = 1);

  static Polynomial variable(std::size_t n, std::size_t index);

  std::size_t ambient() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  // -1 for the zero polynomial.
  int degree() const;
  bool is_constant() const;
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;

  // Requires a nonzero polynomial.
  const Monomial& leading_monomial() const;
  const Rational& leading_coefficient() const;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& scalar);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const;

  Polynomial times_monomial(const Monomial& m, const Rational& c = 1) const;
  Polynomial pow(unsigned exponent) const;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  // Total order for use as a set/map key: by term list.
  friend bool operator<(const Polynomial& a, const Polynomial& b);

 private:
  void check_same(const Polynomial& other) const;

  std::size_t n_ = 0;
  TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial multiply(const Polynomial& p, const Polynomial& q);

// max_alpha |c_alpha| / multinomial(alpha); zero for the zero polynomial.
Rational coefficient_norm(const Polynomial& p);

struct GridOptions {
  std::size_t points_per_axis = 9;
  std::size_t max_evaluations = 1'000'000;
};

// max |p(x)| over a uniform grid on [-1, 1]^n; a lower bound on the sup norm.
Rational grid_sup_lower_bound(const Polynomial& p, const GridOptions& options = {});

// All monomials in n variables of degree <= d in grlex ascending order.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t n, std::uint32_t d);

  std::size_t ambient() const { return n_; }
  std::uint32_t degree() const { return d_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Monomial>& entries() const { return entries_; }
  const Monomial& operator[](std::size_t i) const { return entries_[i]; }
  // Throws std::out_of_range when m is not in the basis.
  std::size_t index_of(const Monomial& m) const;
  bool contains(const Monomial& m) const { return index_.count(m) != 0; }

  friend bool operator==(const MonomialBasis& a, const MonomialBasis& b) {
    return a.n_ == b.n_ && a.d_ == b.d_;
  }

 private:
  std::size_t n_;
  std::uint32_t d_;
  std::vector<Monomial> entries_;
  std::map<Monomial, std::size_t> index_;
};

// All monomials of degree <= d, grlex ascending (the MonomialBasis ordering).
std::vector<Monomial> monomials_up_to(std::size_t n, std::uint32_t d);

Integer binomial(unsigned n, unsigned k);

// Human-readable form using the problem-file grammar, e.g. "3/2*x1^2*x3 - x2 + 1".
std::string to_string(const Polynomial& p);
std::string to_string(const Monomial& m);

}  // namespace sosym
