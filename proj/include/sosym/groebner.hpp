#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sosym/poly.hpp"

namespace sosym {

// Generators with precomputed grlex leading monomials. `assumed_groebner` is
// the caller's assertion; nothing here runs Buchberger.
class GroebnerBasis {
 public:
  GroebnerBasis() = default;
  GroebnerBasis(std::size_t n, std::vector<Polynomial> generators, bool assumed_groebner = true);

  std::size_t ambient() const { return n_; }
  std::size_t size() const { return generators_.size(); }
  bool empty() const { return generators_.empty(); }
  const std::vector<Polynomial>& generators() const { return generators_; }
  const Polynomial& operator[](std::size_t i) const { return generators_[i]; }
  const Monomial& leading(std::size_t i) const { return leading_[i]; }
  bool assumed_groebner() const { return assumed_groebner_; }

  // Degree of the largest generator; 0 for an empty basis.
  int max_degree() const;

 private:
  std::size_t n_ = 0;
  std::vector<Polynomial> generators_;
  std::vector<Monomial> leading_;
  bool assumed_groebner_ = true;
};

class DivisionResult {
 public:
  // Throws std::logic_error if the division identity fails (never expected).
  DivisionResult(const Polynomial& dividend, const GroebnerBasis& basis,
                 std::vector<Polynomial> quotients, Polynomial remainder);

  const std::vector<Polynomial>& quotients() const { return quotients_; }
  const Polynomial& remainder() const { return remainder_; }

 private:
  std::vector<Polynomial> quotients_;
  Polynomial remainder_;
};

DivisionResult divide(const Polynomial& dividend, const GroebnerBasis& basis);

// Remainder only, memoized per monomial. Reduction is linear, so the normal
// form of a polynomial is the sum of its monomials' normal forms.
class NormalFormCache {
 public:
  explicit NormalFormCache(const GroebnerBasis& basis) : basis_(&basis) {}
  const Polynomial& of(const Monomial& m);
  Polynomial of(const Polynomial& p);

 private:
  const GroebnerBasis* basis_;
  std::map<Monomial, Polynomial> cache_;
};

// n univariate generators (x_i - r_1)...(x_i - r_2k). Throws InvalidInput on a
// duplicate root and std::invalid_argument on an odd or empty root list.
GroebnerBasis finite_domain_basis(std::size_t n, const std::vector<Rational>& roots);

struct ReducedIdentity {
  Polynomial sigma;
  std::vector<Polynomial> products;
};

ReducedIdentity reduce_identity(const Polynomial& sigma, const std::vector<Polynomial>& products,
                                const GroebnerBasis& basis);

class ReconstructionError : public std::runtime_error {
 public:
  explicit ReconstructionError(Polynomial residual);
  const Polynomial& residual() const { return residual_; }

 private:
  Polynomial residual_;
};

struct EqualityTerm {
  Polynomial multiplier;
  Polynomial constraint;
};

// Returns g_1..g_t with r = sigma + sum multiplier*constraint + sum g_i f_i.
// Throws ReconstructionError carrying remainder(r - sigma - sum ...) when the
// reduced identity does not hold.
std::vector<Polynomial> reconstruct_proof(const Polynomial& r, const Polynomial& sigma,
                                          const std::vector<EqualityTerm>& equality_products,
                                          const GroebnerBasis& basis);

// Reduces every S-polynomial of the generators; a true Groebner basis gives
// zero remainders. Returns the number of nonzero remainders found.
std::size_t count_nonzero_s_pair_remainders(const GroebnerBasis& basis);

}  // namespace sosym
