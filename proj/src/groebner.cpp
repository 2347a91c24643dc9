#include "sosym/groebner.hpp"

#include <algorithm>
#include <set>

#include "sosym/errors.hpp"

namespace sosym {

GroebnerBasis::GroebnerBasis(std::size_t n, std::vector<Polynomial> generators, bool assumed_groebner)
    : n_(n), generators_(std::move(generators)), assumed_groebner_(assumed_groebner) {
  for (const auto& g : generators_) {
    if (g.ambient() != n_) throw DimensionError("Groebner generator has wrong ambient dimension");
    if (g.is_zero()) throw InvalidInput("Groebner generators must be nonzero");
    leading_.push_back(g.leading_monomial());
  }
}

int GroebnerBasis::max_degree() const {
  int d = 0;
  for (const auto& g : generators_) d = std::max(d, g.degree());
  return d;
}

DivisionResult::DivisionResult(const Polynomial& dividend, const GroebnerBasis& basis,
                               std::vector<Polynomial> quotients, Polynomial remainder)
    : quotients_(std::move(quotients)), remainder_(std::move(remainder)) {
  if (quotients_.size() != basis.size()) throw std::logic_error("quotient count mismatch");
  Polynomial check = remainder_;
  for (std::size_t i = 0; i < basis.size(); ++i) check += quotients_[i] * basis[i];
  if (!(check == dividend)) throw std::logic_error("division identity violated");
  for (const auto& [m, c] : remainder_.terms())
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis.leading(i).divides(m)) throw std::logic_error("remainder term is reducible");
}

namespace {

// Returns (quotients, remainder) without the identity check.
std::pair<std::vector<Polynomial>, Polynomial> divide_raw(const Polynomial& dividend,
                                                          const GroebnerBasis& basis,
                                                          bool track_quotients) {
  const std::size_t n = dividend.ambient();
  if (!basis.empty() && basis.ambient() != n) throw DimensionError("divide: ambient dimensions differ");
  std::vector<Polynomial> quotients(track_quotients ? basis.size() : 0, Polynomial(n));
  Polynomial remainder(n);
  Polynomial work = dividend;
  while (!work.is_zero()) {
    const Monomial lead = work.leading_monomial();
    const Rational coeff = work.leading_coefficient();
    bool reduced = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!basis.leading(i).divides(lead)) continue;
      const Monomial shift = basis.leading(i).quotient_of(lead);
      const Rational factor = coeff / basis[i].leading_coefficient();
      if (track_quotients) quotients[i].add_term(shift, factor);
      work -= basis[i].times_monomial(shift, factor);
      reduced = true;
      break;
    }
    if (!reduced) {
      remainder.add_term(lead, coeff);
      work.add_term(lead, -coeff);
    }
  }
  return {std::move(quotients), std::move(remainder)};
}

}  // namespace

DivisionResult divide(const Polynomial& dividend, const GroebnerBasis& basis) {
  auto [q, r] = divide_raw(dividend, basis, true);
  return DivisionResult(dividend, basis, std::move(q), std::move(r));
}

const Polynomial& NormalFormCache::of(const Monomial& m) {
  auto it = cache_.find(m);
  if (it != cache_.end()) return it->second;
  auto [q, r] = divide_raw(Polynomial(m), *basis_, false);
  return cache_.emplace(m, std::move(r)).first->second;
}

Polynomial NormalFormCache::of(const Polynomial& p) {
  Polynomial out(p.ambient());
  for (const auto& [m, c] : p.terms()) {
    for (const auto& [mm, cc] : of(m).terms()) out.add_term(mm, c * cc);
  }
  return out;
}

GroebnerBasis finite_domain_basis(std::size_t n, const std::vector<Rational>& roots) {
  if (roots.empty() || roots.size() % 2 != 0)
    throw std::invalid_argument("finite domain needs an even, nonzero number of roots (got " +
                                std::to_string(roots.size()) + ")");
  std::set<Rational> seen(roots.begin(), roots.end());
  if (seen.size() != roots.size()) throw InvalidInput("finite domain roots must be distinct");
  std::vector<Polynomial> gens;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial d(n, 1);
    const Polynomial x = Polynomial::variable(n, i);
    for (const auto& r : roots) d = d * (x - Polynomial(n, r));
    gens.push_back(std::move(d));
  }
  return GroebnerBasis(n, std::move(gens), true);
}

ReducedIdentity reduce_identity(const Polynomial& sigma, const std::vector<Polynomial>& products,
                                const GroebnerBasis& basis) {
  ReducedIdentity out;
  out.sigma = divide(sigma, basis).remainder();
  for (const auto& p : products) {
    if (p.ambient() != sigma.ambient()) throw DimensionError("reduce_identity: ambient dimensions differ");
    out.products.push_back(divide(p, basis).remainder());
  }
  return out;
}

ReconstructionError::ReconstructionError(Polynomial residual)
    : std::runtime_error("reduced identity does not hold; residual " + to_string(residual)),
      residual_(std::move(residual)) {}

std::vector<Polynomial> reconstruct_proof(const Polynomial& r, const Polynomial& sigma,
                                          const std::vector<EqualityTerm>& equality_products,
                                          const GroebnerBasis& basis) {
  Polynomial rhs = sigma;
  for (const auto& t : equality_products) rhs += t.multiplier * t.constraint;
  DivisionResult target = divide(r, basis);
  DivisionResult proof = divide(rhs, basis);
  Polynomial residual = target.remainder() - proof.remainder();
  if (!residual.is_zero()) throw ReconstructionError(std::move(residual));
  std::vector<Polynomial> g;
  for (std::size_t i = 0; i < basis.size(); ++i) g.push_back(target.quotients()[i] - proof.quotients()[i]);
  return g;
}

std::size_t count_nonzero_s_pair_remainders(const GroebnerBasis& basis) {
  std::size_t bad = 0;
  const std::size_t n = basis.ambient();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const Monomial& a = basis.leading(i);
      const Monomial& b = basis.leading(j);
      std::vector<std::uint32_t> l(n);
      bool coprime = true;
      for (std::size_t k = 0; k < n; ++k) {
        l[k] = std::max(a[k], b[k]);
        if (a[k] && b[k]) coprime = false;
      }
      if (coprime) continue;  // Buchberger's first criterion
      const Monomial lcm(std::move(l));
      Polynomial s = basis[i].times_monomial(a.quotient_of(lcm), 1 / basis[i].leading_coefficient()) -
                     basis[j].times_monomial(b.quotient_of(lcm), 1 / basis[j].leading_coefficient());
      if (!divide_raw(s, basis, false).second.is_zero()) ++bad;
    }
  return bad;
}

}  // namespace sosym
