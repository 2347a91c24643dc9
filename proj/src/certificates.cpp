#include "sosym/certificates.hpp"

#include <algorithm>
#include <map>

#include "sosym/errors.hpp"

namespace sosym {

std::string to_string(CertificateMode mode) {
  return mode == CertificateMode::normal_form ? "normal-form" : "general";
}

CertificateMode parse_certificate_mode(const std::string& text) {
  if (text == "general") return CertificateMode::general;
  if (text == "normal-form") return CertificateMode::normal_form;
  throw InvalidInput("unknown certificate mode '" + text + "'");
}

std::string to_string(VerificationCheck check) {
  switch (check) {
    case VerificationCheck::dimension: return "dimension";
    case VerificationCheck::identity: return "identity";
    case VerificationCheck::psd: return "psd";
    case VerificationCheck::degree: return "degree";
    case VerificationCheck::normal_form: return "normal-form";
  }
  return "unknown";
}

Polynomial EqualityUse::product() const {
  return squared ? multiplier * constraint * constraint : multiplier * constraint;
}

int EqualityUse::degree() const {
  if (multiplier.is_zero() || constraint.is_zero()) return -1;
  return multiplier.degree() + constraint.degree() * (squared ? 2 : 1);
}

Polynomial expand(const SosCertificate& cert) {
  Polynomial total = cert.sigma.to_polynomial();
  for (const auto& e : cert.equalities) total += e.product();
  for (const auto& g : cert.groebner) total += g.product();
  return total;
}

VerificationOutcome verify(const SosCertificate& cert) {
  VerificationOutcome out;
  auto fail = [&](VerificationCheck c, std::string message) {
    out.accepted = false;
    out.failed.push_back(c);
    out.messages.push_back(std::move(message));
  };

  const std::size_t n = cert.ambient();
  bool shapes_ok = cert.sigma.basis.ambient() == n && cert.sigma.entries.rows() == cert.sigma.size() &&
                   cert.sigma.entries.cols() == cert.sigma.size();
  for (const auto& e : cert.equalities)
    shapes_ok = shapes_ok && e.constraint.ambient() == n && e.multiplier.ambient() == n;
  for (const auto& g : cert.groebner)
    shapes_ok = shapes_ok && g.generator.ambient() == n && g.multiplier.ambient() == n;
  if (!shapes_ok) {
    fail(VerificationCheck::dimension, "components live in different ambient dimensions");
    return out;
  }

  Polynomial residual = cert.target - expand(cert);
  if (!residual.is_zero()) {
    fail(VerificationCheck::identity, "expanded identity differs from target by " + to_string(residual));
    out.residual = std::move(residual);
  }

  if (!cert.sigma.entries.is_symmetric()) {
    fail(VerificationCheck::psd, "sigma Gram matrix is not symmetric");
  } else {
    LdltResult ldl = ldlt_psd(cert.sigma.entries);
    if (!ldl.psd) {
      fail(VerificationCheck::psd, "sigma Gram matrix is not positive semidefinite");
      out.psd_witness = std::move(ldl.witness);
    }
  }

  const int bound = cert.degree_bound;
  if (cert.sigma.to_polynomial().degree() > bound)
    fail(VerificationCheck::degree, "sigma exceeds the degree bound " + std::to_string(bound));
  for (std::size_t i = 0; i < cert.equalities.size(); ++i)
    if (cert.equalities[i].degree() > bound)
      fail(VerificationCheck::degree, "equality term " + std::to_string(i) + " exceeds the degree bound");
  for (std::size_t i = 0; i < cert.groebner.size(); ++i) {
    const auto& g = cert.groebner[i];
    if (!g.multiplier.is_zero() && g.multiplier.degree() + g.generator.degree() > bound)
      fail(VerificationCheck::degree, "Groebner term " + std::to_string(i) + " exceeds the degree bound");
  }

  if (cert.mode == CertificateMode::normal_form)
    for (std::size_t i = 0; i < cert.equalities.size(); ++i) {
      const auto& e = cert.equalities[i];
      if (!e.squared || !e.multiplier.is_constant())
        fail(VerificationCheck::normal_form,
             "equality term " + std::to_string(i) + " is not a scalar multiple of a squared constraint");
    }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct BitCounter {
  BitSizeReport report;
  void add(const Rational& q) {
    if (q == 0) return;
    const std::size_t num = bit_length(abs(q.get_num()));
    const std::size_t den = bit_length(q.get_den());
    report.max_numerator_bits = std::max(report.max_numerator_bits, num);
    report.max_denominator_bits = std::max(report.max_denominator_bits, den);
    report.max_coefficient_bits = std::max(report.max_coefficient_bits, num + den);
    report.total_bits += num + den;
    ++report.coefficient_count;
  }
  void add(const Polynomial& p) {
    for (const auto& [m, c] : p.terms()) add(c);
  }
};

}  // namespace

BitSizeReport bit_size(const SosCertificate& cert) {
  BitCounter counter;
  counter.add(cert.target);
  for (std::size_t i = 0; i < cert.sigma.size(); ++i)
    for (std::size_t j = i; j < cert.sigma.size(); ++j) counter.add(cert.sigma.entries(i, j));
  for (const auto& e : cert.equalities) counter.add(e.multiplier);
  for (const auto& g : cert.groebner) counter.add(g.multiplier);
  counter.report.sigma_coefficient_norm = coefficient_norm(cert.sigma.to_polynomial());
  return counter.report;
}

std::vector<WeightedSquare> explicit_squares(const GramMatrix& gram) {
  LdltResult ldl = ldlt_psd(gram.entries);
  if (!ldl.psd) throw InvalidInput("Gram matrix is not positive semidefinite");
  std::vector<WeightedSquare> out;
  const std::size_t n = gram.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (ldl.diagonal[k] == 0) continue;
    Polynomial root(gram.basis.ambient());
    for (std::size_t i = k; i < n; ++i)
      if (ldl.lower(i, k) != 0) root.add_term(gram.basis[ldl.permutation[i]], ldl.lower(i, k));
    out.push_back({ldl.diagonal[k], std::move(root)});
  }
  return out;
}

GramMatrix pad_gram(const GramMatrix& gram, std::uint32_t degree) {
  if (degree < gram.basis.degree()) throw DimensionError("cannot pad a Gram matrix to a smaller basis");
  if (degree == gram.basis.degree()) return gram;
  GramMatrix out{MonomialBasis(gram.basis.ambient(), degree)};
  std::vector<std::size_t> where(gram.size());
  for (std::size_t i = 0; i < gram.size(); ++i) where[i] = out.basis.index_of(gram.basis[i]);
  for (std::size_t i = 0; i < gram.size(); ++i)
    for (std::size_t j = 0; j < gram.size(); ++j) out.entries(where[i], where[j]) = gram.entries(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// Certificate algebra used by the order-unit construction.

namespace {

GramMatrix empty_gram(std::size_t n) { return GramMatrix(MonomialBasis(n, 0)); }

SosCertificate zero_certificate(std::size_t n) { return SosCertificate(Polynomial(n), empty_gram(n)); }

void merge_terms(SosCertificate& c, bool drop_zero = true) {
  std::map<std::pair<Polynomial, bool>, Polynomial> eq;
  std::vector<std::pair<Polynomial, bool>> eq_order;
  for (auto& e : c.equalities) {
    auto key = std::make_pair(e.constraint, e.squared);
    auto [it, fresh] = eq.try_emplace(key, Polynomial(c.ambient()));
    if (fresh) eq_order.push_back(key);
    it->second += e.multiplier;
  }
  c.equalities.clear();
  for (const auto& key : eq_order)
    if (!drop_zero || !eq.at(key).is_zero()) c.equalities.push_back({key.first, eq.at(key), key.second});

  std::map<Polynomial, Polynomial> gb;
  std::vector<Polynomial> gb_order;
  for (auto& g : c.groebner) {
    auto [it, fresh] = gb.try_emplace(g.generator, Polynomial(c.ambient()));
    if (fresh) gb_order.push_back(g.generator);
    it->second += g.multiplier;
  }
  c.groebner.clear();
  for (const auto& gen : gb_order)
    if (!drop_zero || !gb.at(gen).is_zero()) c.groebner.push_back({gen, gb.at(gen)});
}

SosCertificate add(const SosCertificate& a, const SosCertificate& b) {
  const std::uint32_t deg = std::max(a.sigma.basis.degree(), b.sigma.basis.degree());
  SosCertificate out(a.target + b.target, pad_gram(a.sigma, deg));
  out.sigma.entries += pad_gram(b.sigma, deg).entries;
  out.equalities = a.equalities;
  out.equalities.insert(out.equalities.end(), b.equalities.begin(), b.equalities.end());
  out.groebner = a.groebner;
  out.groebner.insert(out.groebner.end(), b.groebner.begin(), b.groebner.end());
  out.degree_bound = std::max(a.degree_bound, b.degree_bound);
  merge_terms(out);
  return out;
}

SosCertificate scale(SosCertificate c, const Rational& factor) {
  if (factor < 0) throw std::logic_error("certificates only scale by nonnegative factors");
  c.target *= factor;
  c.sigma.entries *= factor;
  for (auto& e : c.equalities) e.multiplier *= factor;
  for (auto& g : c.groebner) g.multiplier *= factor;
  merge_terms(c);
  return c;
}

// Certificate for s^2 with sigma = v v^T.
SosCertificate square_of(const Polynomial& s) {
  const std::size_t n = s.ambient();
  const std::uint32_t deg = static_cast<std::uint32_t>(std::max(s.degree(), 0));
  SosCertificate out(s * s, GramMatrix(MonomialBasis(n, deg)));
  std::vector<std::pair<std::size_t, Rational>> v;
  for (const auto& [m, c] : s.terms()) v.emplace_back(out.sigma.basis.index_of(m), c);
  for (const auto& [i, ci] : v)
    for (const auto& [j, cj] : v) out.sigma.entries(i, j) += ci * cj;
  out.degree_bound = 2 * static_cast<int>(deg);
  return out;
}

SosCertificate constant_certificate(std::size_t n, const Rational& value) {
  if (value < 0) throw std::logic_error("negative constant is not a square");
  SosCertificate out(Polynomial(n, value), empty_gram(n));
  out.sigma.entries(0, 0) = value;
  return out;
}

// c * x^(2*shift)
SosCertificate times_square_monomial(const SosCertificate& c, const Monomial& shift) {
  const std::size_t n = c.ambient();
  const Polynomial factor(shift * shift);
  SosCertificate out(c.target * factor, GramMatrix(MonomialBasis(n, c.sigma.basis.degree() + shift.degree())));
  std::vector<std::size_t> where(c.sigma.size());
  for (std::size_t i = 0; i < c.sigma.size(); ++i) where[i] = out.sigma.basis.index_of(c.sigma.basis[i] * shift);
  for (std::size_t i = 0; i < c.sigma.size(); ++i)
    for (std::size_t j = 0; j < c.sigma.size(); ++j) out.sigma.entries(where[i], where[j]) = c.sigma.entries(i, j);
  for (const auto& e : c.equalities) out.equalities.push_back({e.constraint, e.multiplier * factor, e.squared});
  for (const auto& g : c.groebner) out.groebner.push_back({g.generator, g.multiplier * factor});
  out.degree_bound = c.degree_bound + 2 * static_cast<int>(shift.degree());
  return out;
}

struct UnitBound {
  Integer bound;        // N
  SosCertificate cert;  // certificate for N - m^2
};

class OrderUnitBuilder {
 public:
  OrderUnitBuilder(const SosCertificate& witness, Integer witness_bound)
      : witness_(witness), witness_bound_(std::move(witness_bound)), n_(witness.ambient()) {}

  // N - m^2 by induction on deg m.
  UnitBound square_bound(const Monomial& m) {
    if (auto it = memo_.find(m); it != memo_.end()) return it->second;
    UnitBound result = compute(m);
    memo_.emplace(m, result);
    return result;
  }

 private:
  UnitBound compute(const Monomial& m) {
    if (m.degree() == 0) return {Integer(1), zero_certificate(n_)};
    std::size_t i = 0;
    while (m[i] == 0) ++i;
    if (m.degree() == 1) {
      // N_k - x_i^2 = (N_k - sum_j x_j^2) + sum_{j != i} x_j^2
      SosCertificate c = witness_;
      for (std::size_t j = 0; j < n_; ++j)
        if (j != i) c = add(c, square_of(Polynomial::variable(n_, j)));
      return {witness_bound_, c};
    }
    // m^2 = x_i^2 m2^2:  N^2 - x_i^2 m2^2 = (N - m2^2) x_i^2 + N (N - x_i^2)
    const Monomial xi = Monomial::variable(n_, i);
    const Monomial m2 = xi.quotient_of(m);
    UnitBound inner = square_bound(m2);
    UnitBound base = square_bound(xi);
    const Integer bound = std::max(inner.bound, base.bound);
    SosCertificate lifted_inner = add(inner.cert, constant_certificate(n_, Rational(bound - inner.bound)));
    SosCertificate lifted_base = add(base.cert, constant_certificate(n_, Rational(bound - base.bound)));
    SosCertificate c = add(times_square_monomial(lifted_inner, xi), scale(lifted_base, Rational(bound)));
    return {bound * bound, c};
  }

  const SosCertificate& witness_;
  Integer witness_bound_;
  std::size_t n_;
  std::map<Monomial, UnitBound> memo_;
};

}  // namespace

SosCertificate order_unit_certificate(const SosCertificate& witness, const Monomial& m, unsigned d, int sign) {
  const std::size_t n = witness.ambient();
  if (m.ambient() != n) throw DimensionError("monomial and witness dimensions differ");
  if (sign == 0) throw std::invalid_argument("sign must be +1 or -1");
  if (m.degree() > 2 * d) throw InvalidInput("monomial degree exceeds 2d");

  // Witness must read N - sum x_i^2 with N a positive integer.
  Polynomial shape = witness.target;
  const Rational top = shape.constant_term();
  for (std::size_t i = 0; i < n; ++i) shape += Polynomial(Monomial::variable(n, i, 2));
  if (!shape.is_constant() || top <= 0 || top.get_den() != 1)
    throw InvalidInput("witness target must have the form N - sum x_i^2 with N a positive integer");
  if (!verify(witness)) throw InvalidInput("witness certificate fails verification");

  const int k = (witness.degree_bound + 1) / 2;
  const int bound = std::max(2 * (static_cast<int>(d) + k - 1), 0);
  const Polynomial mono(m);

  SosCertificate result = zero_certificate(n);
  if (m.degree() == 0) {
    // N' = 1: 1 + 1 = 2 and 1 - 1 = 0.
    result = sign > 0 ? constant_certificate(n, 2) : zero_certificate(n);
    result.target = Polynomial(n, 1) + (sign > 0 ? mono : -mono);
  } else {
    // m = m1 m2 with deg m1, deg m2 <= d.
    std::vector<std::uint32_t> e1(n, 0);
    std::uint32_t left = (m.degree() + 1) / 2;
    for (std::size_t i = 0; i < n && left > 0; ++i) {
      e1[i] = std::min(m[i], left);
      left -= e1[i];
    }
    const Monomial m1(std::move(e1));
    const Monomial m2 = m1.quotient_of(m);

    OrderUnitBuilder builder(witness, top.get_num());
    UnitBound b1 = builder.square_bound(m1);
    UnitBound b2 = builder.square_bound(m2);
    const Integer big = std::max(b1.bound, b2.bound);
    SosCertificate c1 = add(b1.cert, constant_certificate(n, Rational(big - b1.bound)));
    SosCertificate c2 = add(b2.cert, constant_certificate(n, Rational(big - b2.bound)));

    const Polynomial one(n, 1), p1(m1), p2(m2);
    // 2N + 3/2 + m1 m2 = 1/2[(1-m1)^2 + (1-m2)^2 + (1+m1+m2)^2 + 2(N-m1^2) + 2(N-m2^2)]
    // 2N + 3/2 - m1 m2 = 1/2[(1-m1)^2 + (1+m2)^2 + (1+m1-m2)^2 + 2(N-m1^2) + 2(N-m2^2)]
    const Polynomial s2 = sign > 0 ? one - p2 : one + p2;
    const Polynomial s3 = sign > 0 ? one + p1 + p2 : one + p1 - p2;
    SosCertificate sum = add(add(square_of(one - p1), square_of(s2)), square_of(s3));
    sum = add(sum, scale(c1, 2));
    sum = add(sum, scale(c2, 2));
    result = scale(sum, Rational(1, 2));
  }
  result.sigma = pad_gram(result.sigma, static_cast<std::uint32_t>(std::max(bound / 2, static_cast<int>(result.sigma.basis.degree()))));
  result.degree_bound = bound;
  result.mode = CertificateMode::general;
  merge_terms(result);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

// Redistributes multipliers q_j on distinct constraints p_j so that the new
// combination is the Reynolds average of sum q_j p_j (or q_j p_j^2).
std::vector<Polynomial> average_multipliers(const GroupSpec& g, const std::vector<Polynomial>& constraints,
                                            const std::vector<Polynomial>& multipliers) {
  const std::size_t count = constraints.size();
  if (count == 0) return {};
  SystemInvariance inv = is_invariant_system(g, constraints);
  if (!inv.invariant) throw InvalidInput("constraint list is not closed under the group action");

  const bool all_constant = std::all_of(multipliers.begin(), multipliers.end(),
                                        [](const Polynomial& q) { return q.is_constant(); });
  bool singleton_orbits = true;
  for (const auto& orbit : inv.orbits) singleton_orbits = singleton_orbits && orbit.size() == 1;

  std::vector<Polynomial> out(count, Polynomial(g.ambient()));
  if (all_constant) {
    // Constant multipliers: the average over an orbit is the orbit mean.
    for (const auto& orbit : inv.orbits) {
      Rational sum = 0;
      for (std::size_t j : orbit) sum += multipliers[j].constant_term();
      const Rational mean = sum / Rational(static_cast<long>(orbit.size()));
      for (std::size_t j : orbit) out[j] = Polynomial(g.ambient(), mean);
    }
    return out;
  }
  if (singleton_orbits) {
    for (std::size_t j = 0; j < count; ++j) out[j] = reynolds_poly(g, multipliers[j]);
    return out;
  }
  // q'_k = 1/|G| sum_g sum_{j : g.p_j = p_k} g.q_j
  std::map<Polynomial, std::size_t> index;
  for (std::size_t j = 0; j < count; ++j) index.emplace(constraints[j], j);
  for_each_element(g, [&](const Permutation& perm) {
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t k = index.at(act_on_polynomial(perm, constraints[j]));
      out[k] += act_on_polynomial(perm, multipliers[j]);
    }
  });
  const Rational inv_order = Rational(1) / Rational(g.order());
  for (auto& q : out) q *= inv_order;
  return out;
}

}  // namespace

SosCertificate symmetrize(const SosCertificate& cert, const GroupSpec& g) {
  if (g.ambient() != cert.ambient()) throw DimensionError("group and certificate dimensions differ");
  if (!is_invariant(g, cert.target)) throw InvalidInput("certificate target is not G-invariant");

  SosCertificate out(cert.target, reynolds_gram(g, cert.sigma));
  out.degree_bound = cert.degree_bound;
  out.mode = cert.mode;
  out.epsilon = cert.epsilon;

  SosCertificate merged = cert;
  merge_terms(merged, false);
  out.equalities = merged.equalities;
  for (bool squared : {false, true}) {
    std::vector<std::size_t> slots;
    std::vector<Polynomial> constraints, multipliers;
    for (std::size_t i = 0; i < merged.equalities.size(); ++i)
      if (merged.equalities[i].squared == squared) {
        slots.push_back(i);
        constraints.push_back(merged.equalities[i].constraint);
        multipliers.push_back(merged.equalities[i].multiplier);
      }
    std::vector<Polynomial> averaged = average_multipliers(g, constraints, multipliers);
    for (std::size_t j = 0; j < slots.size(); ++j) out.equalities[slots[j]].multiplier = averaged[j];
  }
  {
    std::vector<Polynomial> gens, multipliers;
    for (const auto& t : merged.groebner) {
      gens.push_back(t.generator);
      multipliers.push_back(t.multiplier);
    }
    std::vector<Polynomial> averaged = average_multipliers(g, gens, multipliers);
    for (std::size_t j = 0; j < gens.size(); ++j) out.groebner.push_back({gens[j], averaged[j]});
  }
  return out;
}

}  // namespace sosym
