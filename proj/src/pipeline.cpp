#include "sosym/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sosym/errors.hpp"
#include "sosym/numeric_linalg.hpp"

namespace sosym {

GroebnerBasis ProblemInstance::ideal_basis() const {
  if (domain_roots) return finite_domain_basis(variables, *domain_roots);
  return GroebnerBasis(variables, groebner, true);
}

unsigned ProblemInstance::domain_half_size() const {
  return domain_roots ? static_cast<unsigned>(domain_roots->size() / 2) : 1;
}

unsigned ProblemInstance::gram_degree() const {
  return refutation() ? degree + domain_half_size() - 1 : degree;
}

std::string to_string(PipelineStatus status) {
  switch (status) {
    case PipelineStatus::certified: return "certified";
    case PipelineStatus::no_certificate: return "no-certificate-at-degree";
    case PipelineStatus::rationalization_failed: return "rationalization-failed";
  }
  return "unknown";
}

namespace {

void check_shapes(const ProblemInstance& inst) {
  const std::size_t n = inst.variables;
  if (n == 0) throw InvalidInput("instance needs at least one variable");
  if (inst.group.ambient() != n) throw DimensionError("group acts on a different number of variables");
  for (const auto& p : inst.equalities)
    if (p.ambient() != n) throw DimensionError("equality has the wrong number of variables");
  for (const auto& p : inst.groebner)
    if (p.ambient() != n) throw DimensionError("Groebner generator has the wrong number of variables");
  if (inst.target && inst.target->ambient() != n) throw DimensionError("target has the wrong number of variables");
  if (inst.degree == 0) throw InvalidInput("degree must be at least 1");
  if (inst.epsilon < 0) throw InvalidInput("epsilon must be nonnegative");
}

std::vector<Polynomial> distinct(const std::vector<Polynomial>& polys) {
  std::vector<Polynomial> out;
  std::set<Polynomial> seen;
  for (const auto& p : polys)
    if (seen.insert(p).second) out.push_back(p);
  return out;
}

std::size_t merged_indicator_count(const PairOrbitTable& table) {
  std::size_t count = 0;
  for (std::size_t o = 0; o < table.size(); ++o) {
    const auto& [a, b] = table.representatives[o];
    if (table.orbit_of.at({b, a}) >= o) ++count;
  }
  return count;
}

// Coefficient matching: sum_k y_k columns[k] = rhs, one row per monomial,
// then exact row reduction to an equivalent full-rank system.
FeasibilitySystem assemble(std::vector<RationalMatrix> psd, const std::vector<Polynomial>& columns,
                           const Polynomial& rhs, std::vector<std::string> names, MonomialBasis basis) {
  std::map<Monomial, std::size_t, GrlexGreater> rows;
  auto note = [&](const Polynomial& p) {
    for (const auto& [m, c] : p.terms()) rows.try_emplace(m, 0);
  };
  for (const auto& c : columns) note(c);
  note(rhs);
  std::size_t r = 0;
  for (auto& [m, idx] : rows) idx = r++;

  RationalMatrix a(rows.size(), columns.size());
  RationalVector c(rows.size());
  for (std::size_t k = 0; k < columns.size(); ++k)
    for (const auto& [m, coeff] : columns[k].terms()) a(rows.at(m), k) = coeff;
  for (const auto& [m, coeff] : rhs.terms()) c[rows.at(m)] = coeff;

  FeasibilitySystem sys;
  sys.psd_matrices = std::move(psd);
  sys.variable_names = std::move(names);
  sys.basis = std::move(basis);
  if (auto compressed = compress_rows(a, c)) {
    sys.linear_map = std::move(compressed->first);
    sys.rhs = std::move(compressed->second);
  } else {
    sys.linear_map = std::move(a);
    sys.rhs = std::move(c);
  }
  return sys;
}

GramMatrix combine(const std::vector<GramMatrix>& indicators, const RationalVector& weights, const MonomialBasis& basis) {
  GramMatrix out(basis);
  for (std::size_t i = 0; i < indicators.size(); ++i)
    if (weights[i] != 0) out.entries += indicators[i].entries * weights[i];
  return out;
}

void finish_failure(PipelineResult& result, const SolveResult& solve, const ProblemInstance& inst) {
  result.status = PipelineStatus::no_certificate;
  if (solve.affine_inconsistent) {
    result.evidence = "exact (coefficient equations inconsistent)";
  } else if (inst.refutation()) {
    result.dual_witness = find_pseudoexpectation(inst, inst.gram_degree());
    result.evidence = result.dual_witness ? "dual witness, numeric" : "numeric evidence";
  } else {
    result.evidence = "numeric evidence";
  }
  result.message = solve.message;
}

void finish_certificate(PipelineResult& result, SosCertificate cert) {
  VerificationOutcome outcome = verify(cert);
  if (!outcome) {
    result.status = PipelineStatus::rationalization_failed;
    result.message = "assembled certificate failed exact verification";
    for (const auto& m : outcome.messages) result.message += "; " + m;
    return;
  }
  result.status = PipelineStatus::certified;
  result.evidence = "exact";
  result.bits = bit_size(cert);
  result.certificate = std::move(cert);
  result.message = "certificate verified exactly";
}

}  // namespace

// ---------------------------------------------------------------------------

VariableCountReport variable_count_report(const ProblemInstance& inst) {
  check_shapes(inst);
  VariableCountReport rep;
  const std::size_t n = inst.variables;
  const unsigned e = inst.gram_degree();
  rep.gram_basis_size = binomial(static_cast<unsigned>(n + e), e).get_ui();
  rep.pair_count = rep.gram_basis_size * rep.gram_basis_size;
  const PairOrbitTable pairs = enumerate_pair_orbits(inst.group, e);
  rep.pair_orbits = pairs.size();
  rep.indicator_count = merged_indicator_count(pairs);

  const std::vector<Polynomial> constraints = distinct(inst.equalities);
  if (inst.refutation()) {
    SystemInvariance inv = is_invariant_system(inst.group, constraints);
    rep.constraint_orbits = inv.invariant ? inv.orbits.size() : constraints.size();
    rep.multiplier_variables_before = constraints.size();
    rep.multiplier_variables_after = rep.constraint_orbits;
  } else {
    rep.constraint_orbits = constraints.size();
    for (const auto& p : constraints) {
      const int room = 2 * static_cast<int>(inst.degree) - p.degree();
      if (room < 0) continue;
      rep.multiplier_variables_before += binomial(static_cast<unsigned>(n + room), static_cast<unsigned>(room)).get_ui();
      rep.multiplier_variables_after += enumerate_monomial_orbits(inst.group, static_cast<std::uint32_t>(room)).size();
    }
  }
  rep.before = rep.gram_basis_size * (rep.gram_basis_size + 1) / 2 + rep.multiplier_variables_before;
  rep.after = rep.indicator_count + rep.multiplier_variables_after;
  return rep;
}

// ---------------------------------------------------------------------------

PipelineResult refute_invariant_system(const ProblemInstance& inst) {
  check_shapes(inst);
  if (!inst.refutation()) throw InvalidInput("refutation requested for an instance with a target");
  if (!inst.domain_roots) throw InvalidInput("refutation mode needs a finite domain");
  const std::vector<Polynomial> constraints = distinct(inst.equalities);
  SystemInvariance inv = is_invariant_system(inst.group, constraints);
  if (!inv.invariant) throw InvalidInput("equality system is not closed under the group action");

  const std::size_t n = inst.variables;
  const unsigned e = inst.gram_degree();
  const GroebnerBasis ideal = inst.ideal_basis();
  NormalFormCache nf(ideal);
  MonomialBasis basis(n, e);
  const IndicatorSet indicators = orbit_indicator_matrices(enumerate_pair_orbits(inst.group, e), basis);

  std::vector<RationalMatrix> psd;
  std::vector<Polynomial> columns;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < indicators.matrices.size(); ++i) {
    psd.push_back(indicators.matrices[i].entries);
    columns.push_back(nf.of(indicators.matrices[i].to_polynomial()));
    names.push_back("a" + std::to_string(i + 1));
  }
  std::vector<std::vector<std::size_t>> used_orbits;
  for (const auto& orbit : inv.orbits) {
    if (2 * constraints[orbit.front()].degree() > 2 * static_cast<int>(e)) continue;
    Polynomial squares(n);
    for (std::size_t j : orbit) squares += constraints[j] * constraints[j];
    columns.push_back(nf.of(squares));
    names.push_back("c" + std::to_string(used_orbits.size() + 1));
    used_orbits.push_back(orbit);
  }

  PipelineResult result;
  result.counts = variable_count_report(inst);
  result.system = assemble(std::move(psd), columns, Polynomial(n, -1), std::move(names), basis);

  SolveResult solve = solve_feasibility(result.system, inst.solver);
  if (!solve.feasible()) {
    finish_failure(result, solve, inst);
    return result;
  }
  RationalizeResult exact = rationalize(*solve.solution, result.system, inst.denominator_bound);
  if (!exact.ok()) {
    result.status = PipelineStatus::rationalization_failed;
    result.evidence = "numeric evidence";
    result.message = "rationalization failed (" + to_string(exact.failure) + "): " + exact.message;
    return result;
  }

  const RationalVector& y = *exact.values;
  const std::size_t k2 = indicators.matrices.size();
  SosCertificate cert(Polynomial(n, -1), combine(indicators.matrices, y, basis));
  cert.mode = CertificateMode::normal_form;
  cert.degree_bound = 2 * static_cast<int>(e);
  std::vector<EqualityTerm> products;
  for (std::size_t j = 0; j < used_orbits.size(); ++j) {
    const Rational& scalar = y[k2 + j];
    for (std::size_t idx : used_orbits[j]) {
      cert.equalities.push_back({constraints[idx], Polynomial(n, scalar), true});
      products.push_back({Polynomial(n, scalar), constraints[idx] * constraints[idx]});
    }
  }
  std::vector<Polynomial> g = reconstruct_proof(cert.target, cert.sigma.to_polynomial(), products, ideal);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g[i].is_zero()) cert.groebner.push_back({ideal[i], g[i]});
  finish_certificate(result, std::move(cert));
  return result;
}

PipelineResult prove_invariant(const ProblemInstance& inst) {
  check_shapes(inst);
  if (inst.refutation()) throw InvalidInput("prove mode needs a target polynomial");
  const GroupSpec& group = inst.group;
  const std::vector<Polynomial> constraints = distinct(inst.equalities);
  for (std::size_t j = 0; j < constraints.size(); ++j)
    if (!is_invariant(group, constraints[j]))
      throw InvalidInput("equality " + to_string(constraints[j]) + " is not G-invariant");
  if (!is_invariant(group, *inst.target)) throw InvalidInput("target is not G-invariant");
  const GroebnerBasis ideal = inst.ideal_basis();
  if (!is_invariant_system(group, ideal.generators()).invariant)
    throw InvalidInput("Groebner part is not closed under the group action");
  if (count_nonzero_s_pair_remainders(ideal) > 0)
    throw InvalidInput("Groebner part fails the S-pair check; supply a Groebner basis");

  const std::size_t n = inst.variables;
  const unsigned d = inst.degree;
  const Polynomial shifted = *inst.target + Polynomial(n, inst.epsilon);
  NormalFormCache nf(ideal);
  const Polynomial reduced_target = nf.of(shifted);
  MonomialBasis basis(n, d);

  PipelineResult result;
  result.counts = variable_count_report(inst);

  SosCertificate cert(shifted, GramMatrix(basis));
  cert.degree_bound = 2 * static_cast<int>(d);
  cert.epsilon = inst.epsilon;
  std::vector<EqualityTerm> products;

  if (reduced_target.is_constant() && reduced_target.constant_term() >= 0) {
    // A nonnegative constant needs no search.
    cert.sigma.entries(0, 0) = reduced_target.constant_term();
    result.system.basis = basis;
  } else {
    const IndicatorSet indicators = orbit_indicator_matrices(enumerate_pair_orbits(group, d), basis);
    std::vector<RationalMatrix> psd;
    std::vector<Polynomial> columns;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < indicators.matrices.size(); ++i) {
      psd.push_back(indicators.matrices[i].entries);
      columns.push_back(nf.of(indicators.matrices[i].to_polynomial()));
      names.push_back("a" + std::to_string(i + 1));
    }
    // Invariant multipliers: combinations of monomial-orbit sums.
    struct MultiplierColumn {
      std::size_t constraint;
      Polynomial orbit_polynomial;
    };
    std::vector<MultiplierColumn> multiplier_columns;
    for (std::size_t j = 0; j < constraints.size(); ++j) {
      const int room = 2 * static_cast<int>(d) - constraints[j].degree();
      if (room < 0 || constraints[j].is_zero()) continue;
      const MonomialOrbitTable orbits = enumerate_monomial_orbits(group, static_cast<std::uint32_t>(room));
      for (const auto& rep : orbits.representatives) {
        Polynomial q = orbit_sum(group, rep);
        columns.push_back(nf.of(q * constraints[j]));
        names.push_back("lambda" + std::to_string(j + 1) + "[" + to_string(rep) + "]");
        multiplier_columns.push_back({j, std::move(q)});
      }
    }
    result.system = assemble(std::move(psd), columns, reduced_target, std::move(names), basis);

    SolveResult solve = solve_feasibility(result.system, inst.solver);
    if (!solve.feasible()) {
      finish_failure(result, solve, inst);
      return result;
    }
    RationalizeResult exact = rationalize(*solve.solution, result.system, inst.denominator_bound);
    if (!exact.ok()) {
      result.status = PipelineStatus::rationalization_failed;
      result.evidence = "numeric evidence";
      result.message = "rationalization failed (" + to_string(exact.failure) + "): " + exact.message;
      return result;
    }
    const RationalVector& y = *exact.values;
    const std::size_t k2 = indicators.matrices.size();
    cert.sigma = combine(indicators.matrices, y, basis);
    std::vector<Polynomial> lambda(constraints.size(), Polynomial(n));
    for (std::size_t k = 0; k < multiplier_columns.size(); ++k)
      if (y[k2 + k] != 0) lambda[multiplier_columns[k].constraint] += multiplier_columns[k].orbit_polynomial * y[k2 + k];
    for (std::size_t j = 0; j < constraints.size(); ++j)
      if (!lambda[j].is_zero()) cert.equalities.push_back({constraints[j], lambda[j], false});
  }
  for (const auto& e : cert.equalities) products.push_back({e.multiplier, e.constraint});
  std::vector<Polynomial> g = reconstruct_proof(cert.target, cert.sigma.to_polynomial(), products, ideal);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g[i].is_zero()) cert.groebner.push_back({ideal[i], g[i]});
  cert.degree_bound = std::max(cert.degree_bound, shifted.degree());
  finish_certificate(result, std::move(cert));
  return result;
}

PipelineResult search_degrees(ProblemInstance inst, unsigned max_degree) {
  PipelineResult last;
  for (unsigned d = 1; d <= max_degree; ++d) {
    inst.degree = d;
    last = inst.refutation() ? refute_invariant_system(inst) : prove_invariant(inst);
    if (last.certified()) return last;
  }
  return last;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Polynomial> moment_constraints(const ProblemInstance& inst) {
  std::vector<Polynomial> all = inst.equalities;
  const GroebnerBasis ideal = inst.ideal_basis();
  for (const auto& g : ideal.generators()) all.push_back(g);
  return distinct(all);
}

GroupSpec moment_group(const ProblemInstance& inst) {
  if (is_invariant_system(inst.group, moment_constraints(inst)).invariant) return inst.group;
  return GroupSpec::trivial(inst.variables);
}

struct MomentSystem {
  MonomialOrbitTable orbits;
  FeasibilitySystem system;
};

MomentSystem build_moment_system(const ProblemInstance& inst, const GroupSpec& group, unsigned half) {
  const std::size_t n = inst.variables;
  MomentSystem ms;
  ms.orbits = enumerate_monomial_orbits(group, 2 * half);
  const std::size_t vars = ms.orbits.size();
  MonomialBasis basis(n, half);

  std::vector<RationalMatrix> psd(vars, RationalMatrix(basis.size(), basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      psd[ms.orbits.orbit_of.at(basis[i] * basis[j])](i, j) = 1;

  std::vector<RationalVector> rows;
  RationalVector rhs;
  RationalVector unit(vars);
  unit[ms.orbits.orbit_of.at(Monomial(n))] = 1;
  rows.push_back(unit);
  rhs.push_back(1);
  for (const auto& p : moment_constraints(inst)) {
    const int room = 2 * static_cast<int>(half) - p.degree();
    if (room < 0) continue;
    for (const auto& m : monomials_up_to(n, static_cast<std::uint32_t>(room))) {
      RationalVector row(vars);
      for (const auto& [t, c] : p.terms()) row[ms.orbits.orbit_of.at(t * m)] += c;
      rows.push_back(std::move(row));
      rhs.push_back(0);
    }
  }
  RationalMatrix a(rows.size(), vars);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < vars; ++c) a(r, c) = rows[r][c];
  ms.system.psd_matrices = std::move(psd);
  ms.system.basis = basis;
  for (const auto& rep : ms.orbits.representatives) ms.system.variable_names.push_back("L[" + to_string(rep) + "]");
  if (auto compressed = compress_rows(a, rhs)) {
    ms.system.linear_map = std::move(compressed->first);
    ms.system.rhs = std::move(compressed->second);
  } else {
    ms.system.linear_map = std::move(a);
    ms.system.rhs = std::move(rhs);
  }
  return ms;
}

}  // namespace

double Pseudoexpectation::value(const Monomial& m) const {
  const Monomial key = canonical_monomial(group, m);
  for (std::size_t i = 0; i < representatives.size(); ++i)
    if (representatives[i] == key) return moments[i];
  throw std::out_of_range("monomial degree exceeds the pseudoexpectation degree");
}

std::optional<Pseudoexpectation> find_pseudoexpectation(const ProblemInstance& inst, unsigned half_degree) {
  check_shapes(inst);
  const GroupSpec group = moment_group(inst);
  MomentSystem ms = build_moment_system(inst, group, half_degree);
  SolverOptions options = inst.solver;
  SolveResult solve = solve_feasibility(ms.system, options);
  if (!solve.feasible()) return std::nullopt;

  Pseudoexpectation pe;
  pe.group = group;
  pe.half_degree = half_degree;
  pe.representatives = ms.orbits.representatives;
  pe.moments = solve.solution->values;
  pe.label = "numeric";
  RationalizeResult exact = rationalize(*solve.solution, ms.system, inst.denominator_bound);
  if (exact.ok()) {
    pe.exact_moments = *exact.values;
    pe.label = "numeric (exact rounding verified)";
  }
  return pe;
}

PseudoexpectationCheck check_pseudoexpectation(const ProblemInstance& inst, const Pseudoexpectation& pe) {
  check_shapes(inst);
  MomentSystem ms = build_moment_system(inst, pe.group, pe.half_degree);
  if (ms.orbits.representatives != pe.representatives)
    throw InvalidInput("pseudoexpectation moments do not match the orbit table");
  PseudoexpectationCheck out;
  out.normalization_error = std::abs(pe.value(Monomial(inst.variables)) - 1.0);

  // Raw (uncompressed) linear conditions are re-evaluated directly.
  const std::size_t n = inst.variables;
  for (const auto& p : moment_constraints(inst)) {
    const int room = 2 * static_cast<int>(pe.half_degree) - p.degree();
    if (room < 0) continue;
    for (const auto& m : monomials_up_to(n, static_cast<std::uint32_t>(room))) {
      double acc = 0.0;
      for (const auto& [t, c] : p.terms()) acc += c.get_d() * pe.value(t * m);
      out.max_violation = std::max(out.max_violation, std::abs(acc));
    }
  }
  const NumericSolution eval = evaluate_solution(ms.system, pe.moments);
  out.min_eigenvalue = eval.min_eigenvalue;

  if (pe.exact_moments) {
    const RationalVector& y = *pe.exact_moments;
    RationalVector lhs = ms.system.linear_map * y;
    out.exact_ok = lhs == ms.system.rhs && ldlt_psd(ms.system.psd_combination(y)).psd;
  }
  return out;
}

std::optional<std::vector<Rational>> find_satisfying_point(const ProblemInstance& inst, std::size_t cap) {
  check_shapes(inst);
  if (!inst.domain_roots) throw InvalidInput("point search needs a finite domain");
  const auto& roots = *inst.domain_roots;
  const std::size_t n = inst.variables;
  double total = std::pow(static_cast<double>(roots.size()), static_cast<double>(n));
  if (total > static_cast<double>(cap)) throw ResourceError("domain enumeration exceeds cap");
  std::vector<std::size_t> idx(n, 0);
  std::vector<Rational> point(n, roots[0]);
  while (true) {
    bool ok = true;
    for (const auto& p : inst.equalities)
      if (p.evaluate(point) != 0) {
        ok = false;
        break;
      }
    for (const auto& p : inst.groebner)
      if (ok && p.evaluate(point) != 0) ok = false;
    if (ok) return point;
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < roots.size()) {
        point[i] = roots[idx[i]];
        break;
      }
      idx[i] = 0;
      point[i] = roots[0];
    }
    if (i == n) return std::nullopt;
  }
}

Pseudoexpectation point_evaluation_pseudoexpectation(const ProblemInstance& inst, const std::vector<Rational>& point,
                                                     unsigned half_degree) {
  check_shapes(inst);
  if (point.size() != inst.variables) throw DimensionError("point has the wrong number of coordinates");
  const GroupSpec group = moment_group(inst);
  const MonomialOrbitTable orbits = enumerate_monomial_orbits(group, 2 * half_degree);

  // Orbit of the point under coordinate permutations inside each block.
  std::vector<std::vector<Rational>> images;
  std::vector<Rational> work = point;
  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == group.block_count()) {
      images.push_back(work);
      if (images.size() > 1'000'000) throw ResourceError("point orbit exceeds cap");
      return;
    }
    const auto first = work.begin() + static_cast<std::ptrdiff_t>(group.block_start(b));
    const auto last = first + static_cast<std::ptrdiff_t>(group.block_sizes()[b]);
    std::sort(first, last);
    do {
      self(self, b + 1);
    } while (std::next_permutation(first, last));
  };
  rec(rec, 0);

  Pseudoexpectation pe;
  pe.group = group;
  pe.half_degree = half_degree;
  pe.representatives = orbits.representatives;
  std::vector<Rational> exact;
  for (const auto& rep : orbits.representatives) {
    const Polynomial mono(rep);
    Rational sum = 0;
    for (const auto& x : images) sum += mono.evaluate(x);
    exact.push_back(sum / Rational(static_cast<long>(images.size())));
  }
  for (const auto& q : exact) pe.moments.push_back(q.get_d());
  pe.exact_moments = std::move(exact);
  pe.label = "point evaluation (exact)";
  return pe;
}

}  // namespace sosym
