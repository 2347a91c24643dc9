#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sosym/certificates.hpp"
#include "sosym/groebner.hpp"
#include "sosym/sdp.hpp"
#include "sosym/symmetry.hpp"

namespace sosym {

// A polynomial system over n variables with a block-symmetric group. The
// ideal part is either a finite domain (roots, giving the generators
// prod_j (x_i - root_j)) or an explicit Groebner basis. A missing target means
// refutation.
struct ProblemInstance {
  std::size_t variables = 0;
  GroupSpec group;
  std::vector<Polynomial> equalities;
  std::optional<std::vector<Rational>> domain_roots;
  std::vector<Polynomial> groebner;
  std::optional<Polynomial> target;
  unsigned degree = 1;  // d: sigma uses monomials of degree <= d (prove) or d + k - 1 (refute)
  Rational epsilon = Rational(1, 1 << 20);
  SolverOptions solver;
  Integer denominator_bound = Integer(1) << 32;

  bool refutation() const { return !target.has_value(); }
  GroebnerBasis ideal_basis() const;
  // k with 2k domain roots; 1 when there is no finite domain.
  unsigned domain_half_size() const;
  // Degree of the monomial basis indexing sigma's Gram matrix.
  unsigned gram_degree() const;
};

struct VariableCountReport {
  std::size_t gram_basis_size = 0;      // |W|
  std::size_t pair_count = 0;           // |Y| = |W|^2
  std::size_t pair_orbits = 0;          // raw orbit count on Y
  std::size_t indicator_count = 0;      // pair orbits merged with transposes
  std::size_t constraint_orbits = 0;    // z (refute) or m (prove)
  std::size_t multiplier_variables_before = 0;
  std::size_t multiplier_variables_after = 0;
  std::size_t before = 0;  // |W|(|W|+1)/2 + multiplier_variables_before
  std::size_t after = 0;   // indicator_count + multiplier_variables_after
};

VariableCountReport variable_count_report(const ProblemInstance& inst);

// Moment functional constant on monomial orbits of degree <= 2 * half_degree.
struct Pseudoexpectation {
  GroupSpec group;
  unsigned half_degree = 0;
  std::vector<Monomial> representatives;
  std::vector<double> moments;
  std::optional<std::vector<Rational>> exact_moments;
  std::string label;

  // L(x^m) for any m of degree <= 2 * half_degree.
  double value(const Monomial& m) const;
};

struct PseudoexpectationCheck {
  double normalization_error = 0.0;  // |L(1) - 1|
  double max_violation = 0.0;        // max |L(p m)| over constraints p, deg(p m) <= 2d
  double min_eigenvalue = 0.0;       // moment matrix
  bool exact_ok = false;             // exact moments pass every check exactly
  bool passes(double tolerance) const {
    return normalization_error <= tolerance && max_violation <= tolerance && min_eigenvalue >= -tolerance;
  }
};

PseudoexpectationCheck check_pseudoexpectation(const ProblemInstance& inst, const Pseudoexpectation& pe);

// Numeric search over orbit-constant moments; nullopt when the solver finds no
// feasible point.
std::optional<Pseudoexpectation> find_pseudoexpectation(const ProblemInstance& inst, unsigned half_degree);

// Exhaustive search over domain^n for a common zero of the equalities (and the
// Groebner generators). Finite domains only; throws ResourceError past `cap`.
std::optional<std::vector<Rational>> find_satisfying_point(const ProblemInstance& inst,
                                                           std::size_t cap = 1'000'000);

// Average of point evaluations over the group orbit of `point`; exact.
Pseudoexpectation point_evaluation_pseudoexpectation(const ProblemInstance& inst, const std::vector<Rational>& point,
                                                     unsigned half_degree);

enum class PipelineStatus { certified, no_certificate, rationalization_failed };
std::string to_string(PipelineStatus status);

struct PipelineResult {
  PipelineStatus status = PipelineStatus::no_certificate;
  std::optional<SosCertificate> certificate;
  std::optional<BitSizeReport> bits;
  VariableCountReport counts;
  FeasibilitySystem system;
  std::optional<Pseudoexpectation> dual_witness;
  std::string evidence;  // "numeric evidence" / "dual witness, numeric" / "exact"
  std::string message;

  bool certified() const { return status == PipelineStatus::certified; }
};

// Throws InvalidInput when the instance breaks the mode's hypotheses.
PipelineResult prove_invariant(const ProblemInstance& inst);
PipelineResult refute_invariant_system(const ProblemInstance& inst);

// Runs the mode's pipeline for d = 1..max_degree and stops at the first
// certificate; returns the last result otherwise.
PipelineResult search_degrees(ProblemInstance inst, unsigned max_degree);

}  // namespace sosym
