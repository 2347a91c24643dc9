#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sosym/exact_linalg.hpp"
#include "sosym/poly.hpp"

namespace sosym {

// Find y = (a, b) with sum_{i<k2} a_i Q_i PSD and A y = c.
struct FeasibilitySystem {
  std::vector<RationalMatrix> psd_matrices;  // Q_1..Q_k2, all N x N symmetric
  RationalMatrix linear_map;                 // k1 x (k2 + k3)
  RationalVector rhs;                        // length k1
  std::vector<std::string> variable_names;   // k2 + k3 labels (optional)
  std::optional<MonomialBasis> basis;        // indexes the rows of every Q_i, when known

  std::size_t constraint_count() const { return linear_map.rows(); }  // k1
  std::size_t psd_count() const { return psd_matrices.size(); }       // k2
  std::size_t free_count() const;                                     // k3
  std::size_t variable_count() const { return linear_map.cols(); }    // k2 + k3
  std::size_t matrix_size() const;                                    // N

  // Throws DimensionError on inconsistent shapes.
  void validate() const;

  // sum_i a_i Q_i for the first k2 entries of y.
  RationalMatrix psd_combination(const RationalVector& y) const;
};

// Sparse text dump:
//   k1 k2 k3 N
//   Q i row col value     (1-based, upper triangle, nonzeros)
//   A row col value
//   c row value
void write_sparse(std::ostream& out, const FeasibilitySystem& sys);

// F_0 + sum y_i F_i PSD, each F of size N + 2 k1: upper-left block Q_i (or 0),
// then one 2x2 antidiagonal block per linear constraint.
struct BlockEncoding {
  std::size_t matrix_size = 0;  // N
  std::size_t constraint_count = 0;  // k1
  std::vector<RationalMatrix> blocks;  // F_0 .. F_{k2+k3}

  std::size_t size() const { return matrix_size + 2 * constraint_count; }
  RationalMatrix evaluate(const RationalVector& y) const;
};

BlockEncoding block_diagonal_encode(const FeasibilitySystem& sys);

// Feasibility system whose single PSD block is an encoding: no linear part.
FeasibilitySystem as_feasibility_system(const BlockEncoding& enc);

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iters = 500;
  std::uint64_t seed = 0;
  std::size_t variable_cap = 512;
  // Stop early once sum a_i Q_i has minimum eigenvalue at least this value.
  double interior_target = 1.0;
};

struct NumericSolution {
  std::vector<double> values;  // (a, b)
  double min_eigenvalue = 0.0;
  double linear_residual = 0.0;  // max-norm of A y - c
  int iterations = 0;
};

enum class SolveStatus { feasible, infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<NumericSolution> solution;  // set when feasible
  // Best point seen when infeasible (may be empty if the affine part is
  // already inconsistent).
  std::optional<NumericSolution> best;
  bool affine_inconsistent = false;  // exact: A y = c has no solution at all
  std::string message;

  bool feasible() const { return status == SolveStatus::feasible; }
};

// Throws ResourceError if k2 + k3 > options.variable_cap and NumericError on
// non-finite arithmetic.
SolveResult solve_feasibility(const FeasibilitySystem& sys, const SolverOptions& options = {});

// Independent recomputation of the residual / eigenvalue report.
NumericSolution evaluate_solution(const FeasibilitySystem& sys, const std::vector<double>& values);

enum class RationalizeFailure { none, residual, psd };
std::string to_string(RationalizeFailure f);

struct RationalizeResult {
  std::optional<RationalVector> values;
  RationalizeFailure failure = RationalizeFailure::none;
  Integer denominator_used = 0;  // rounding bound that succeeded
  std::string message;

  bool ok() const { return values.has_value(); }
};

// Continued-fraction rounding (denominator bounds 1, 2, 4, ... up to
// `denominator_bound`), exact affine correction (b variables first), then an
// exact LDL^T check of sum a_i Q_i.
RationalizeResult rationalize(const NumericSolution& sol, const FeasibilitySystem& sys,
                              const Integer& denominator_bound);

}  // namespace sosym
