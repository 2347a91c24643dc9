#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sosym/rational.hpp"

namespace sosym {

using RationalVector = std::vector<Rational>;

// Dense row-major rational matrix.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_symmetric() const;
  bool is_zero() const;
  RationalMatrix transpose() const;

  RationalMatrix& operator+=(const RationalMatrix& other);
  RationalMatrix& operator*=(const Rational& scalar);
  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) { return a += b; }
  friend RationalMatrix operator*(RationalMatrix a, const Rational& s) { return a *= s; }
  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  RationalVector operator*(const RationalVector& v) const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Rational dot(const RationalVector& a, const RationalVector& b);
// v^T S v
Rational quadratic_form(const RationalMatrix& s, const RationalVector& v);

struct RowEchelon {
  RationalMatrix reduced;           // reduced row echelon form, zero rows removed
  std::vector<std::size_t> pivots;  // pivot column of each row
};

RowEchelon rref(const RationalMatrix& m);

// Solution set {particular + N t} of A y = c, or nullopt if inconsistent.
struct AffineSolution {
  RationalVector particular;            // minimal support: free variables set to 0
  std::vector<RationalVector> nullspace;  // basis of ker A
};

std::optional<AffineSolution> solve_affine(const RationalMatrix& a, const RationalVector& c);

// Equivalent full-row-rank system [A'|c'] obtained by row reduction of [A|c];
// nullopt if the system is inconsistent.
std::optional<std::pair<RationalMatrix, RationalVector>> compress_rows(const RationalMatrix& a,
                                                                       const RationalVector& c);

// Exact LDL^T with symmetric diagonal pivoting: P S P^T = L D L^T. Succeeds
// (psd = true) when every pivot is nonnegative and the residual Schur block
// vanishes identically once only zero diagonals remain. Otherwise `witness`
// holds a vector v in the original coordinates with v^T S v < 0.
struct LdltResult {
  bool psd = false;
  std::vector<std::size_t> permutation;  // row i of the factor is original index permutation[i]
  RationalMatrix lower;                  // unit lower triangular (permuted coordinates)
  RationalVector diagonal;
  std::optional<RationalVector> witness;
};

// Throws std::invalid_argument for a non-symmetric input.
LdltResult ldlt_psd(const RationalMatrix& s);

}  // namespace sosym
