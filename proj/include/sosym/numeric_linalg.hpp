#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace sosym::numeric {

// Dense row-major double matrix; just enough for the feasibility solver.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);
  // this += s * other
  void axpy(double s, const Matrix& other);

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  Matrix transpose() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Eigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k is the eigenvector of values[k]
};

// Cyclic Jacobi rotations on a symmetric matrix.
Eigen symmetric_eigen(const Matrix& s, double tolerance = 1e-14, int max_sweeps = 100);

double min_eigenvalue(const Matrix& s);

// Projection onto the PSD cone in the Frobenius norm.
Matrix project_psd(const Matrix& s);

// Cholesky factor of a symmetric positive definite matrix, or nullopt.
std::optional<Matrix> cholesky(const Matrix& s);

// Inverse from a Cholesky factor.
Matrix cholesky_inverse(const Matrix& lower);

// Solves the symmetric positive (semi)definite system H x = g with a tiny
// diagonal regularization when needed; nullopt if it stays singular.
std::optional<std::vector<double>> solve_spd(Matrix h, const std::vector<double>& g);

// Frobenius inner product.
double frobenius(const Matrix& a, const Matrix& b);

// Orthonormalizes the columns (modified Gram-Schmidt); drops dependent ones.
std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& columns,
                                                double drop_tolerance = 1e-12);

}  // namespace sosym::numeric
