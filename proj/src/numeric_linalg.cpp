#include "sosym/numeric_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sosym/errors.hpp"

namespace sosym::numeric {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (auto& x : data_) x *= s;
  return *this;
}

void Matrix::axpy(double s, const Matrix& other) {
  if (s == 0.0) return;
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Eigen symmetric_eigen(const Matrix& s, double tolerance, int max_sweeps) {
  const std::size_t n = s.rows();
  if (!s.all_finite()) throw NumericError("non-finite entry in eigenvalue input");
  Matrix a = s;
  Matrix v = Matrix::identity(n);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += a(i, j) * a(i, j);
  const double threshold = tolerance * tolerance * std::max(total, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off <= threshold) break;

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  Eigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  if (!std::all_of(out.values.begin(), out.values.end(), [](double x) { return std::isfinite(x); }))
    throw NumericError("non-finite eigenvalue");
  return out;
}

double min_eigenvalue(const Matrix& s) {
  if (s.rows() == 0) return 0.0;
  return symmetric_eigen(s).values.front();
}

Matrix project_psd(const Matrix& s) {
  const std::size_t n = s.rows();
  Eigen e = symmetric_eigen(s);
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = e.values[k];
    if (lambda <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += lambda * e.vectors(i, k) * e.vectors(j, k);
  }
  return out;
}

std::optional<Matrix> cholesky(const Matrix& s) {
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double x = s(i, j);
      for (std::size_t k = 0; k < j; ++k) x -= l(i, k) * l(j, k);
      l(i, j) = x / root;
    }
  }
  return l;
}

Matrix cholesky_inverse(const Matrix& lower) {
  const std::size_t n = lower.rows();
  // Invert L (lower triangular), then S^-1 = L^-T L^-1.
  Matrix linv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / lower(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double x = 0.0;
      for (std::size_t k = j; k < i; ++k) x -= lower(i, k) * linv(k, j);
      linv(i, j) = x / lower(i, i);
    }
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double x = 0.0;
      for (std::size_t k = i; k < n; ++k) x += linv(k, i) * linv(k, j);
      out(i, j) = x;
      out(j, i) = x;
    }
  return out;
}

std::optional<std::vector<double>> solve_spd(Matrix h, const std::vector<double>& g) {
  const std::size_t n = h.rows();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(h(i, i)));
  double shift = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Matrix shifted = h;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += shift;
    if (auto l = cholesky(shifted)) {
      std::vector<double> y(n), x(n);
      for (std::size_t i = 0; i < n; ++i) {
        double s = g[i];
        for (std::size_t k = 0; k < i; ++k) s -= (*l)(i, k) * y[k];
        y[i] = s / (*l)(i, i);
      }
      for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= (*l)(k, i) * x[k];
        x[i] = s / (*l)(i, i);
      }
      return x;
    }
    shift = shift == 0.0 ? std::max(scale, 1.0) * 1e-14 : shift * 100.0;
  }
  return std::nullopt;
}

double frobenius(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

std::vector<std::vector<double>> orthonormalize(const std::vector<std::vector<double>>& columns,
                                                double drop_tolerance) {
  std::vector<std::vector<double>> out;
  for (auto v : columns) {
    const double original = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) {
        const double c = std::inner_product(v.begin(), v.end(), q.begin(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
      }
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm <= drop_tolerance * std::max(original, 1.0)) continue;
    for (auto& x : v) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace sosym::numeric
