#include "sosym/exact_linalg.hpp"

#include <stdexcept>
#include <utility>

#include "sosym/errors.hpp"

namespace sosym {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool RationalMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix& RationalMatrix::operator+=(const RationalMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sum shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

RationalMatrix& RationalMatrix::operator*=(const Rational& scalar) {
  for (auto& x : data_) x *= scalar;
  return *this;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

RationalVector RationalMatrix::operator*(const RationalVector& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
  RationalVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot product length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rational quadratic_form(const RationalMatrix& s, const RationalVector& v) {
  return dot(v, s * v);
}

RowEchelon rref(const RationalMatrix& m) {
  RationalMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, col) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(sel, j), a(row, j));
    Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j)
        if (a(row, j) != 0) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  RationalMatrix reduced(row, a.cols());
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) reduced(i, j) = a(i, j);
  return {std::move(reduced), std::move(pivots)};
}

namespace {

RationalMatrix augment(const RationalMatrix& a, const RationalVector& c) {
  if (c.size() != a.rows()) throw DimensionError("right-hand side length mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = c[i];
  }
  return aug;
}

}  // namespace

std::optional<AffineSolution> solve_affine(const RationalMatrix& a, const RationalVector& c) {
  const std::size_t nvars = a.cols();
  RowEchelon e = rref(augment(a, c));
  if (!e.pivots.empty() && e.pivots.back() == nvars) return std::nullopt;

  AffineSolution sol;
  sol.particular.assign(nvars, 0);
  std::vector<bool> is_pivot(nvars, false);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    is_pivot[e.pivots[r]] = true;
    sol.particular[e.pivots[r]] = e.reduced(r, nvars);
  }
  for (std::size_t f = 0; f < nvars; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(nvars);
    v[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, f);
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

std::optional<std::pair<RationalMatrix, RationalVector>> compress_rows(const RationalMatrix& a,
                                                                       const RationalVector& c) {
  const std::size_t nvars = a.cols();
  RowEchelon e = rref(augment(a, c));
  if (!e.pivots.empty() && e.pivots.back() == nvars) return std::nullopt;
  RationalMatrix out(e.reduced.rows(), nvars);
  RationalVector rhs(e.reduced.rows());
  for (std::size_t i = 0; i < e.reduced.rows(); ++i) {
    for (std::size_t j = 0; j < nvars; ++j) out(i, j) = e.reduced(i, j);
    rhs[i] = e.reduced(i, nvars);
  }
  return std::make_pair(std::move(out), std::move(rhs));
}

LdltResult ldlt_psd(const RationalMatrix& s) {
  if (!s.is_symmetric()) throw std::invalid_argument("LDL^T requires a symmetric matrix");
  const std::size_t n = s.rows();
  RationalMatrix work = s;  // Schur complement lives in work(k.., k..)
  LdltResult out;
  out.permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.permutation[i] = i;
  out.lower = RationalMatrix::identity(n);
  out.diagonal.assign(n, 0);

  auto swap_index = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(work(a, j), work(b, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(work(i, a), work(i, b));
    std::swap(out.permutation[a], out.permutation[b]);
    for (std::size_t j = 0; j < std::min(a, b); ++j) std::swap(out.lower(a, j), out.lower(b, j));
  };

  // Lift a vector w on the trailing block k.. to the full permuted space so
  // that v^T (P S P^T) v = w^T Schur w, then undo the permutation.
  auto lift = [&](std::size_t k, const RationalVector& tail) {
    RationalVector v(n);
    for (std::size_t i = k; i < n; ++i) v[i] = tail[i - k];
    for (std::size_t r = k; r-- > 0;) {
      Rational acc = 0;
      for (std::size_t i = r + 1; i < n; ++i)
        if (out.lower(i, r) != 0) acc += out.lower(i, r) * v[i];
      v[r] = -acc;
    }
    RationalVector original(n);
    for (std::size_t i = 0; i < n; ++i) original[out.permutation[i]] = v[i];
    return original;
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = n;
    for (std::size_t i = k; i < n; ++i) {
      if (work(i, i) < 0) {
        RationalVector tail(n - k);
        tail[i - k] = 1;
        out.witness = lift(k, tail);
        return out;
      }
      if (work(i, i) > 0 && (best == n || work(i, i) > work(best, best))) best = i;
    }
    if (best == n) {
      // All remaining diagonals vanish: PSD iff the block is zero.
      for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (work(i, j) != 0) {
            RationalVector tail(n - k);
            tail[i - k] = 1;
            tail[j - k] = work(i, j) > 0 ? -1 : 1;
            out.witness = lift(k, tail);
            return out;
          }
      out.psd = true;
      return out;
    }
    swap_index(k, best);
    const Rational pivot = work(k, k);
    out.diagonal[k] = pivot;
    for (std::size_t i = k + 1; i < n; ++i) out.lower(i, k) = work(i, k) / pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (work(i, k) == 0) continue;
      const Rational f = out.lower(i, k);
      for (std::size_t j = k + 1; j < n; ++j)
        if (work(k, j) != 0) work(i, j) -= f * work(k, j);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      work(i, k) = 0;
      work(k, i) = 0;
    }
  }
  out.psd = true;
  return out;
}

}  // namespace sosym
