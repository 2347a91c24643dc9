#include "sosym/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sosym/errors.hpp"
#include "sosym/numeric_linalg.hpp"

namespace sosym {

std::size_t FeasibilitySystem::free_count() const {
  return linear_map.cols() >= psd_matrices.size() ? linear_map.cols() - psd_matrices.size() : 0;
}

std::size_t FeasibilitySystem::matrix_size() const {
  if (!psd_matrices.empty()) return psd_matrices.front().rows();
  return basis ? basis->size() : 0;
}

void FeasibilitySystem::validate() const {
  if (linear_map.cols() < psd_matrices.size())
    throw DimensionError("linear map has fewer columns than PSD weights");
  if (rhs.size() != linear_map.rows()) throw DimensionError("right-hand side length differs from k1");
  if (!variable_names.empty() && variable_names.size() != linear_map.cols())
    throw DimensionError("variable name count differs from k2 + k3");
  const std::size_t n = matrix_size();
  for (const auto& q : psd_matrices) {
    if (q.rows() != n || q.cols() != n) throw DimensionError("PSD matrices must share one size");
    if (!q.is_symmetric()) throw DimensionError("PSD matrices must be symmetric");
  }
  if (basis && !psd_matrices.empty() && basis->size() != n)
    throw DimensionError("basis size differs from matrix size");
}

RationalMatrix FeasibilitySystem::psd_combination(const RationalVector& y) const {
  const std::size_t n = matrix_size();
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < psd_matrices.size(); ++i) {
    if (y.at(i) == 0) continue;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (psd_matrices[i](r, c) != 0) out(r, c) += y[i] * psd_matrices[i](r, c);
  }
  return out;
}

void write_sparse(std::ostream& out, const FeasibilitySystem& sys) {
  sys.validate();
  out << sys.constraint_count() << ' ' << sys.psd_count() << ' ' << sys.free_count() << ' ' << sys.matrix_size()
      << '\n';
  for (std::size_t i = 0; i < sys.psd_count(); ++i) {
    const auto& q = sys.psd_matrices[i];
    for (std::size_t r = 0; r < q.rows(); ++r)
      for (std::size_t c = r; c < q.cols(); ++c)
        if (q(r, c) != 0) out << "Q " << i + 1 << ' ' << r + 1 << ' ' << c + 1 << ' ' << to_string(q(r, c)) << '\n';
  }
  for (std::size_t r = 0; r < sys.linear_map.rows(); ++r)
    for (std::size_t c = 0; c < sys.linear_map.cols(); ++c)
      if (sys.linear_map(r, c) != 0)
        out << "A " << r + 1 << ' ' << c + 1 << ' ' << to_string(sys.linear_map(r, c)) << '\n';
  for (std::size_t r = 0; r < sys.rhs.size(); ++r)
    if (sys.rhs[r] != 0) out << "c " << r + 1 << ' ' << to_string(sys.rhs[r]) << '\n';
}

// ---------------------------------------------------------------------------

RationalMatrix BlockEncoding::evaluate(const RationalVector& y) const {
  if (y.size() + 1 != blocks.size()) throw DimensionError("encoding evaluated at a vector of the wrong length");
  RationalMatrix out = blocks.front();
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] != 0) out += blocks[i + 1] * y[i];
  return out;
}

BlockEncoding block_diagonal_encode(const FeasibilitySystem& sys) {
  sys.validate();
  BlockEncoding enc;
  enc.matrix_size = sys.matrix_size();
  enc.constraint_count = sys.constraint_count();
  const std::size_t n = enc.matrix_size;
  const std::size_t total = enc.size();
  const std::size_t k2 = sys.psd_count();

  RationalMatrix f0(total, total);
  for (std::size_t t = 0; t < enc.constraint_count; ++t) {
    const std::size_t r = n + 2 * t;
    f0(r, r + 1) = -sys.rhs[t];
    f0(r + 1, r) = -sys.rhs[t];
  }
  enc.blocks.push_back(std::move(f0));

  for (std::size_t i = 0; i < sys.variable_count(); ++i) {
    RationalMatrix f(total, total);
    if (i < k2)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) f(r, c) = sys.psd_matrices[i](r, c);
    for (std::size_t t = 0; t < enc.constraint_count; ++t) {
      const std::size_t r = n + 2 * t;
      f(r, r + 1) = sys.linear_map(t, i);
      f(r + 1, r) = sys.linear_map(t, i);
    }
    enc.blocks.push_back(std::move(f));
  }
  return enc;
}

FeasibilitySystem as_feasibility_system(const BlockEncoding& enc) {
  // sum_{i>=0} w_i F_i PSD with w_0 = 1.
  FeasibilitySystem sys;
  sys.psd_matrices = enc.blocks;
  sys.linear_map = RationalMatrix(1, enc.blocks.size());
  sys.linear_map(0, 0) = 1;
  sys.rhs = {Rational(1)};
  return sys;
}

// ---------------------------------------------------------------------------

namespace {

numeric::Matrix to_numeric(const RationalMatrix& m) {
  numeric::Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

double dotd(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericError(std::string("non-finite value in ") + what);
}

// The linear matrix inequality M(z) = M0 + sum z_j M_j over the affine
// solution set y = y0 + sum z_j n_j.
struct Pencil {
  numeric::Matrix base;
  std::vector<numeric::Matrix> directions;

  numeric::Matrix at(const std::vector<double>& z) const {
    numeric::Matrix m = base;
    for (std::size_t j = 0; j < directions.size(); ++j) m.axpy(z[j], directions[j]);
    return m;
  }
};

class BarrierSolver {
 public:
  BarrierSolver(const Pencil& pencil, const SolverOptions& options) : pencil_(pencil), options_(options) {}

  struct Outcome {
    std::vector<double> z;
    bool certified_infeasible = false;
    int iterations = 0;
  };

  Outcome run(std::vector<double> z) {
    const std::size_t p = z.size();
    const std::size_t n = pencil_.base.rows();
    const double nu = static_cast<double>(n) + 1.0;
    Outcome out;

    double s = std::max(0.0, -numeric::min_eigenvalue(pencil_.at(z))) + 1.0;
    double t = 1.0;
    constexpr double growth = 8.0;
    int iters = 0;

    while (iters < options_.max_iters) {
      // Centering by damped Newton on phi = t s - log det(M(z) + s I) - log(R^2 - |z|^2).
      for (int inner = 0; inner < 60 && iters < options_.max_iters; ++inner) {
        ++iters;
        if (-s >= options_.interior_target) break;
        numeric::Matrix smat = shifted(z, s);
        auto chol = numeric::cholesky(smat);
        if (!chol) break;
        const numeric::Matrix sinv = numeric::cholesky_inverse(*chol);
        const double box = radius2_ - dotd(z, z);

        std::vector<numeric::Matrix> w;
        w.reserve(p);
        for (std::size_t j = 0; j < p; ++j) w.push_back(sinv * pencil_.directions[j]);

        std::vector<double> grad(p + 1);
        numeric::Matrix hess(p + 1, p + 1);
        for (std::size_t j = 0; j < p; ++j) {
          double tr = 0.0;
          for (std::size_t a = 0; a < n; ++a) tr += w[j](a, a);
          grad[j] = -tr + 2.0 * z[j] / box;
        }
        double tr_sinv = 0.0;
        for (std::size_t a = 0; a < n; ++a) tr_sinv += sinv(a, a);
        grad[p] = t - tr_sinv;

        for (std::size_t j = 0; j < p; ++j) {
          for (std::size_t k = j; k < p; ++k) {
            double v = 0.0;
            for (std::size_t a = 0; a < n; ++a)
              for (std::size_t b = 0; b < n; ++b) v += w[j](a, b) * w[k](b, a);
            v += 4.0 * z[j] * z[k] / (box * box);
            if (j == k) v += 2.0 / box;
            hess(j, k) = v;
            hess(k, j) = v;
          }
          double v = 0.0;
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) v += w[j](a, b) * sinv(b, a);
          hess(j, p) = v;
          hess(p, j) = v;
        }
        double vss = 0.0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) vss += sinv(a, b) * sinv(a, b);
        hess(p, p) = vss;
        if (!hess.all_finite()) throw NumericError("non-finite Hessian in barrier solver");

        std::vector<double> neg(p + 1);
        for (std::size_t j = 0; j <= p; ++j) neg[j] = -grad[j];
        auto step = numeric::solve_spd(hess, neg);
        if (!step) break;
        const double decrement = -dotd(grad, *step);
        require_finite(decrement, "Newton decrement");
        if (decrement < 1e-10) break;

        const double phi0 = objective(z, s, t);
        double alpha = 1.0;
        bool moved = false;
        while (alpha > 1e-14) {
          std::vector<double> z1(z);
          for (std::size_t j = 0; j < p; ++j) z1[j] += alpha * (*step)[j];
          const double s1 = s + alpha * (*step)[p];
          const double phi1 = objective(z1, s1, t);
          if (std::isfinite(phi1) && phi1 <= phi0 - 0.25 * alpha * decrement) {
            z = std::move(z1);
            s = s1;
            moved = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!moved) break;
        if (decrement < 1e-9) break;
      }

      if (-s >= options_.interior_target) break;
      const double gap = nu / t;
      if (s - gap > options_.tolerance) {
        out.certified_infeasible = true;
        break;
      }
      if (gap < options_.tolerance * 1e-2) break;
      t *= growth;
    }
    out.z = std::move(z);
    out.iterations = iters;
    return out;
  }

 private:
  numeric::Matrix shifted(const std::vector<double>& z, double s) const {
    numeric::Matrix m = pencil_.at(z);
    for (std::size_t a = 0; a < m.rows(); ++a) m(a, a) += s;
    return m;
  }

  double objective(const std::vector<double>& z, double s, double t) const {
    const double box = radius2_ - dotd(z, z);
    if (!(box > 0.0)) return std::numeric_limits<double>::infinity();
    auto chol = numeric::cholesky(shifted(z, s));
    if (!chol) return std::numeric_limits<double>::infinity();
    double logdet = 0.0;
    for (std::size_t a = 0; a < chol->rows(); ++a) logdet += 2.0 * std::log((*chol)(a, a));
    return t * s - logdet - std::log(box);
  }

  const Pencil& pencil_;
  const SolverOptions& options_;
  double radius2_ = 1e12;
};

// Alternating projections: PSD projection of M(z), then least-squares pull-back
// into the affine parametrization. Used as a warm start.
std::vector<double> alternating_projections(const Pencil& pencil, std::vector<double> z, int iterations) {
  const std::size_t p = z.size();
  if (p == 0) return z;
  numeric::Matrix gram(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = j; k < p; ++k) {
      gram(j, k) = numeric::frobenius(pencil.directions[j], pencil.directions[k]);
      gram(k, j) = gram(j, k);
    }
  for (int it = 0; it < iterations; ++it) {
    numeric::Matrix m = pencil.at(z);
    numeric::Eigen e = numeric::symmetric_eigen(m);
    if (e.values.front() >= 0.0) break;
    numeric::Matrix target = numeric::project_psd(m);
    target -= pencil.base;
    std::vector<double> rhs(p);
    for (std::size_t j = 0; j < p; ++j) rhs[j] = numeric::frobenius(pencil.directions[j], target);
    auto next = numeric::solve_spd(gram, rhs);
    if (!next) break;
    double change = 0.0;
    for (std::size_t j = 0; j < p; ++j) change = std::max(change, std::abs((*next)[j] - z[j]));
    z = std::move(*next);
    if (change < 1e-12) break;
  }
  for (double x : z) require_finite(x, "alternating projections");
  return z;
}

// Pulls a strictly feasible z back toward the least-norm point z = 0 while
// keeping min eig M(theta z) >= margin. lambda_min is concave along the
// segment, so the admissible thetas form an interval ending at 1.
std::vector<double> shrink_toward_origin(const Pencil& pencil, std::vector<double> z, double margin) {
  if (z.empty()) return z;
  auto at = [&](double theta) {
    std::vector<double> w(z);
    for (double& x : w) x *= theta;
    return numeric::min_eigenvalue(pencil.at(w));
  };
  if (at(1.0) < margin) return z;
  double lo = 0.0;
  double hi = 1.0;
  if (at(0.0) >= margin) {
    hi = 0.0;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at(mid) >= margin ? hi : lo) = mid;
    }
  }
  for (double& x : z) x *= hi;
  return z;
}

}  // namespace

NumericSolution evaluate_solution(const FeasibilitySystem& sys, const std::vector<double>& values) {
  if (values.size() != sys.variable_count()) throw DimensionError("solution length differs from k2 + k3");
  NumericSolution sol;
  sol.values = values;
  for (std::size_t r = 0; r < sys.linear_map.rows(); ++r) {
    double acc = -sys.rhs[r].get_d();
    for (std::size_t c = 0; c < sys.linear_map.cols(); ++c)
      if (sys.linear_map(r, c) != 0) acc += sys.linear_map(r, c).get_d() * values[c];
    sol.linear_residual = std::max(sol.linear_residual, std::abs(acc));
  }
  const std::size_t n = sys.matrix_size();
  numeric::Matrix m(n, n);
  for (std::size_t i = 0; i < sys.psd_count(); ++i) m.axpy(values[i], to_numeric(sys.psd_matrices[i]));
  sol.min_eigenvalue = n == 0 ? 0.0 : numeric::min_eigenvalue(m);
  require_finite(sol.linear_residual, "residual");
  return sol;
}

SolveResult solve_feasibility(const FeasibilitySystem& sys, const SolverOptions& options) {
  sys.validate();
  if (sys.variable_count() > options.variable_cap)
    throw ResourceError("solver variable count " + std::to_string(sys.variable_count()) + " exceeds cap " +
                        std::to_string(options.variable_cap));
  SolveResult result;
  auto affine = solve_affine(sys.linear_map, sys.rhs);
  if (!affine) {
    result.affine_inconsistent = true;
    result.message = "linear constraints are inconsistent (exact)";
    return result;
  }

  const std::size_t nvars = sys.variable_count();
  std::vector<double> y0(nvars);
  for (std::size_t i = 0; i < nvars; ++i) y0[i] = affine->particular[i].get_d();
  std::vector<std::vector<double>> raw;
  for (const auto& v : affine->nullspace) {
    std::vector<double> d(nvars);
    for (std::size_t i = 0; i < nvars; ++i) d[i] = v[i].get_d();
    raw.push_back(std::move(d));
  }
  const auto basis = numeric::orthonormalize(raw);
  for (const auto& q : basis) {
    const double c = dotd(y0, q);
    for (std::size_t i = 0; i < nvars; ++i) y0[i] -= c * q[i];
  }

  const std::size_t n = sys.matrix_size();
  const std::size_t k2 = sys.psd_count();
  std::vector<numeric::Matrix> q;
  for (const auto& m : sys.psd_matrices) q.push_back(to_numeric(m));

  Pencil pencil{numeric::Matrix(n, n), {}};
  for (std::size_t i = 0; i < k2; ++i) pencil.base.axpy(y0[i], q[i]);
  for (const auto& dir : basis) {
    numeric::Matrix m(n, n);
    for (std::size_t i = 0; i < k2; ++i) m.axpy(dir[i], q[i]);
    pencil.directions.push_back(std::move(m));
  }

  auto recover = [&](const std::vector<double>& z) {
    std::vector<double> y = y0;
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (std::size_t i = 0; i < nvars; ++i) y[i] += z[j] * basis[j][i];
    return y;
  };

  std::vector<double> z(basis.size(), 0.0);
  int iterations = 0;
  bool certified_infeasible = false;
  if (n > 0 && k2 > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> jitter(-1e-9, 1e-9);
    for (auto& x : z) x = jitter(rng);
    z = alternating_projections(pencil, std::move(z), std::min(options.max_iters, 50));
    // The barrier stage runs even after a successful projection so the point
    // moves into the interior before rounding.
    BarrierSolver solver(pencil, options);
    auto outcome = solver.run(std::move(z));
    z = std::move(outcome.z);
    const double reached = numeric::min_eigenvalue(pencil.at(z));
    if (reached > options.tolerance)
      z = shrink_toward_origin(pencil, std::move(z), 0.5 * std::min(reached, options.interior_target));
    iterations = outcome.iterations;
    certified_infeasible = outcome.certified_infeasible;
  }

  NumericSolution sol = evaluate_solution(sys, recover(z));
  sol.iterations = iterations;
  const bool ok = sol.linear_residual <= options.tolerance && sol.min_eigenvalue >= -options.tolerance;
  if (ok) {
    result.status = SolveStatus::feasible;
    result.solution = sol;
    result.message = "feasible";
  } else {
    result.best = sol;
    result.message = certified_infeasible ? "infeasible: barrier lower bound exceeds tolerance"
                                          : "no feasible point within tolerance";
  }
  return result;
}

// ---------------------------------------------------------------------------

std::string to_string(RationalizeFailure f) {
  switch (f) {
    case RationalizeFailure::none: return "none";
    case RationalizeFailure::residual: return "residual";
    case RationalizeFailure::psd: return "psd";
  }
  return "unknown";
}

namespace {

// Least-norm exact solution of M w = r restricted to the row space of M, or
// nullopt if M w = r is inconsistent.
std::optional<RationalVector> least_norm_solve(const RationalMatrix& m, const RationalVector& r) {
  const RationalMatrix mt = m.transpose();
  auto u = solve_affine(m * mt, r);
  if (!u) return std::nullopt;
  return mt * u->particular;
}

}  // namespace

RationalizeResult rationalize(const NumericSolution& sol, const FeasibilitySystem& sys,
                              const Integer& denominator_bound) {
  sys.validate();
  RationalizeResult result;
  if (sol.values.size() != sys.variable_count()) throw DimensionError("solution length differs from k2 + k3");
  if (denominator_bound < 1) throw std::invalid_argument("denominator bound must be positive");

  auto compressed = compress_rows(sys.linear_map, sys.rhs);
  if (!compressed) {
    result.failure = RationalizeFailure::residual;
    result.message = "linear constraints are inconsistent";
    return result;
  }
  const auto& [a_full, c_full] = *compressed;
  const std::size_t k2 = sys.psd_count();
  const std::size_t nvars = sys.variable_count();
  RationalMatrix a_free(a_full.rows(), nvars - k2);
  for (std::size_t r = 0; r < a_full.rows(); ++r)
    for (std::size_t c = k2; c < nvars; ++c) a_free(r, c - k2) = a_full(r, c);

  std::vector<Integer> ladder;
  for (Integer d = 1; d < denominator_bound; d *= 2) ladder.push_back(d);
  ladder.push_back(denominator_bound);

  std::optional<RationalVector> previous;
  RationalizeFailure last = RationalizeFailure::psd;
  for (const Integer& bound : ladder) {
    RationalVector y(nvars);
    for (std::size_t i = 0; i < nvars; ++i) y[i] = best_rational_approximation(sol.values[i], bound);
    if (previous && *previous == y) continue;
    previous = y;

    RationalVector residual = a_full * y;
    bool exact = true;
    for (std::size_t r = 0; r < residual.size(); ++r) {
      residual[r] = c_full[r] - residual[r];
      if (residual[r] != 0) exact = false;
    }
    if (!exact) {
      std::optional<RationalVector> fix;
      if (nvars > k2) fix = least_norm_solve(a_free, residual);
      if (fix) {
        for (std::size_t i = 0; i < fix->size(); ++i) y[k2 + i] += (*fix)[i];
      } else {
        auto full = least_norm_solve(a_full, residual);
        if (!full) {
          last = RationalizeFailure::residual;
          continue;
        }
        for (std::size_t i = 0; i < nvars; ++i) y[i] += (*full)[i];
      }
    }
    if (sys.psd_count() > 0 && !ldlt_psd(sys.psd_combination(y)).psd) {
      last = RationalizeFailure::psd;
      continue;
    }
    result.values = std::move(y);
    result.denominator_used = bound;
    result.message = "exact checks passed";
    return result;
  }
  result.failure = last;
  result.message = last == RationalizeFailure::psd ? "rounded point fails the exact LDL^T check"
                                                    : "rounded point cannot satisfy the linear constraints";
  return result;
}

}  // namespace sosym
