#include "sosym/poly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "sosym/errors.hpp"

namespace sosym {

namespace {

std::uint32_t sum_of(const std::vector<std::uint32_t>& e) {
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

void require_same_ambient(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": ambient dimensions differ (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
}

Rational power(const Rational& base, std::uint32_t e) {
  Rational result = 1;
  Rational b = base;
  while (e > 0) {
    if (e & 1u) result *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return result;
}

}  // namespace

Monomial::Monomial(std::vector<std::uint32_t> exponents)
    : exponents_(std::move(exponents)), degree_(sum_of(exponents_)) {}

Monomial::Monomial(std::initializer_list<std::uint32_t> exponents)
    : exponents_(exponents), degree_(sum_of(exponents_)) {}

Monomial Monomial::variable(std::size_t n, std::size_t index, std::uint32_t power) {
  if (index >= n) throw DimensionError("variable index out of range");
  std::vector<std::uint32_t> e(n, 0);
  e[index] = power;
  return Monomial(std::move(e));
}

bool Monomial::divides(const Monomial& other) const {
  require_same_ambient(ambient(), other.ambient(), "divides");
  for (std::size_t i = 0; i < exponents_.size(); ++i)
    if (exponents_[i] > other.exponents_[i]) return false;
  return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  if (!divides(other)) throw std::invalid_argument("monomial does not divide");
  std::vector<std::uint32_t> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = other.exponents_[i] - exponents_[i];
  return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& other) const {
  require_same_ambient(ambient(), other.ambient(), "monomial product");
  std::vector<std::uint32_t> e(exponents_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exponents_[i];
  return Monomial(std::move(e));
}

std::strong_ordering grlex_compare(const Monomial& a, const Monomial& b) {
  require_same_ambient(a.ambient(), b.ambient(), "grlex_compare");
  if (auto c = a.degree() <=> b.degree(); c != 0) return c;
  for (std::size_t i = 0; i < a.ambient(); ++i)
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Integer multinomial(const Monomial& m) {
  // Product of binomials: C(a1, a1) C(a1+a2, a2) ...
  Integer result = 1;
  unsigned long running = 0;
  for (std::uint32_t e : m.exponents()) {
    running += e;
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), running, e);
    result *= b;
  }
  return result;
}

Integer binomial(unsigned n, unsigned k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::size_t n, const Rational& constant) : n_(n) {
  if (constant != 0) terms_.emplace(Monomial(n), constant);
}

Polynomial::Polynomial(const Monomial& m, const Rational& coefficient) : n_(m.ambient()) {
  if (coefficient != 0) terms_.emplace(m, coefficient);
}

Polynomial Polynomial::variable(std::size_t n, std::size_t index) {
  return Polynomial(Monomial::variable(n, index));
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.begin()->first.degree());
}

bool Polynomial::is_constant() const { return degree() <= 0; }

Rational Polynomial::constant_term() const { return coefficient(Monomial(n_)); }

Rational Polynomial::coefficient(const Monomial& m) const {
  require_same_ambient(n_, m.ambient(), "coefficient");
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw std::logic_error("leading monomial of the zero polynomial");
  return terms_.begin()->first;
}

const Rational& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw std::logic_error("leading coefficient of the zero polynomial");
  return terms_.begin()->second;
}

void Polynomial::check_same(const Polynomial& other) const {
  require_same_ambient(n_, other.n_, "polynomial arithmetic");
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  require_same_ambient(n_, m.ambient(), "add_term");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scalar;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same(b);
  Polynomial result(a.n_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) result.add_term(ma * mb, ca * cb);
  return result;
}

Polynomial Polynomial::operator-() const {
  Polynomial result(*this);
  for (auto& [m, c] : result.terms_) c = -c;
  return result;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const Rational& c) const {
  require_same_ambient(n_, m.ambient(), "times_monomial");
  Polynomial result(n_);
  if (c == 0) return result;
  // Multiplying by a monomial preserves grlex order, so hinted insertion is cheap.
  for (const auto& [mm, cc] : terms_) result.terms_.emplace_hint(result.terms_.end(), mm * m, cc * c);
  return result;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(n_, 1);
  Polynomial base(*this);
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent) base = base * base;
  }
  return result;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  require_same_ambient(n_, point.size(), "evaluate");
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < n_ && term != 0; ++i)
      if (m[i]) term *= power(point[i], m[i]);
    total += term;
  }
  return total;
}

double Polynomial::evaluate(std::span<const double> point) const {
  require_same_ambient(n_, point.size(), "evaluate");
  double total = 0;
  for (const auto& [m, c] : terms_) {
    double term = c.get_d();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) term *= point[i];
    total += term;
  }
  return total;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return GrlexGreater{}(ia->first, ib->first);
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.terms_.end() && ib != b.terms_.end();
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial multiply(const Polynomial& p, const Polynomial& q) { return p * q; }

Rational coefficient_norm(const Polynomial& p) {
  Rational best = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational v = abs(c) / Rational(multinomial(m));
    if (v > best) best = v;
  }
  return best;
}

Rational grid_sup_lower_bound(const Polynomial& p, const GridOptions& options) {
  const std::size_t points = options.points_per_axis;
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  const std::size_t n = p.ambient();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > options.max_evaluations / points)
      throw ResourceError("grid evaluation count exceeds cap of " +
                          std::to_string(options.max_evaluations));
    total *= points;
  }

  std::vector<Rational> axis(points);
  for (std::size_t k = 0; k < points; ++k) {
    Rational step(2 * static_cast<long>(k), static_cast<long>(points - 1));
    step.canonicalize();
    axis[k] = step - 1;
  }

  std::vector<std::size_t> index(n, 0);
  std::vector<Rational> point(n, axis[0]);
  Rational best = 0;
  for (std::size_t step = 0; step < total; ++step) {
    Rational v = abs(p.evaluate(point));
    if (v > best) best = v;
    for (std::size_t i = 0; i < n; ++i) {
      if (++index[i] < points) {
        point[i] = axis[index[i]];
        break;
      }
      index[i] = 0;
      point[i] = axis[0];
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

std::vector<Monomial> monomials_up_to(std::size_t n, std::uint32_t d) {
  std::vector<Monomial> out;
  std::vector<std::uint32_t> e(n, 0);
  // Generate each degree in grlex-descending order (lex descending), then reverse.
  for (std::uint32_t deg = 0; deg <= d; ++deg) {
    std::vector<Monomial> layer;
    // Recursive composition enumeration in lex-descending order.
    auto rec = [&](auto&& self, std::size_t pos, std::uint32_t left) -> void {
      if (pos + 1 == n) {
        e[pos] = left;
        layer.emplace_back(e);
        return;
      }
      for (std::uint32_t k = left + 1; k-- > 0;) {
        e[pos] = k;
        self(self, pos + 1, left - k);
      }
      e[pos] = 0;
    };
    if (n == 0) {
      if (deg == 0) layer.emplace_back(std::vector<std::uint32_t>{});
    } else {
      rec(rec, 0, deg);
    }
    std::reverse(layer.begin(), layer.end());
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

MonomialBasis::MonomialBasis(std::size_t n, std::uint32_t d)
    : n_(n), d_(d), entries_(monomials_up_to(n, d)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i], i);
}

std::size_t MonomialBasis::index_of(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) throw std::out_of_range("monomial not in basis");
  return it->second;
}

// ---------------------------------------------------------------------------

std::string to_string(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.ambient(); ++i) {
    if (!m[i]) continue;
    if (!out.empty()) out += '*';
    out += 'x' + std::to_string(i + 1);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (m.degree() == 0) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + '*';
      out += to_string(m);
    }
  }
  return out;
}

}  // namespace sosym
