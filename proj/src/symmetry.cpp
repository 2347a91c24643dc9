#include "sosym/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "sosym/errors.hpp"

namespace sosym {

GroupSpec::GroupSpec(std::vector<std::size_t> block_sizes) : blocks_(std::move(block_sizes)) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b] == 0) throw InvalidInput("group block sizes must be positive");
    starts_.push_back(n_);
    for (std::size_t i = 0; i < blocks_[b]; ++i) block_index_.push_back(b);
    n_ += blocks_[b];
  }
}

GroupSpec GroupSpec::trivial(std::size_t n) { return GroupSpec(std::vector<std::size_t>(n, 1)); }

Integer GroupSpec::order() const {
  Integer o = 1;
  for (std::size_t b : blocks_) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), b);
    o *= f;
  }
  return o;
}

bool GroupSpec::is_trivial() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](std::size_t b) { return b == 1; });
}

std::string to_string(const GroupSpec& g) {
  std::string out;
  for (std::size_t b : g.block_sizes()) {
    if (!out.empty()) out += 'x';
    out += "S(" + std::to_string(b) + ")";
  }
  return out;
}

// ---------------------------------------------------------------------------

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> hit(images_.size(), false);
  for (std::size_t x : images_) {
    if (x >= images_.size() || hit[x]) throw std::invalid_argument("permutation is not a bijection");
    hit[x] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::transposition(std::size_t n, std::size_t i, std::size_t j) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::swap(v.at(i), v.at(j));
  return Permutation(std::move(v));
}

Permutation Permutation::cycle(std::size_t n, const std::vector<std::size_t>& c) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (std::size_t k = 0; k < c.size(); ++k) v.at(c[k]) = c[(k + 1) % c.size()];
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> v(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) v[images_[i]] = i;
  return Permutation(std::move(v));
}

Permutation Permutation::operator*(const Permutation& other) const {
  if (size() != other.size()) throw DimensionError("permutation sizes differ");
  std::vector<std::size_t> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = images_[other.images_[i]];
  return Permutation(std::move(v));
}

bool Permutation::respects(const GroupSpec& g) const {
  if (size() != g.ambient()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (g.block_of(i) != g.block_of(images_[i])) return false;
  return true;
}

std::vector<Permutation> generators(const GroupSpec& g) {
  std::vector<Permutation> out;
  for (std::size_t b = 0; b < g.block_count(); ++b) {
    const std::size_t s = g.block_start(b);
    for (std::size_t i = 0; i + 1 < g.block_sizes()[b]; ++i)
      out.push_back(Permutation::transposition(g.ambient(), s + i, s + i + 1));
  }
  return out;
}

void for_each_element(const GroupSpec& g, const std::function<void(const Permutation&)>& fn,
                      std::size_t cap) {
  if (g.order() > Integer(static_cast<unsigned long>(cap)))
    throw ResourceError("group order " + g.order().get_str() + " exceeds enumeration cap " +
                        std::to_string(cap));
  std::vector<std::size_t> images(g.ambient());
  std::iota(images.begin(), images.end(), 0);
  // Odometer over blocks: block b cycles through all its arrangements while
  // blocks before it are held fixed.
  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == g.block_count()) {
      fn(Permutation(images));
      return;
    }
    const auto first = images.begin() + static_cast<std::ptrdiff_t>(g.block_start(b));
    const auto last = first + static_cast<std::ptrdiff_t>(g.block_sizes()[b]);
    std::sort(first, last);
    do {
      self(self, b + 1);
    } while (std::next_permutation(first, last));
  };
  rec(rec, 0);
}

Monomial act_on_monomial(const Permutation& g, const Monomial& m) {
  if (g.size() != m.ambient()) throw DimensionError("permutation and monomial sizes differ");
  std::vector<std::uint32_t> e(m.ambient());
  for (std::size_t i = 0; i < e.size(); ++i) e[g(i)] = m[i];
  return Monomial(std::move(e));
}

Polynomial act_on_polynomial(const Permutation& g, const Polynomial& p) {
  if (g.size() != p.ambient()) throw DimensionError("permutation and polynomial sizes differ");
  Polynomial out(p.ambient());
  for (const auto& [m, c] : p.terms()) out.add_term(act_on_monomial(g, m), c);
  return out;
}

// ---------------------------------------------------------------------------

GramMatrix::GramMatrix(MonomialBasis b, RationalMatrix m) : basis(std::move(b)), entries(std::move(m)) {
  if (entries.rows() != basis.size() || entries.cols() != basis.size())
    throw DimensionError("Gram matrix size does not match its basis");
}

Polynomial GramMatrix::to_polynomial() const {
  Polynomial p(basis.ambient());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (entries(i, j) != 0) p.add_term(basis[i] * basis[j], entries(i, j));
  return p;
}

GramMatrix act_on_gram(const Permutation& g, const GramMatrix& q) {
  if (g.size() != q.basis.ambient()) throw DimensionError("permutation and Gram basis sizes differ");
  const Permutation inv = g.inverse();
  std::vector<std::size_t> source(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) source[i] = q.basis.index_of(act_on_monomial(inv, q.basis[i]));
  GramMatrix out(q.basis);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) out.entries(i, j) = q.entries(source[i], source[j]);
  return out;
}

Monomial canonical_monomial(const GroupSpec& g, const Monomial& m) {
  if (g.ambient() != m.ambient()) throw DimensionError("group and monomial sizes differ");
  std::vector<std::uint32_t> e(m.exponents().begin(), m.exponents().end());
  for (std::size_t b = 0; b < g.block_count(); ++b) {
    auto first = e.begin() + static_cast<std::ptrdiff_t>(g.block_start(b));
    std::sort(first, first + static_cast<std::ptrdiff_t>(g.block_sizes()[b]), std::greater<>());
  }
  return Monomial(std::move(e));
}

MonomialPair canonical_pair(const GroupSpec& g, const MonomialPair& p) {
  const auto& [a, b] = p;
  if (g.ambient() != a.ambient() || g.ambient() != b.ambient())
    throw DimensionError("group and monomial sizes differ");
  std::vector<std::uint32_t> ea(a.ambient()), eb(b.ambient());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> block;
  for (std::size_t k = 0; k < g.block_count(); ++k) {
    const std::size_t s = g.block_start(k);
    const std::size_t len = g.block_sizes()[k];
    block.clear();
    for (std::size_t i = s; i < s + len; ++i) block.emplace_back(a[i], b[i]);
    std::sort(block.begin(), block.end(), std::greater<>());
    for (std::size_t i = 0; i < len; ++i) std::tie(ea[s + i], eb[s + i]) = block[i];
  }
  return {Monomial(std::move(ea)), Monomial(std::move(eb))};
}

Integer monomial_orbit_size(const GroupSpec& g, const Monomial& m) {
  Integer size = 1;
  for (std::size_t k = 0; k < g.block_count(); ++k) {
    const std::size_t s = g.block_start(k);
    const std::size_t len = g.block_sizes()[k];
    std::map<std::uint32_t, unsigned long> counts;
    for (std::size_t i = s; i < s + len; ++i) ++counts[m[i]];
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), len);
    for (const auto& [value, count] : counts) {
      Integer c;
      mpz_fac_ui(c.get_mpz_t(), count);
      f /= c;
    }
    size *= f;
  }
  return size;
}

std::vector<Monomial> monomial_orbit(const GroupSpec& g, const Monomial& m, std::size_t cap) {
  if (monomial_orbit_size(g, m) > Integer(static_cast<unsigned long>(cap)))
    throw ResourceError("monomial orbit exceeds cap of " + std::to_string(cap));
  std::vector<Monomial> out;
  std::vector<std::uint32_t> e(m.exponents().begin(), m.exponents().end());
  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == g.block_count()) {
      out.emplace_back(e);
      return;
    }
    const auto first = e.begin() + static_cast<std::ptrdiff_t>(g.block_start(b));
    const auto last = first + static_cast<std::ptrdiff_t>(g.block_sizes()[b]);
    std::sort(first, last);
    do {
      self(self, b + 1);
    } while (std::next_permutation(first, last));
  };
  rec(rec, 0);
  return out;
}

Polynomial orbit_sum(const GroupSpec& g, const Monomial& representative) {
  Polynomial out(representative.ambient());
  for (const auto& m : monomial_orbit(g, representative)) out.add_term(m, 1);
  return out;
}

Polynomial reynolds_poly(const GroupSpec& g, const Polynomial& p) {
  if (g.ambient() != p.ambient()) throw DimensionError("group and polynomial sizes differ");
  Polynomial out(p.ambient());
  for (const auto& [m, c] : p.terms()) {
    const std::vector<Monomial> orbit = monomial_orbit(g, m);
    const Rational share = c / Rational(static_cast<long>(orbit.size()));
    for (const auto& image : orbit) out.add_term(image, share);
  }
  return out;
}

GramMatrix reynolds_gram(const GroupSpec& g, const GramMatrix& q) {
  if (g.ambient() != q.basis.ambient()) throw DimensionError("group and Gram basis sizes differ");
  // The average over G at (a, b) is the mean of Q over the pair orbit of (a, b);
  // pair orbits never leave the basis because the action preserves degree.
  std::map<MonomialPair, std::pair<Rational, long>> acc;
  std::vector<const MonomialPair*> keys(q.size() * q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      auto [it, fresh] = acc.try_emplace(canonical_pair(g, {q.basis[i], q.basis[j]}), Rational(0), 0L);
      it->second.first += q.entries(i, j);
      it->second.second += 1;
      keys[i * q.size() + j] = &it->first;
    }
  GramMatrix out(q.basis);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      const auto& [sum, count] = acc.at(*keys[i * q.size() + j]);
      out.entries(i, j) = sum / Rational(count);
    }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Element, typename Canon>
OrbitTable<Element> build_table(std::uint32_t d, const std::vector<Element>& universe, Canon canon) {
  OrbitTable<Element> table;
  table.degree = d;
  std::map<Element, std::size_t> by_rep;
  for (const auto& e : universe) {
    Element rep = canon(e);
    auto [it, fresh] = by_rep.try_emplace(rep, table.representatives.size());
    if (fresh) {
      table.representatives.push_back(rep);
      table.members.emplace_back();
    }
    table.members[it->second].push_back(e);
    table.orbit_of.emplace(e, it->second);
  }
  for (const auto& m : table.members) table.orbit_sizes.push_back(m.size());
  return table;
}

}  // namespace

MonomialOrbitTable enumerate_monomial_orbits(const GroupSpec& g, std::uint32_t d) {
  return build_table<Monomial>(d, monomials_up_to(g.ambient(), d),
                               [&](const Monomial& m) { return canonical_monomial(g, m); });
}

PairOrbitTable enumerate_pair_orbits(const GroupSpec& g, std::uint32_t d) {
  const auto basis = monomials_up_to(g.ambient(), d);
  std::vector<MonomialPair> universe;
  universe.reserve(basis.size() * basis.size());
  for (const auto& a : basis)
    for (const auto& b : basis) universe.emplace_back(a, b);
  return build_table<MonomialPair>(d, universe,
                                   [&](const MonomialPair& p) { return canonical_pair(g, p); });
}

Integer bipartition_count(unsigned k, unsigned l) {
  // Parts ordered (a, b) lexicographically; f(k, l, i) counts multisets of
  // parts with index >= i summing to (k, l).
  std::vector<std::pair<unsigned, unsigned>> parts;
  for (unsigned a = 0; a <= k; ++a)
    for (unsigned b = 0; b <= l; ++b)
      if (a || b) parts.emplace_back(a, b);
  std::map<std::tuple<unsigned, unsigned, std::size_t>, Integer> memo;
  auto f = [&](auto&& self, unsigned kk, unsigned ll, std::size_t i) -> Integer {
    if (kk == 0 && ll == 0) return 1;
    if (i == parts.size()) return 0;
    auto key = std::make_tuple(kk, ll, i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Integer total = self(self, kk, ll, i + 1);
    const auto [a, b] = parts[i];
    if (a <= kk && b <= ll) total += self(self, kk - a, ll - b, i);
    memo.emplace(key, total);
    return total;
  };
  return f(f, k, l, 0);
}

IndicatorSet orbit_indicator_matrices(const PairOrbitTable& table, const MonomialBasis& basis) {
  if (!table.representatives.empty() &&
      (table.representatives.front().first.ambient() != basis.ambient() || table.degree != basis.degree()))
    throw DimensionError("orbit table and basis disagree on (n, d)");
  IndicatorSet out;
  std::vector<std::size_t> group_of(table.size(), table.size());
  for (std::size_t o = 0; o < table.size(); ++o) {
    if (group_of[o] != table.size()) continue;
    const auto& [a, b] = table.representatives[o];
    const std::size_t t = table.orbit_of.at({b, a});
    group_of[o] = out.merged_orbits.size();
    group_of[t] = out.merged_orbits.size();
    out.merged_orbits.push_back(t == o ? std::vector<std::size_t>{o} : std::vector<std::size_t>{o, t});
  }
  out.matrices.assign(out.merged_orbits.size(), GramMatrix(basis));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const std::size_t o = table.orbit_of.at({basis[i], basis[j]});
      out.matrices[group_of[o]].entries(i, j) = 1;
    }
  return out;
}

bool is_invariant(const GroupSpec& g, const Polynomial& p) {
  if (g.ambient() != p.ambient()) throw DimensionError("group and polynomial sizes differ");
  for (const auto& s : generators(g))
    if (!(act_on_polynomial(s, p) == p)) return false;
  return true;
}

SystemInvariance is_invariant_system(const GroupSpec& g, const std::vector<Polynomial>& system) {
  SystemInvariance out;
  std::map<Polynomial, std::size_t> index;
  for (std::size_t i = 0; i < system.size(); ++i) {
    if (system[i].ambient() != g.ambient()) throw DimensionError("group and constraint sizes differ");
    index.try_emplace(system[i], i);
  }
  std::vector<std::size_t> parent(system.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  // Equal constraints listed twice belong to the same orbit.
  for (std::size_t i = 0; i < system.size(); ++i) parent[find(i)] = find(index.at(system[i]));
  for (const auto& s : generators(g))
    for (std::size_t i = 0; i < system.size(); ++i) {
      auto it = index.find(act_on_polynomial(s, system[i]));
      if (it == index.end()) return out;
      parent[find(i)] = find(it->second);
    }
  out.invariant = true;
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < system.size(); ++i) {
    auto [it, fresh] = slot.try_emplace(find(i), out.orbits.size());
    if (fresh) out.orbits.emplace_back();
    out.orbits[it->second].push_back(i);
  }
  return out;
}

}  // namespace sosym
