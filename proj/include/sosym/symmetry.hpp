#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "sosym/exact_linalg.hpp"
#include "sosym/poly.hpp"

namespace sosym {

// G = S_{n1} x ... x S_{nt}, block b permuting a contiguous index range.
class GroupSpec {
 public:
  GroupSpec() = default;
  explicit GroupSpec(std::vector<std::size_t> block_sizes);
  static GroupSpec trivial(std::size_t n);
  static GroupSpec symmetric(std::size_t n) { return GroupSpec({n}); }

  std::size_t ambient() const { return n_; }
  const std::vector<std::size_t>& block_sizes() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t block_start(std::size_t b) const { return starts_[b]; }
  std::size_t block_of(std::size_t index) const { return block_index_[index]; }
  Integer order() const;
  bool is_trivial() const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.blocks_ == b.blocks_; }

 private:
  std::vector<std::size_t> blocks_;
  std::vector<std::size_t> starts_;
  std::vector<std::size_t> block_index_;
  std::size_t n_ = 0;
};

// "S(2)xS(1)"; a trivial group on n variables prints as S(1)x...xS(1).
std::string to_string(const GroupSpec& g);

// Bijection i -> images[i] on 0..n-1.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t n);
  static Permutation transposition(std::size_t n, std::size_t i, std::size_t j);
  // Maps cycle[0] -> cycle[1] -> ... -> cycle[0].
  static Permutation cycle(std::size_t n, const std::vector<std::size_t>& cycle);

  std::size_t size() const { return images_.size(); }
  std::size_t operator()(std::size_t i) const { return images_[i]; }
  const std::vector<std::size_t>& images() const { return images_; }
  Permutation inverse() const;
  // (this * other)(i) = this(other(i))
  Permutation operator*(const Permutation& other) const;
  bool respects(const GroupSpec& g) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

// Adjacent transpositions inside each block; they generate G.
std::vector<Permutation> generators(const GroupSpec& g);

// Calls fn on every element of G. Throws ResourceError when |G| > cap.
void for_each_element(const GroupSpec& g, const std::function<void(const Permutation&)>& fn,
                      std::size_t cap = 40320);

// (g.alpha)_{g(i)} = alpha_i
Monomial act_on_monomial(const Permutation& g, const Monomial& m);
Polynomial act_on_polynomial(const Permutation& g, const Polynomial& p);

// Symmetric matrix indexed by a MonomialBasis: p = <Q, x x^T>.
struct GramMatrix {
  MonomialBasis basis;
  RationalMatrix entries;

  explicit GramMatrix(MonomialBasis b) : basis(std::move(b)), entries(basis.size(), basis.size()) {}
  GramMatrix(MonomialBasis b, RationalMatrix m);

  std::size_t size() const { return basis.size(); }
  Polynomial to_polynomial() const;
  friend bool operator==(const GramMatrix& a, const GramMatrix& b) {
    return a.basis == b.basis && a.entries == b.entries;
  }
};

// (g*Q)(a, b) = Q(g^-1 a, g^-1 b), so that <g*Q, x x^T> = g.<Q, x x^T>.
GramMatrix act_on_gram(const Permutation& g, const GramMatrix& q);

// Canonical forms: exponents (or exponent pairs) sorted descending inside
// each block.
Monomial canonical_monomial(const GroupSpec& g, const Monomial& m);
using MonomialPair = std::pair<Monomial, Monomial>;
MonomialPair canonical_pair(const GroupSpec& g, const MonomialPair& p);

// |orbit of m| from the multiset-multinomial formula.
Integer monomial_orbit_size(const GroupSpec& g, const Monomial& m);
// All distinct images of m. Throws ResourceError past `cap` elements.
std::vector<Monomial> monomial_orbit(const GroupSpec& g, const Monomial& m, std::size_t cap = 1'000'000);
// Sum of x^m over the orbit of `representative` (a 0/1 invariant polynomial).
Polynomial orbit_sum(const GroupSpec& g, const Monomial& representative);

Polynomial reynolds_poly(const GroupSpec& g, const Polynomial& p);
GramMatrix reynolds_gram(const GroupSpec& g, const GramMatrix& q);

template <typename Element>
struct OrbitTable {
  std::uint32_t degree = 0;
  std::vector<Element> representatives;
  std::vector<std::size_t> orbit_sizes;
  std::vector<std::vector<Element>> members;
  std::map<Element, std::size_t> orbit_of;

  std::size_t size() const { return representatives.size(); }
};

using MonomialOrbitTable = OrbitTable<Monomial>;
using PairOrbitTable = OrbitTable<MonomialPair>;

MonomialOrbitTable enumerate_monomial_orbits(const GroupSpec& g, std::uint32_t d);
PairOrbitTable enumerate_pair_orbits(const GroupSpec& g, std::uint32_t d);

// Number of multisets of pairs in N^2 \ {(0,0)} with component sums (k, l).
Integer bipartition_count(unsigned k, unsigned l);

// Pair orbits merged with their transposes; matrix i is the 0/1 indicator of
// the union of pair orbits merged_orbits[i].
struct IndicatorSet {
  std::vector<GramMatrix> matrices;
  std::vector<std::vector<std::size_t>> merged_orbits;
};

IndicatorSet orbit_indicator_matrices(const PairOrbitTable& table, const MonomialBasis& basis);

bool is_invariant(const GroupSpec& g, const Polynomial& p);

struct SystemInvariance {
  bool invariant = false;
  // Constraint indices grouped by G-orbit (ordered by smallest index); empty
  // when the system is not closed.
  std::vector<std::vector<std::size_t>> orbits;
};

SystemInvariance is_invariant_system(const GroupSpec& g, const std::vector<Polynomial>& system);

}  // namespace sosym
