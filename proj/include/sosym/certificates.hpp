#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sosym/exact_linalg.hpp"
#include "sosym/poly.hpp"
#include "sosym/symmetry.hpp"

namespace sosym {

enum class CertificateMode { general, normal_form };

std::string to_string(CertificateMode mode);
CertificateMode parse_certificate_mode(const std::string& text);

// multiplier * constraint, or multiplier * constraint^2 when `squared`.
struct EqualityUse {
  Polynomial constraint;
  Polynomial multiplier;
  bool squared = false;

  Polynomial product() const;
  int degree() const;
  friend bool operator==(const EqualityUse&, const EqualityUse&) = default;
};

struct GroebnerUse {
  Polynomial generator;
  Polynomial multiplier;

  Polynomial product() const { return multiplier * generator; }
  friend bool operator==(const GroebnerUse&, const GroebnerUse&) = default;
};

// target = <sigma, x x^T> + sum equalities + sum groebner products.
struct SosCertificate {
  Polynomial target;
  GramMatrix sigma;
  std::vector<EqualityUse> equalities;
  std::vector<GroebnerUse> groebner;
  int degree_bound = 0;
  CertificateMode mode = CertificateMode::general;
  // Shift already folded into target (target = r + epsilon); kept for reporting.
  Rational epsilon = 0;

  SosCertificate(Polynomial target_poly, GramMatrix gram)
      : target(std::move(target_poly)), sigma(std::move(gram)) {}

  std::size_t ambient() const { return target.ambient(); }
  friend bool operator==(const SosCertificate&, const SosCertificate&) = default;
};

Polynomial expand(const SosCertificate& cert);

enum class VerificationCheck { dimension, identity, psd, degree, normal_form };
std::string to_string(VerificationCheck check);

struct VerificationOutcome {
  bool accepted = true;
  std::vector<VerificationCheck> failed;
  std::optional<Polynomial> residual;          // target - expand(cert) when nonzero
  std::optional<RationalVector> psd_witness;   // v with v^T sigma v < 0
  std::vector<std::string> messages;

  explicit operator bool() const { return accepted; }
};

VerificationOutcome verify(const SosCertificate& cert);

struct BitSizeReport {
  std::size_t max_numerator_bits = 0;
  std::size_t max_denominator_bits = 0;
  std::size_t max_coefficient_bits = 0;  // max over coefficients of numerator + denominator bits
  std::size_t total_bits = 0;
  std::size_t coefficient_count = 0;
  Rational sigma_coefficient_norm = 0;
};

BitSizeReport bit_size(const SosCertificate& cert);

// sigma = sum weight_k * square_k^2 from the exact LDL^T.
struct WeightedSquare {
  Rational weight;
  Polynomial square_root;
};
// Throws InvalidInput when the Gram matrix is not PSD.
std::vector<WeightedSquare> explicit_squares(const GramMatrix& gram);

// Given a verifying witness for N - sum x_i^2 of degree 2k, builds a verifying
// certificate for N' + m (sign > 0) or N' - m (sign < 0), |m| <= 2d, of degree
// <= 2(d + k - 1). Throws InvalidInput if the witness is malformed or fails.
SosCertificate order_unit_certificate(const SosCertificate& witness, const Monomial& m, unsigned d,
                                      int sign);

// Reynolds-averages sigma and redistributes multipliers over constraint orbits.
// Throws InvalidInput if target is not invariant or constraints are not closed.
SosCertificate symmetrize(const SosCertificate& cert, const GroupSpec& g);

// Embeds a Gram matrix into a larger basis (same n) by zero padding.
GramMatrix pad_gram(const GramMatrix& gram, std::uint32_t degree);

}  // namespace sosym
