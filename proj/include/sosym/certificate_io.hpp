#pragma once

#include <string>

#include "sosym/certificates.hpp"

namespace sosym {

inline constexpr int certificate_format_version = 1;

// Versioned JSON text. Rationals are "num/den" (or "num") strings; polynomials
// are lists of [exponents, coefficient] pairs in grlex-descending order; sigma
// lists the nonzero upper-triangle entries. Output is deterministic.
std::string serialize_certificate(const SosCertificate& cert);

// Throws InvalidInput on malformed or unsupported documents.
SosCertificate parse_certificate(const std::string& text);

}  // namespace sosym
