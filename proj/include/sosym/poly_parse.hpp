#pragma once

#include <cstddef>
#include <string_view>

#include "sosym/poly.hpp"

namespace sosym {

// Parses a polynomial over variables x1..xn, e.g. "3/2*x1^2*x3 - x2 + 1",
// "(x1 - 1)^2", "0.5*x1*x2". Supports + - * ^ and parentheses; exponents are
// nonnegative integers. Errors are ParseError with line/column relative to
// `line` and `column_offset` (both 1-based) so callers can report positions in
// a larger file.
Polynomial parse_polynomial(std::string_view text, std::size_t n, int line = 1,
                            int column_offset = 1);

}  // namespace sosym
