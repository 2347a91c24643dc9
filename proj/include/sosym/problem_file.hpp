#pragma once

#include <string>
#include <string_view>

#include "sosym/pipeline.hpp"

namespace sosym {

// Line-oriented "key: value" format; '#' starts a comment. Keys:
//   vars, group, domain, groebner (repeatable), eq (repeatable), target,
//   degree, epsilon, tolerance, max_iters, denom_bound, seed.
// Throws ParseError (with line and column) on syntax errors, unknown or
// duplicate keys, and out-of-range variables.
ProblemInstance parse_problem(std::string_view text);
ProblemInstance load_problem(const std::string& path);

// Canonical text form; parse_problem(serialize_problem(p)) == p.
std::string serialize_problem(const ProblemInstance& inst);

bool same_instance(const ProblemInstance& a, const ProblemInstance& b);

}  // namespace sosym
