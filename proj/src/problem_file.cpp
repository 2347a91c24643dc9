#include "sosym/problem_file.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sosym/errors.hpp"
#include "sosym/poly_parse.hpp"

namespace sosym {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;  // column of the first value character
};

const std::set<std::string> repeatable_keys = {"eq", "groebner"};
const std::set<std::string> known_keys = {"vars",    "group",     "domain",    "groebner",    "eq",   "target",
                                          "degree",  "epsilon",   "tolerance", "max_iters",   "denom_bound",
                                          "seed"};

std::string_view trim(std::string_view s, int* leading = nullptr) {
  std::size_t a = 0;
  while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  std::size_t b = s.size();
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (leading) *leading = static_cast<int>(a);
  return s.substr(a, b - a);
}

std::vector<Entry> split_entries(std::string_view text) {
  std::vector<Entry> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    int lead = 0;
    std::string_view body = trim(line, &lead);
    if (body.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line_no, lead + 1);
    Entry e;
    e.key = std::string(trim(line.substr(0, colon)));
    int value_lead = 0;
    e.value = std::string(trim(line.substr(colon + 1), &value_lead));
    e.line = line_no;
    e.column = static_cast<int>(colon) + 2 + value_lead;
    if (!known_keys.count(e.key)) throw ParseError("unknown key '" + e.key + "'", line_no, lead + 1);
    out.push_back(std::move(e));
    if (end == text.size()) break;
  }
  return out;
}

template <class T>
T parse_integer(const Entry& e, T min_value) {
  T value{};
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || e.value.empty() || value < min_value)
    throw ParseError("expected an integer >= " + std::to_string(min_value) + " for '" + e.key + "'", e.line, e.column);
  return value;
}

Rational parse_rational_entry(const Entry& e, std::string_view text, int column) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument&) {
    throw ParseError("expected a rational number in '" + e.key + "'", e.line, column);
  }
}

GroupSpec parse_group(const Entry& e, std::size_t n) {
  if (e.value == "trivial") return GroupSpec::trivial(n);
  std::vector<std::size_t> blocks;
  std::size_t i = 0;
  const std::string& s = e.value;
  auto fail = [&](const std::string& what) { throw ParseError(what, e.line, e.column + static_cast<int>(i)); };
  while (true) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i + 1 >= s.size() || s[i] != 'S' || s[i + 1] != '(') fail("expected 'S(<size>)'");
    i += 2;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i || j >= s.size() || s[j] != ')') fail("expected a block size followed by ')'");
    const std::size_t size = std::stoul(s.substr(i, j - i));
    if (size == 0) fail("block size must be positive");
    blocks.push_back(size);
    i = j + 1;
    while (i < s.size() && s[i] == ' ') ++i;
    if (i == s.size()) break;
    if (s[i] != 'x') fail("expected 'x' between blocks");
    ++i;
  }
  std::size_t total = 0;
  for (auto b : blocks) total += b;
  if (total != n)
    throw ParseError("group blocks cover " + std::to_string(total) + " variables, expected " + std::to_string(n),
                     e.line, e.column);
  return GroupSpec(std::move(blocks));
}

std::vector<Rational> parse_domain(const Entry& e) {
  const std::string& s = e.value;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("domain must look like {r1,...,r2k}", e.line, e.column);
  std::vector<Rational> roots;
  std::size_t start = 1;
  const std::size_t close = s.size() - 1;
  while (start <= close) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos || comma > close) comma = close;
    int lead = 0;
    std::string_view item = trim(std::string_view(s).substr(start, comma - start), &lead);
    const int column = e.column + static_cast<int>(start) + lead;
    if (item.empty()) throw ParseError("empty domain element", e.line, column);
    roots.push_back(parse_rational_entry(e, item, column));
    start = comma + 1;
  }
  if (roots.size() % 2 != 0) throw ParseError("domain needs an even number of roots", e.line, e.column);
  std::set<Rational> seen(roots.begin(), roots.end());
  if (seen.size() != roots.size()) throw ParseError("domain roots must be distinct", e.line, e.column);
  return roots;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ProblemInstance parse_problem(std::string_view text) {
  const std::vector<Entry> entries = split_entries(text);
  std::map<std::string, const Entry*> single;
  for (const auto& e : entries) {
    if (repeatable_keys.count(e.key)) continue;
    if (!single.emplace(e.key, &e).second) throw ParseError("duplicate key '" + e.key + "'", e.line, 1);
  }
  auto vars_it = single.find("vars");
  if (vars_it == single.end()) throw ParseError("missing 'vars'", 0, 0);
  ProblemInstance inst;
  inst.variables = parse_integer<std::size_t>(*vars_it->second, 1);
  const std::size_t n = inst.variables;
  inst.group = GroupSpec::trivial(n);

  bool have_target = false;
  for (const auto& e : entries) {
    if (e.key == "group") {
      inst.group = parse_group(e, n);
    } else if (e.key == "domain") {
      inst.domain_roots = parse_domain(e);
    } else if (e.key == "groebner") {
      inst.groebner.push_back(parse_polynomial(e.value, n, e.line, e.column));
    } else if (e.key == "eq") {
      inst.equalities.push_back(parse_polynomial(e.value, n, e.line, e.column));
    } else if (e.key == "target") {
      have_target = true;
      if (e.value != "refute") inst.target = parse_polynomial(e.value, n, e.line, e.column);
    } else if (e.key == "degree") {
      inst.degree = parse_integer<unsigned>(e, 1);
    } else if (e.key == "epsilon") {
      inst.epsilon = parse_rational_entry(e, e.value, e.column);
      if (inst.epsilon < 0) throw ParseError("epsilon must be nonnegative", e.line, e.column);
    } else if (e.key == "tolerance") {
      char* end = nullptr;
      inst.solver.tolerance = std::strtod(e.value.c_str(), &end);
      if (e.value.empty() || *end != '\0' || !(inst.solver.tolerance > 0))
        throw ParseError("tolerance must be a positive number", e.line, e.column);
    } else if (e.key == "max_iters") {
      inst.solver.max_iters = parse_integer<int>(e, 1);
    } else if (e.key == "denom_bound") {
      try {
        inst.denominator_bound = Integer(e.value, 10);
      } catch (const std::invalid_argument&) {
        throw ParseError("denom_bound must be a positive integer", e.line, e.column);
      }
      if (inst.denominator_bound < 1) throw ParseError("denom_bound must be a positive integer", e.line, e.column);
    } else if (e.key == "seed") {
      inst.solver.seed = parse_integer<std::uint64_t>(e, 0);
    }
  }
  if (inst.domain_roots && !inst.groebner.empty()) {
    const Entry* d = single.at("domain");
    throw ParseError("'domain' and 'groebner' are mutually exclusive", d->line, 1);
  }
  if (!have_target) throw ParseError("missing 'target' (a polynomial or 'refute')", 0, 0);
  return inst;
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const ProblemInstance& inst) {
  std::ostringstream out;
  out << "vars: " << inst.variables << "\n";
  out << "group: " << to_string(inst.group) << "\n";
  if (inst.domain_roots) {
    out << "domain: {";
    for (std::size_t i = 0; i < inst.domain_roots->size(); ++i)
      out << (i ? "," : "") << to_string((*inst.domain_roots)[i]);
    out << "}\n";
  }
  for (const auto& g : inst.groebner) out << "groebner: " << to_string(g) << "\n";
  for (const auto& p : inst.equalities) out << "eq: " << to_string(p) << "\n";
  out << "target: " << (inst.target ? to_string(*inst.target) : std::string("refute")) << "\n";
  out << "degree: " << inst.degree << "\n";
  out << "epsilon: " << to_string(inst.epsilon) << "\n";
  out << "tolerance: " << format_double(inst.solver.tolerance) << "\n";
  out << "max_iters: " << inst.solver.max_iters << "\n";
  out << "denom_bound: " << inst.denominator_bound.get_str() << "\n";
  out << "seed: " << inst.solver.seed << "\n";
  return out.str();
}

bool same_instance(const ProblemInstance& a, const ProblemInstance& b) {
  return a.variables == b.variables && a.group == b.group && a.equalities == b.equalities &&
         a.domain_roots == b.domain_roots && a.groebner == b.groebner && a.target == b.target &&
         a.degree == b.degree && a.epsilon == b.epsilon && a.solver.tolerance == b.solver.tolerance &&
         a.solver.max_iters == b.solver.max_iters && a.solver.seed == b.solver.seed &&
         a.denominator_bound == b.denominator_bound;
}

}  // namespace sosym
