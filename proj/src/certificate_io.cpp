#include "sosym/certificate_io.hpp"

#include <json.hpp>

#include "sosym/errors.hpp"

namespace sosym {

using json = nlohmann::ordered_json;

namespace {

json poly_to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    json exps = json::array();
    for (auto e : m.exponents()) exps.push_back(e);
    terms.push_back(json::array({exps, to_string(c)}));
  }
  return terms;
}

Rational rational_from_json(const json& j) {
  if (!j.is_string()) throw InvalidInput("rational values must be strings");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(std::string("bad rational: ") + e.what());
  }
}

Polynomial poly_from_json(const json& j, std::size_t n) {
  if (!j.is_array()) throw InvalidInput("polynomial must be an array of terms");
  Polynomial p(n);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_array())
      throw InvalidInput("polynomial term must be [exponents, coefficient]");
    if (term[0].size() != n) throw InvalidInput("exponent vector has the wrong length");
    std::vector<std::uint32_t> e;
    for (const auto& x : term[0]) {
      if (!x.is_number_unsigned()) throw InvalidInput("exponents must be nonnegative integers");
      e.push_back(x.get<std::uint32_t>());
    }
    p.add_term(Monomial(std::move(e)), rational_from_json(term[1]));
  }
  return p;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

std::string serialize_certificate(const SosCertificate& cert) {
  json doc;
  doc["format"] = "sosym-certificate";
  doc["version"] = certificate_format_version;
  doc["variables"] = cert.ambient();
  doc["mode"] = to_string(cert.mode);
  doc["degree_bound"] = cert.degree_bound;
  doc["epsilon"] = to_string(cert.epsilon);
  doc["target"] = poly_to_json(cert.target);

  json entries = json::array();
  for (std::size_t i = 0; i < cert.sigma.size(); ++i)
    for (std::size_t j = i; j < cert.sigma.size(); ++j)
      if (cert.sigma.entries(i, j) != 0) entries.push_back(json::array({i, j, to_string(cert.sigma.entries(i, j))}));
  doc["sigma"] = {{"basis_degree", cert.sigma.basis.degree()}, {"entries", entries}};

  json eqs = json::array();
  for (const auto& e : cert.equalities)
    eqs.push_back({{"constraint", poly_to_json(e.constraint)},
                   {"multiplier", poly_to_json(e.multiplier)},
                   {"squared", e.squared}});
  doc["equalities"] = eqs;

  json gb = json::array();
  for (const auto& g : cert.groebner)
    gb.push_back({{"generator", poly_to_json(g.generator)}, {"multiplier", poly_to_json(g.multiplier)}});
  doc["groebner"] = gb;
  return doc.dump(2) + "\n";
}

SosCertificate parse_certificate(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("certificate is not valid JSON: ") + e.what());
  }
  try {
    if (field(doc, "format") != "sosym-certificate") throw InvalidInput("not a sosym certificate");
    if (field(doc, "version") != certificate_format_version)
      throw InvalidInput("unsupported certificate version");
    const std::size_t n = field(doc, "variables").get<std::size_t>();
    const json& sigma = field(doc, "sigma");
    MonomialBasis basis(n, field(sigma, "basis_degree").get<std::uint32_t>());
    GramMatrix gram(basis);
    for (const auto& e : field(sigma, "entries")) {
      if (!e.is_array() || e.size() != 3) throw InvalidInput("sigma entry must be [row, col, value]");
      const auto i = e[0].get<std::size_t>();
      const auto j = e[1].get<std::size_t>();
      if (i >= gram.size() || j >= gram.size()) throw InvalidInput("sigma entry index out of range");
      const Rational v = rational_from_json(e[2]);
      gram.entries(i, j) = v;
      gram.entries(j, i) = v;
    }
    SosCertificate cert(poly_from_json(field(doc, "target"), n), std::move(gram));
    cert.mode = parse_certificate_mode(field(doc, "mode").get<std::string>());
    cert.degree_bound = field(doc, "degree_bound").get<int>();
    cert.epsilon = rational_from_json(field(doc, "epsilon"));
    for (const auto& e : field(doc, "equalities"))
      cert.equalities.push_back({poly_from_json(field(e, "constraint"), n),
                                 poly_from_json(field(e, "multiplier"), n), field(e, "squared").get<bool>()});
    for (const auto& g : field(doc, "groebner"))
      cert.groebner.push_back({poly_from_json(field(g, "generator"), n), poly_from_json(field(g, "multiplier"), n)});
    return cert;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace sosym
