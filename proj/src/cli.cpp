#include "sosym/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "sosym/certificate_io.hpp"
#include "sosym/errors.hpp"
#include "sosym/problem_file.hpp"

namespace sosym {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Options {
  std::string command;
  std::string input;
  std::string batch_dir;
  std::string output;
  std::string dump_sdp;
  std::optional<unsigned> degree;
  std::optional<unsigned> max_degree;
  std::optional<std::string> epsilon;
  std::optional<double> tolerance;
  std::optional<std::string> denom_bound;
  std::optional<int> max_iters;
  std::optional<std::uint64_t> seed;
  bool json_output = false;
};

const std::vector<std::string> commands = {"orbits", "reduce",       "reynolds", "prove",
                                           "refute", "pseudoexpect", "verify",   "bitsize"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

ProblemInstance load_with_overrides(const Options& opt, const std::string& path) {
  ProblemInstance inst = load_problem(path);
  if (opt.degree) inst.degree = *opt.degree;
  if (opt.epsilon) {
    try {
      inst.epsilon = parse_rational(*opt.epsilon);
    } catch (const std::invalid_argument&) {
      throw InvalidInput("--epsilon expects a rational number");
    }
    if (inst.epsilon < 0) throw InvalidInput("--epsilon must be nonnegative");
  }
  if (opt.tolerance) inst.solver.tolerance = *opt.tolerance;
  if (opt.max_iters) inst.solver.max_iters = *opt.max_iters;
  if (opt.seed) inst.solver.seed = *opt.seed;
  if (opt.denom_bound) {
    try {
      inst.denominator_bound = Integer(*opt.denom_bound, 10);
    } catch (const std::invalid_argument&) {
      throw InvalidInput("--denom-bound expects a positive integer");
    }
    if (inst.denominator_bound < 1) throw InvalidInput("--denom-bound expects a positive integer");
  }
  return inst;
}

json counts_json(const VariableCountReport& r) {
  return {{"gram_basis_size", r.gram_basis_size},
          {"pair_count", r.pair_count},
          {"pair_orbits", r.pair_orbits},
          {"indicator_count", r.indicator_count},
          {"constraint_orbits", r.constraint_orbits},
          {"multiplier_variables_before", r.multiplier_variables_before},
          {"multiplier_variables_after", r.multiplier_variables_after},
          {"variables_before", r.before},
          {"variables_after", r.after}};
}

json bits_json(const BitSizeReport& b) {
  return {{"max_numerator_bits", b.max_numerator_bits},
          {"max_denominator_bits", b.max_denominator_bits},
          {"max_coefficient_bits", b.max_coefficient_bits},
          {"total_bits", b.total_bits},
          {"coefficient_count", b.coefficient_count},
          {"sigma_coefficient_norm", to_string(b.sigma_coefficient_norm)}};
}

void print_bits(std::ostream& out, const BitSizeReport& b) {
  out << "max numerator bits: " << b.max_numerator_bits << "\n"
      << "max denominator bits: " << b.max_denominator_bits << "\n"
      << "max coefficient bits: " << b.max_coefficient_bits << "\n"
      << "total bits: " << b.total_bits << "\n"
      << "coefficients: " << b.coefficient_count << "\n"
      << "sigma coefficient norm: " << to_string(b.sigma_coefficient_norm) << "\n";
}

int cmd_orbits(const Options& opt, const std::string& path, std::ostream& out) {
  const ProblemInstance inst = load_with_overrides(opt, path);
  const VariableCountReport r = variable_count_report(inst);
  if (opt.json_output) {
    json doc = counts_json(r);
    doc["group"] = to_string(inst.group);
    doc["gram_degree"] = inst.gram_degree();
    out << doc.dump(2) << "\n";
    return exit_success;
  }
  out << "group: " << to_string(inst.group) << "\n"
      << "gram basis degree: " << inst.gram_degree() << "\n"
      << "|W| = " << r.gram_basis_size << ", |Y| = " << r.pair_count << "\n"
      << "pair orbits: " << r.pair_orbits << " (indicator matrices: " << r.indicator_count << ")\n"
      << "constraint orbits: " << r.constraint_orbits << "\n"
      << "multiplier variables: " << r.multiplier_variables_before << " -> " << r.multiplier_variables_after << "\n"
      << "sdp variables: " << r.before << " -> " << r.after << "\n";
  return exit_success;
}

int cmd_reduce(const Options& opt, const std::string& path, std::ostream& out) {
  const ProblemInstance inst = load_with_overrides(opt, path);
  const GroebnerBasis ideal = inst.ideal_basis();
  NormalFormCache nf(ideal);
  json doc = json::array();
  auto emit = [&](const std::string& label, const Polynomial& p) {
    const Polynomial r = nf.of(p);
    if (opt.json_output)
      doc.push_back({{"input", label}, {"polynomial", to_string(p)}, {"normal_form", to_string(r)}});
    else
      out << label << ": " << to_string(p) << " -> " << to_string(r) << "\n";
  };
  for (std::size_t i = 0; i < inst.equalities.size(); ++i) emit("eq" + std::to_string(i + 1), inst.equalities[i]);
  if (inst.target) emit("target", *inst.target);
  if (opt.json_output) out << doc.dump(2) << "\n";
  return exit_success;
}

int cmd_reynolds(const Options& opt, const std::string& path, std::ostream& out) {
  const ProblemInstance inst = load_with_overrides(opt, path);
  std::vector<std::pair<std::string, Polynomial>> inputs;
  if (inst.target) inputs.emplace_back("target", *inst.target);
  for (std::size_t i = 0; i < inst.equalities.size(); ++i)
    inputs.emplace_back("eq" + std::to_string(i + 1), inst.equalities[i]);
  json doc = json::array();
  for (const auto& [label, p] : inputs) {
    const Polynomial avg = reynolds_poly(inst.group, p);
    if (opt.json_output)
      doc.push_back({{"input", label}, {"polynomial", to_string(p)}, {"reynolds", to_string(avg)}});
    else
      out << label << ": " << to_string(avg) << "\n";
  }
  if (opt.json_output) out << doc.dump(2) << "\n";
  return exit_success;
}

std::string default_certificate_path(const std::string& input) { return input + ".cert.json"; }

int cmd_search(const Options& opt, const std::string& path, std::ostream& out) {
  const ProblemInstance inst = load_with_overrides(opt, path);
  const bool refute = opt.command == "refute";
  if (refute && !inst.refutation()) throw InvalidInput("refute expects 'target: refute'");
  if (!refute && inst.refutation()) throw InvalidInput("prove expects a target polynomial");

  const PipelineResult result = opt.max_degree ? search_degrees(inst, *opt.max_degree)
                                : refute    ? refute_invariant_system(inst)
                                            : prove_invariant(inst);
  if (!opt.dump_sdp.empty()) {
    std::ofstream dump(opt.dump_sdp);
    if (!dump) throw InvalidInput("cannot write '" + opt.dump_sdp + "'");
    write_sparse(dump, result.system);
  }
  const unsigned degree = result.certificate ? static_cast<unsigned>(result.certificate->degree_bound) : inst.degree;
  std::string cert_path;
  if (result.certified()) {
    cert_path = opt.output.empty() ? default_certificate_path(path) : opt.output;
    write_file(cert_path, serialize_certificate(*result.certificate));
  }

  if (opt.json_output) {
    json doc;
    doc["status"] = to_string(result.status);
    doc["mode"] = opt.command;
    doc["evidence"] = result.evidence;
    doc["message"] = result.message;
    if (result.certified()) {
      doc["certificate"] = cert_path;
      doc["degree_bound"] = degree;
      doc["bits"] = bits_json(*result.bits);
    }
    doc["variables"] = counts_json(result.counts);
    if (result.dual_witness) doc["dual_witness"] = result.dual_witness->label;
    out << doc.dump(2) << "\n";
  } else if (result.certified()) {
    out << "== certified (exact verification passed) ==\n"
        << "mode: " << opt.command << "\n"
        << "certificate degree: " << degree << "\n"
        << "certificate: " << cert_path << "\n"
        << "max coefficient bits: " << result.bits->max_coefficient_bits << "\n"
        << "sdp variables: " << result.counts.before << " -> " << result.counts.after << "\n";
  } else {
    out << to_string(result.status) << " " << inst.degree << " (" << result.evidence << ")\n";
    if (!result.message.empty()) out << "numeric diagnostics: " << result.message << "\n";
  }
  return result.certified() ? exit_success : exit_rejected;
}

int cmd_pseudoexpect(const Options& opt, const std::string& path, std::ostream& out) {
  const ProblemInstance inst = load_with_overrides(opt, path);
  const unsigned half = inst.gram_degree();
  const std::optional<Pseudoexpectation> pe = find_pseudoexpectation(inst, half);
  if (!pe) {
    if (opt.json_output)
      out << json{{"status", "none-found"}, {"half_degree", half}}.dump(2) << "\n";
    else
      out << "no pseudoexpectation found at half-degree " << half << " (numeric evidence)\n";
    return exit_rejected;
  }
  const PseudoexpectationCheck check = check_pseudoexpectation(inst, *pe);
  json doc;
  doc["status"] = "found";
  doc["label"] = pe->label;
  doc["group"] = to_string(pe->group);
  doc["half_degree"] = half;
  json moments = json::array();
  for (std::size_t i = 0; i < pe->representatives.size(); ++i) {
    json row = {{"monomial", to_string(pe->representatives[i])}, {"value", pe->moments[i]}};
    if (pe->exact_moments) row["exact"] = to_string((*pe->exact_moments)[i]);
    moments.push_back(row);
  }
  doc["moments"] = moments;
  doc["max_violation"] = check.max_violation;
  doc["min_eigenvalue"] = check.min_eigenvalue;
  doc["exact_ok"] = check.exact_ok;

  std::ostringstream table;
  table << "pseudoexpectation (" << pe->label << "), group " << to_string(pe->group) << ", half-degree " << half
        << "\n";
  for (std::size_t i = 0; i < pe->representatives.size(); ++i) {
    table << "L[" << to_string(pe->representatives[i]) << "] = " << pe->moments[i];
    if (pe->exact_moments) table << "  (" << to_string((*pe->exact_moments)[i]) << ")";
    table << "\n";
  }
  table << "max constraint violation: " << check.max_violation << "\n"
        << "moment matrix min eigenvalue: " << check.min_eigenvalue << "\n";
  const std::string rendered = opt.json_output ? doc.dump(2) + "\n" : table.str();
  if (!opt.output.empty()) write_file(opt.output, rendered);
  out << rendered;
  return exit_success;
}

int cmd_verify(const Options& opt, const std::string& path, std::ostream& out) {
  const SosCertificate cert = parse_certificate(read_file(path));
  const VerificationOutcome outcome = verify(cert);
  if (opt.json_output) {
    json failed = json::array();
    for (auto f : outcome.failed) failed.push_back(to_string(f));
    json doc = {{"accepted", outcome.accepted}, {"failed", failed}, {"messages", outcome.messages}};
    if (outcome.residual) doc["residual"] = to_string(*outcome.residual);
    out << doc.dump(2) << "\n";
  } else if (outcome) {
    out << "accepted\n";
  } else {
    out << "rejected\n";
    for (const auto& m : outcome.messages) out << "  " << m << "\n";
    if (outcome.residual) out << "  residual: " << to_string(*outcome.residual) << "\n";
  }
  return outcome ? exit_success : exit_rejected;
}

int cmd_bitsize(const Options& opt, const std::string& path, std::ostream& out) {
  const SosCertificate cert = parse_certificate(read_file(path));
  const BitSizeReport b = bit_size(cert);
  if (opt.json_output)
    out << bits_json(b).dump(2) << "\n";
  else
    print_bits(out, b);
  return exit_success;
}

int dispatch(const Options& opt, const std::string& path, std::ostream& out) {
  if (opt.command == "orbits") return cmd_orbits(opt, path, out);
  if (opt.command == "reduce") return cmd_reduce(opt, path, out);
  if (opt.command == "reynolds") return cmd_reynolds(opt, path, out);
  if (opt.command == "prove" || opt.command == "refute") return cmd_search(opt, path, out);
  if (opt.command == "pseudoexpect") return cmd_pseudoexpect(opt, path, out);
  if (opt.command == "verify") return cmd_verify(opt, path, out);
  return cmd_bitsize(opt, path, out);
}

int guarded(const Options& opt, const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(opt, path, out);
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
    return exit_usage;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return exit_resource;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return exit_resource;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return exit_usage;
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Symmetry-reduced sum-of-squares certificates", "sosym"};
  app.add_option("command", opt.command, "orbits | reduce | reynolds | prove | refute | pseudoexpect | verify | bitsize")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("file", opt.input, "problem file (certificate file for verify / bitsize)");
  app.add_option("--batch", opt.batch_dir, "run the command on every file in a directory, sequentially");
  app.add_option("-o,--output", opt.output, "output file for certificates or moment tables");
  app.add_option("--dump-sdp", opt.dump_sdp, "write the assembled feasibility system in sparse text form");
  app.add_option("--degree", opt.degree, "half-degree d")->check(CLI::PositiveNumber);
  app.add_option("--max-degree", opt.max_degree, "try d = 1..max and stop at the first certificate")
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", opt.epsilon, "prove-mode slack (rational)");
  app.add_option("--tolerance", opt.tolerance, "numeric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--denom-bound", opt.denom_bound, "largest denominator tried when rounding");
  app.add_option("--max-iters", opt.max_iters, "solver iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "solver seed");
  app.add_flag("--json", opt.json_output, "machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_success;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return exit_usage;
  }
  if (opt.input.empty() == opt.batch_dir.empty()) {
    err << "give exactly one of a file argument or --batch <dir>\n";
    return exit_usage;
  }
  if (opt.input.size()) return guarded(opt, opt.input, out, err);

  std::error_code ec;
  if (!fs::is_directory(opt.batch_dir, ec)) {
    err << "--batch expects a directory\n";
    return exit_usage;
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(opt.batch_dir))
    if (entry.is_regular_file()) {
      // Certificates are JSON; problem files are anything else.
      const bool is_json = entry.path().extension() == ".json";
      const bool wants_json = opt.command == "verify" || opt.command == "bitsize";
      if (is_json == wants_json) files.push_back(entry.path().string());
    }
  std::sort(files.begin(), files.end());
  int worst = exit_success;
  Options per_file = opt;
  for (const auto& f : files) {
    out << "### " << f << "\n";
    per_file.output.clear();
    const int code = guarded(per_file, f, out, err);
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace sosym
