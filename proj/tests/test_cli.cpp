#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sosym/certificate_io.hpp"
#include "sosym/cli.hpp"
#include "sosym/errors.hpp"
#include "sosym/problem_file.hpp"
#include "support.hpp"

using namespace sosym;
using sosym::test::poly;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("sosym_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }
  const fs::path& root() const { return path_; }

 private:
  fs::path path_;
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* knapsack1 = "vars: 1\ndomain: {0,1}\neq: x1 - 3/2\ntarget: refute\ndegree: 1\n";

ProblemInstance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(1, 4);
  ProblemInstance inst;
  inst.variables = static_cast<std::size_t>(small(rng));
  std::vector<std::size_t> blocks;
  std::size_t left = inst.variables;
  while (left > 0) {
    const std::size_t b = std::min<std::size_t>(left, static_cast<std::size_t>(small(rng)));
    blocks.push_back(b);
    left -= b;
  }
  inst.group = GroupSpec(blocks);
  if (small(rng) % 2) {
    inst.domain_roots = std::vector<Rational>{Rational(-1), Rational(1, 3)};
  } else {
    inst.groebner.push_back(test::random_polynomial(rng, inst.variables, 2, 3));
  }
  for (int i = 0; i < small(rng); ++i) inst.equalities.push_back(test::random_polynomial(rng, inst.variables, 2, 4));
  if (small(rng) % 2) inst.target = test::random_polynomial(rng, inst.variables, 2, 3);
  inst.degree = static_cast<unsigned>(small(rng));
  inst.epsilon = Rational(1, small(rng) * 7);
  inst.solver.tolerance = 1e-7 * small(rng);
  inst.solver.max_iters = 100 * small(rng);
  inst.solver.seed = static_cast<std::uint64_t>(small(rng));
  inst.denominator_bound = Integer(1000 * small(rng));
  return inst;
}

}  // namespace

TEST_CASE("problem file examples") {
  const ProblemInstance inst =
      parse_problem("vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 + x2 - 1\ntarget: refute\ndegree: 2");
  CHECK(inst.refutation());
  CHECK(inst.group == GroupSpec::symmetric(2));
  CHECK(inst.degree == 2);
  CHECK(inst.equalities == std::vector<Polynomial>{poly("x1 + x2 - 1", 2)});

  CHECK_THROWS_AS(parse_problem("vars: 2\neq: x1 + x3\ntarget: refute\n"), ParseError);
  const ProblemInstance blocks = parse_problem("vars: 3\ngroup: S(2)xS(1)\ntarget: x1\n");
  CHECK(blocks.group.block_sizes() == std::vector<std::size_t>{2, 1});
}

TEST_CASE("problem file errors carry positions") {
  auto position = [](const std::string& text) {
    try {
      parse_problem(text);
    } catch (const ParseError& e) {
      return std::make_pair(e.line(), e.column());
    }
    return std::make_pair(-1, -1);
  };
  CHECK(position("vars: 2\neq: x1 + x3\ntarget: refute\n") == std::make_pair(2, 10));
  CHECK(position("vars: 2\nbogus: 1\ntarget: refute\n").first == 2);
  CHECK(position("vars: 2\ndegree: 1\ndegree: 2\ntarget: refute\n").first == 3);
  CHECK(position("vars: 2\ngroup: S(3)\ntarget: refute\n").first == 2);
  CHECK(position("vars: 1\ndomain: {0,1,2}\ntarget: refute\n").first == 2);
  CHECK(position("vars: 1\n  # comment only\nnot a pair\n").first == 3);
  CHECK_THROWS_AS(parse_problem("vars: 1\n"), ParseError);
}

TEST_CASE("problem files round-trip") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const ProblemInstance inst = random_instance(rng);
    const std::string text = serialize_problem(inst);
    CHECK(same_instance(parse_problem(text), inst));
    CHECK(serialize_problem(parse_problem(text)) == text);
  }
}

TEST_CASE("refute writes a certificate that verifies") {
  TempDir dir;
  const std::string problem = dir.file("k1.txt", knapsack1);
  const std::string cert = dir.path("k1.json");
  const Run r = run({"refute", problem, "-o", cert});
  CHECK(r.code == exit_success);
  CHECK(r.out.find("certified") != std::string::npos);
  CHECK(run({"verify", cert}).code == exit_success);
  const Run bits = run({"bitsize", cert, "--json"});
  CHECK(bits.code == exit_success);
  CHECK(bits.out.find("max_coefficient_bits") != std::string::npos);

  // Determinism: a second run produces the same bytes.
  const std::string again = dir.path("k1b.json");
  CHECK(run({"refute", problem, "-o", again}).code == exit_success);
  CHECK(read(cert) == read(again));
}

TEST_CASE("verify exit codes") {
  TempDir dir;
  SosCertificate c(Polynomial(1, -1), GramMatrix(MonomialBasis(1, 0)));
  c.equalities.push_back({poly("x1 - 1", 1), Polynomial(1, 1), false});
  c.equalities.push_back({poly("x1", 1), Polynomial(1, -1), false});
  c.degree_bound = 1;
  CHECK(run({"verify", dir.file("good.json", serialize_certificate(c))}).code == exit_success);
  c.equalities[1].multiplier = Polynomial(1, -2);
  const Run bad = run({"verify", dir.file("bad.json", serialize_certificate(c))});
  CHECK(bad.code == exit_rejected);
  CHECK(bad.out.find("rejected") != std::string::npos);
  CHECK(run({"verify", dir.file("junk.json", "{")}).code == exit_usage);
}

TEST_CASE("prove -1 on a satisfiable system") {
  TempDir dir;
  const std::string problem =
      dir.file("neg.txt", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 + x2 - 1\ntarget: -1\n");
  const Run r = run({"prove", problem});
  CHECK(r.code == exit_rejected);
  CHECK(r.out.find("no-certificate-at-degree") != std::string::npos);
  CHECK(r.out.find("(numeric evidence)") != std::string::npos);
  CHECK(r.out.find("certified") == std::string::npos);
}

TEST_CASE("informational commands") {
  TempDir dir;
  const std::string problem = dir.file("p.txt", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1^2 + x2 - 1\ntarget: x1\n");
  const Run orbits = run({"orbits", problem});
  CHECK(orbits.code == exit_success);
  CHECK(orbits.out.find("pair orbits: 5 (indicator matrices: 4)") != std::string::npos);
  const Run reduce = run({"reduce", problem});
  CHECK(reduce.out.find("-> x1 + x2 - 1") != std::string::npos);
  const Run reynolds = run({"reynolds", problem});
  CHECK(reynolds.out.find("target: 1/2*x1 + 1/2*x2") != std::string::npos);
}

TEST_CASE("pseudoexpect prints a moment table") {
  TempDir dir;
  const std::string problem =
      dir.file("h.txt", "vars: 3\ngroup: S(3)\ndomain: {0,1}\neq: x1 + x2 + x3 - 3/2\ntarget: refute\n");
  const std::string table = dir.path("moments.json");
  const Run r = run({"pseudoexpect", problem, "--json", "-o", table});
  CHECK(r.code == exit_success);
  CHECK(read(table).find("\"1/8\"") != std::string::npos);
  const std::string contradiction = dir.file("c.txt", "vars: 1\ndomain: {0,1}\neq: x1\neq: x1 - 1\ntarget: refute\n");
  CHECK(run({"pseudoexpect", contradiction}).code == exit_rejected);
}

TEST_CASE("usage and resource errors") {
  CHECK(run({}).code == exit_usage);
  CHECK(run({"frobnicate", "x"}).code == exit_usage);
  CHECK(run({"refute"}).code == exit_usage);
  CHECK(run({"refute", "/nonexistent/problem.txt"}).code == exit_usage);
  TempDir dir;
  const std::string problem = dir.file("big.txt", "vars: 6\ndomain: {0,1}\neq: x1 + x2 + x3 + x4 + x5 + x6 - 1/2\ntarget: refute\ndegree: 3\n");
  // 3570 indicator weights under the trivial group exceed the solver cap.
  CHECK(run({"refute", problem}).code == exit_resource);
  const std::string bad_syntax = dir.file("syntax.txt", "vars: 1\neq: x1 +\ntarget: refute\n");
  const Run s = run({"orbits", bad_syntax});
  CHECK(s.code == exit_usage);
  CHECK(s.err.find("line 2") != std::string::npos);
}

TEST_CASE("flags override the file") {
  TempDir dir;
  const std::string problem = dir.file("k.txt", knapsack1);
  const std::string dump = dir.path("sys.txt");
  const Run r = run({"refute", problem, "--degree", "2", "--seed", "3", "--tolerance", "1e-8", "--max-iters", "300",
                     "--denom-bound", "65536", "-o", dir.path("c.json"), "--dump-sdp", dump, "--json"});
  CHECK(r.code == exit_success);
  CHECK(r.out.find("\"degree_bound\": 4") != std::string::npos);
  std::istringstream header(read(dump));
  std::size_t k1 = 0, k2 = 0, k3 = 0, size = 0;
  header >> k1 >> k2 >> k3 >> size;
  CHECK(size == 3);  // basis 1, x1, x1^2
  CHECK(k3 == 1);
}

TEST_CASE("batch mode runs every problem file") {
  TempDir dir;
  dir.file("a.txt", knapsack1);
  dir.file("b.txt", "vars: 2\ngroup: S(2)\ndomain: {0,1}\neq: x1 + x2 - 1\ntarget: refute\n");
  const Run r = run({"refute", "--batch", dir.root().string()});
  CHECK(r.code == exit_rejected);
  CHECK(r.out.find("a.txt") != std::string::npos);
  CHECK(r.out.find("b.txt") != std::string::npos);
  CHECK(fs::exists(dir.path("a.txt.cert.json")));
  const Run v = run({"verify", "--batch", dir.root().string()});
  CHECK(v.code == exit_success);
}

TEST_CASE("installed binary honours the exit-code contract") {
  TempDir dir;
  const std::string problem = dir.file("k.txt", knapsack1);
  const std::string cert = dir.path("k.json");
  const std::string cli = SOSYM_CLI_PATH;
  CHECK(std::system((cli + " refute " + problem + " -o " + cert + " > /dev/null").c_str()) == 0);
  CHECK(std::system((cli + " verify " + cert + " > /dev/null").c_str()) == 0);
  const int usage = std::system((cli + " nonsense > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(usage) == exit_usage);
}
