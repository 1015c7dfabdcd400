#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "gcx/corpus/manifest.hpp"

using namespace gcx::corpus;

namespace {

std::filesystem::path corpus_root() { return GCX_TEST_CORPUS_DIR; }

Scenario parse(const std::string& text) { return parse_scenario(text, "t"); }

const Node& value(const Scenario& s, std::size_t i = 0) {
  REQUIRE(i < s.statements.size());
  REQUIRE(s.statements[i].value);
  return *s.statements[i].value;
}

ParseError parse_error(const std::string& text) {
  try {
    (void)run_scenario(parse(text));
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return ParseError(0, 0, "");
}

// Random expression trees over the whole grammar.
class AstGen {
 public:
  explicit AstGen(unsigned seed) : rng_(seed) {}

  Node expr(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(9)) {
      case 0:
        return leaf();
      case 1: {
        static const char* ops[] = {"+", "-", "*", "/", "^", "**", ":", "<", "<=", ">", ">=", "==", "!=", "and"};
        return Node::binary(ops[pick(14)], expr(depth - 1), expr(depth - 1));
      }
      case 2:
        return Node::unary("-", expr(depth - 1));
      case 3: {
        std::vector<Node> args;
        for (int k = pick(4); k > 0; --k) args.push_back(expr(depth - 1));
        return Node::call(name(), std::move(args));
      }
      case 4: {
        std::vector<Node> items;
        for (int k = pick(4); k > 0; --k) items.push_back(expr(depth - 1));
        return Node::list(std::move(items));
      }
      case 5:
        return Node::modulus(expr(depth - 1));
      default: {
        static const char* ops[] = {"+", "*", "^", "-"};
        return Node::binary(ops[pick(4)], expr(depth - 1), leaf());
      }
    }
  }

  Node leaf() {
    switch (pick(4)) {
      case 0:
        return Node::number(std::to_string(pick(1000)) + (pick(3) == 0 ? "." + std::to_string(pick(100)) : ""));
      case 1:
        return Node::string(pick(2) ? "a \"quoted\" \\ text" : "<x, y | x^2>");
      default:
        return Node::ident(name());
    }
  }

  std::string name() {
    static const char* names[] = {"x", "z1", "dz1", "omega0", "i", "exp", "xi", "beta_2", "T2"};
    return names[pick(9)];
  }

  int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

 private:
  std::mt19937 rng_;
};

int exit_code(const std::string& args) {
  const std::string cmd = std::string(GCX_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("statements and expressions parse as written") {
  const Scenario s = parse(
      "chart C = x1: real, y1: real, x2: real, y2: real\n"
      "form omega0 = dx1^dy1 + dx2^dy2\n");
  CHECK(s.statements.size() == 2);
  CHECK(s.statements[0].keyword == "chart");
  CHECK(value(s, 0).kind == Node::Kind::list);
  CHECK(value(s, 0).kids.size() == 4);
  const Node& w = value(s, 1);
  CHECK(w.kind == Node::Kind::binary);
  CHECK(w.text == "+");
  CHECK(w.kids[0].text == "^");

  // '^' binds tighter than '*', '-x^y' negates the wedge
  CHECK(print(value(parse("form f = 2*dx^dy"))) == "2 * dx^dy");
  CHECK(value(parse("form f = -x^y")).kind == Node::Kind::unary);
  CHECK(value(parse("form f = a^b^c")).kids[1].text == "^");
  CHECK(value(parse("scalar s = 2**3**2")).kids[1].text == "**");
  CHECK(value(parse("scalar s = |z1|")).kind == Node::Kind::modulus);
  CHECK(value(parse("scalar s = ()")).kids.empty());
}

TEST_CASE("the reference spinor and the zero form") {
  const std::string head = "chart C = z1: complex, z2: complex, x1: real, y1: real, x2: real, y2: real\n";
  const Report r = run_scenario(parse(head +
                                      "form omega0 = dx1^dy1 + dx2^dy2 expect terms=2 degree=2\n"
                                      "spinor rho0 = (z1 + dz1^dz2) ^ exp(i*omega0)\n"
                                      "type rho0 zero=z1 samples=3 expect type=2\n"));
  CHECK(r.passed());
  CHECK(r.assertions.size() == 3);

  const Scenario bad = parse(head + "form bad = dx1^dx1\n");
  REQUIRE(bad.warnings.size() == 1);
  CHECK(bad.warnings[0].find("zero form") != std::string::npos);
  const Report rb = run_scenario(bad);
  CHECK(rb.commands.back().status == "flagged");
  CHECK(rb.commands.back().values[0] == std::pair<std::string, std::string>{"zero", "true"});
}

TEST_CASE("parse errors carry positions and expected tokens") {
  try {
    (void)parse("chart C = z1: complex\nform f = dz1 ^ ^ dz1\n");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 16);
    CHECK(e.expected().count("identifier") == 1);
    CHECK(e.expected().count("number") == 1);
  }
  try {
    (void)parse("form f = (a + b\n");
    FAIL("accepted");
  } catch (const ParseError& e) {
    // newlines inside parentheses are skipped, so the error is at the end of input
    CHECK(e.line() == 2);
    CHECK(e.expected().count(")") == 1);
  }
  try {
    (void)parse("frobnicate x = 1\n");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.column() == 1);
  }
  CHECK_THROWS_AS((void)parse("form f = 1 k=1 k=2\n"), ParseError);
  CHECK_THROWS_AS((void)parse("form f = \"open\n"), ParseError);
  CHECK_THROWS_AS((void)parse("form f = 1 @\n"), ParseError);
}

TEST_CASE("semantic errors are parse errors with the statement position") {
  const std::string head = "chart C = z1: complex, z2: complex\n";
  ParseError e = parse_error(head + "form f = dz1 ^ dq\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 16);
  CHECK(std::string(e.what()).find("unknown name 'dq'") != std::string::npos);

  e = parse_error(head + "type nothing samples=2\n");
  CHECK(e.line() == 2);
  e = parse_error(head + "form f = dz1\nstable f\n");
  CHECK(std::string(e.what()).find("expected a spinor") != std::string::npos);
  e = parse_error("manifold M dim=5 euler=0\n");
  CHECK(std::string(e.what()).find("even") != std::string::npos);
  e = parse_error(head + "form f = dz1 * dz2\n");
  CHECK(std::string(e.what()).find("'^'") != std::string::npos);
  // a region condition must be a comparison
  e = parse_error(head + "region R = z1 + 1\n");
  CHECK(e.line() == 2);
}

TEST_CASE("expected errors, notes and failing checks") {
  const Report r = run_scenario(parse(
      "params p=0 q=1 a=1 b=0 expect ok=false\n"
      "manifold M dim=6 euler=0\n"
      "locus L manifold=M kind=luttinger sigma=\"T2\" trivial=true jsymplectic=true\n"
      "surgery X = M locus=L p=0 q=3 a=1 b=0 expect error=\"determinant\"\n"
      "surgery Y = M locus=L p=0 q=1 a=1 b=0 expect note=\"det -1\"\n"));
  REQUIRE(r.assertions.size() == 3);
  CHECK_FALSE(r.assertions[0].passed);
  CHECK(r.assertions[0].actual == "true");
  CHECK(r.assertions[1].passed);
  CHECK(r.assertions[2].passed);
  CHECK(r.failures() == 1);
  CHECK(r.machine().find("status: fail") != std::string::npos);

  // a declaration that fails without an expected error stops the run
  CHECK_THROWS_AS((void)run_scenario(parse("manifold M dim=6 euler=0\n"
                                           "locus L manifold=M kind=luttinger sigma=\"T2\" trivial=true "
                                           "jsymplectic=true\n"
                                           "surgery X = M locus=L p=0 q=3 a=1 b=0\n")),
                  ParseError);
}

TEST_CASE("round trip: printing and re-parsing gives the same scenario") {
  for (const ManifestEntry& e : list_corpus(corpus_root())) {
    CAPTURE(e.name);
    const Scenario s = parse_file(e.file);
    const std::string printed = print(s);
    const Scenario again = parse_scenario(printed, s.name);
    CHECK(same(s, again));
    CHECK(print(again) == printed);
  }

  AstGen gen(11);
  for (int trial = 0; trial < 400; ++trial) {
    const Node n = gen.expr(1 + trial % 5);
    const std::string text = "form f = " + print(n) + "\n";
    CAPTURE(text);
    const Scenario s = parse(text);
    REQUIRE(s.statements.size() == 1);
    CHECK(same(*s.statements[0].value, n));

    // the same tree as a clause value and as an expectation
    Statement st;
    st.keyword = "compare";
    st.name = "a";
    st.value = gen.expr(2);
    st.clauses.push_back({"region", n});
    st.expects.push_back({"agree", gen.expr(2)});
    Scenario wrapped;
    wrapped.statements.push_back(st);
    const Scenario back = parse(print(wrapped));
    CHECK(same(back, wrapped));
  }
}

TEST_CASE("the corpus passes and reports are byte-identical across runs") {
  const auto entries = list_corpus(corpus_root());
  CHECK(entries.size() >= 20);
  for (const ManifestEntry& e : entries) {
    CAPTURE(e.name);
    const Report a = run_file(e.file);
    const Report b = run_file(e.file);
    CHECK(a.passed());
    CHECK(a.str() == b.str());
    CHECK_FALSE(a.reproduces.empty());
    CHECK(a.machine().find("seed: 0\nsamples: 32\n") != std::string::npos);
  }
  // other seeds and a parallel run give the same verdicts
  RunOptions seven;
  seven.seed = 7;
  for (const CorpusOutcome& o : run_corpus(entries, seven, 4)) {
    CAPTURE(o.entry.name);
    CHECK(o.parse_error.empty());
    CHECK(o.report.passed());
  }
}

TEST_CASE("mutating one expected value fails exactly that assertion") {
  int mutated = 0;
  for (const ManifestEntry& e : list_corpus(corpus_root())) {
    const Scenario s = parse_file(e.file);
    for (std::size_t i = 0; i < s.statements.size(); ++i) {
      for (std::size_t j = 0; j < s.statements[i].expects.size(); ++j) {
        Scenario m = s;
        m.statements[i].expects[j].second = Node::string("mutated value");
        const Report r = run_scenario(m);
        CAPTURE(e.name);
        CAPTURE(s.statements[i].line);
        CAPTURE(s.statements[i].expects[j].first);
        REQUIRE(r.failures() == 1);
        for (const Assertion& a : r.assertions) {
          const bool target = a.line == s.statements[i].line && a.key == s.statements[i].expects[j].first;
          CHECK(a.passed != target);
        }
        ++mutated;
      }
    }
  }
  CHECK(mutated > 200);

  // the same through the file text
  const std::string text = read(corpus_root() / "ex_3_3_torsion.gcx");
  std::string edited = text;
  const auto at = edited.find("torsion=\"[5]\"");
  REQUIRE(at != std::string::npos);
  edited.replace(at, 13, "torsion=\"[7]\"");
  const Report r = run_scenario(parse_scenario(edited, "ex_3_3_torsion"));
  REQUIRE(r.failures() == 1);
}

TEST_CASE("manifest") {
  const auto entries = list_corpus(corpus_root());
  auto find = [&](const std::string& name) -> const ManifestEntry* {
    for (const ManifestEntry& e : entries) {
      if (e.name == name) return &e;
    }
    return nullptr;
  };
  // every scenario names what it reproduces on its header line
  for (const ManifestEntry& e : entries) {
    const std::string text = read(e.file);
    const std::string head = "# reproduces: ";
    REQUIRE(text.rfind(head, 0) == 0);
    CHECK_FALSE(e.reproduces.empty());
    CHECK(text.substr(head.size(), text.find('\n') - head.size()) == e.reproduces);
  }
  for (const char* required : {"cor_2_8", "ex_3_3_torsion", "thm_3_6", "lemma_3_3_extension", "thm_3_5_assembly"}) {
    CHECK(find(required));
  }
  for (std::size_t k = 1; k < entries.size(); ++k) CHECK(entries[k - 1].name < entries[k].name);

  const auto empty = std::filesystem::temp_directory_path() / "gcx_empty_corpus_test";
  std::filesystem::create_directories(empty);
  CHECK(list_corpus(empty).empty());
  CHECK(list_corpus(empty / "missing").empty());
  CHECK(run_corpus({}, RunOptions{}).empty());
}

TEST_CASE("named scenario results") {
  const Report cor = run_file(corpus_root() / "cor_2_8.gcx");
  CHECK(cor.passed());
  const Report tor = run_file(corpus_root() / "ex_3_3_torsion.gcx");
  bool seen = false;
  for (const CommandResult& c : tor.commands) {
    for (const auto& [k, v] : c.values) {
      if (k == "torsion" && v == "[5]") seen = true;
    }
  }
  CHECK(seen);
  const Report thm = run_file(corpus_root() / "thm_3_6.gcx");
  CHECK(thm.str().find("heterogeneous = true") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  const std::string root = corpus_root().string();
  CHECK(exit_code("run " + root + "/cor_2_8.gcx") == 0);
  CHECK(exit_code("verify " + root + "/thm_3_5_assembly.gcx") == 0);
  CHECK(exit_code("run --seed 3 --samples 8 --tolerance 1e-8 " + root + "/lemma_3_3_extension.gcx") == 0);
  CHECK(exit_code("run /nonexistent/file.gcx") == 2);
  CHECK(exit_code("run --samples -1 " + root + "/cor_2_8.gcx") == 2);
  CHECK(exit_code("") == 2);

  const auto dir = std::filesystem::temp_directory_path() / "gcx_cli_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "fails.gcx") << "params p=0 q=1 a=1 b=0 expect ok=false\n";
    std::ofstream(dir / "broken.gcx") << "params p=0 q=\n";
  }
  CHECK(exit_code("run " + (dir / "fails.gcx").string()) == 1);
  CHECK(exit_code("run " + (dir / "broken.gcx").string()) == 2);

  const std::string report = (dir / "out.txt").string();
  CHECK(exit_code("run --report " + report + " " + root + "/thm_3_6.gcx") == 0);
  CHECK(read(report).find("status: pass") != std::string::npos);

  const auto empty = dir / "empty";
  std::filesystem::create_directories(empty);
  CHECK(exit_code("corpus list") == 0);
  CHECK(std::system(("GCX_CORPUS_DIR=" + empty.string() + " " + GCX_BINARY + " corpus run-all >/dev/null").c_str()) ==
        0);
  std::filesystem::remove_all(dir);
}
