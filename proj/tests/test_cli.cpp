#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "stratum/cli.hpp"
#include "stratum/ordinal.hpp"
#include "stratum/parse.hpp"
#include "stratum/stratify.hpp"
#include "support/gen.hpp"

using namespace stratum;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string last_line(const std::string& text) {
  std::string t = text;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  return t.substr(t.rfind('\n') + 1);
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("stratum_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("documented examples") {
  auto r = run({"stratify", "--x", "tail:limits-from(1)", "(K (1=0) -> K K (1=0))"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "(K^{w} (1=0) -> K^{w*2} K^{w} (1=0))\n");

  r = run({"depth", "K K (1=0)"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "2\n");

  r = run({"e2-demo", "--budget", "1000"});
  CHECK(r.code == cli::kOk);
  CHECK(last_line(r.out) == "theta+ evaluates FALSE");
}

TEST_CASE("syntax subcommands") {
  CHECK(run({"parse", "forall x.K(x=x)"}).out == "forall x. K (x=x)\n");
  CHECK(run({"onset", "(K^{w+1} (0=0) -> K^{2} (0=0))"}).out == "{2, w+1}\n");
  CHECK(run({"destratify", "K^{3} K^{w} (0=0)"}).out == "K K (0=0)\n");
  CHECK(run({"destratify", "K (0=0)"}).code == cli::kUsage);
  CHECK(run({"destratify", "--lenient", "K (0=0)"}).out == "K (0=0)\n");
  CHECK(run({"maph", "--h", "1:w,2:w+1", "(K^{1} (0=0) -> K^{2} (0=0))"}).out ==
        "(K^{w} (0=0) -> K^{w+1} (0=0))\n");
  auto r = run({"collapse", "--n", "1", "--supers", "3,w,w*2+1"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("w*2+1") != std::string::npos);

  r = run({"recognize", "(K^{w} (1=0) -> K^{w*2} K^{w} (1=0))"});
  CHECK(r.code == cli::kOk);
  r = run({"recognize", "K^{1} K^{2} (0=0)"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out == "not stratified\n");

  const std::string file = temp_file("formula.txt", "K K (1=0)\n");
  CHECK(run({"depth", "@" + file}).out == "2\n");
  CHECK(run({"depth", "@/nonexistent/file"}).code == cli::kUsage);
}

TEST_CASE("schema subcommand") {
  auto r = run({"schema", "--id", "E3", "--phi", "(0=0)"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "(K (0=0) -> (0=0))\n");
  r = run({"schema", "--id", "E2prime", "--phi", "K (1=0)", "--psi", "(1=0)"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("side condition") == 0);
  CHECK(run({"schema", "--id", "Bogus"}).code == cli::kUsage);
}

TEST_CASE("fragment subcommands") {
  const std::string frag = temp_file("frag.txt", "# members\nK^{1} (0=0)\nK^{w} (0=0)\n\n");
  auto r = run({"restrict", "--alpha", "2", frag});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "K^{1} (0=0)\n");
  r = run({"uniform", "--pool", "1,w", frag});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "uniform\n");
  r = run({"uniform", "--pool", "1,2,w", frag});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("missing K^{2} (0=0)") != std::string::npos);
}

TEST_CASE("proof subcommands") {
  auto r = run({"abstract", "(K (x=y) -> K (x=y))"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("propositional tautology: yes") != std::string::npos);

  CHECK(run({"prove", "(K (0=0) -> K (0=0))"}).code == cli::kOk);
  r = run({"prove", "K (0=0)"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("countermodel:") != std::string::npos);
  CHECK(run({"prove", "--budget", "0", "(0=0)"}).code == cli::kUnknown);
  CHECK(run({"prove", "(x=x)"}).code == cli::kUsage);

  const std::string theory = temp_file("theory.txt", "sentence: K (1=0)\nsentence: (K (1=0) -> (1=0))\n");
  r = run({"entails", "--theory", theory, "(1=0)"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("used premises: 2") != std::string::npos);
  const std::string weak = temp_file("weak.txt", "sentence: K (1=0)\n");
  CHECK(run({"entails", "--theory", weak, "(1=0)"}).code == cli::kViolation);

  const std::string valid = temp_file("valid.txt", "schema: E1; phi = (x=x)\n");
  r = run({"entails", "--theory", valid, "forall x. K (x=x)"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("used premises: 1") != std::string::npos);

  r = run({"upward", "--x", "tail:all-from(0)", "--theory", theory, "(1=0)"});
  CHECK(r.code == cli::kOk);
  CHECK(last_line(r.out) == "consistent");
}

TEST_CASE("semantic subcommands") {
  const std::string model = temp_file("model.txt", "universe: 2\nfamily: cyclic\ndefault: false\noracle: K (x=x); 1; true\n");
  CHECK(run({"eval", "--model", model, "S(S(0))=0"}).code == cli::kOk);
  CHECK(run({"eval", "--model", model, "--assign", "u:1", "K (u=u)"}).code == cli::kOk);
  CHECK(run({"eval", "--model", model, "--assign", "u:0", "K (u=u)"}).code == cli::kViolation);
  CHECK(run({"eval", "--model", model, "--assign", "u:7", "K (u=u)"}).code == cli::kUsage);

  auto r = run({"countermodel", "--max-universe", "2", "(K (0=0) -> (0=1))"});
  CHECK(r.code == cli::kViolation);
  CHECK(r.out.find("universe:") != std::string::npos);
  CHECK(run({"countermodel", "(0=0)"}).code == cli::kUnknown);
}

TEST_CASE("induction walk") {
  auto r = run({"induction-walk", "--alpha-max", "w*3"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("violations 0\n") != std::string::npos);
  const std::string bad = temp_file("bad.txt", "sentence: 1=0\nschema: E3\nk-closure: 1\n");
  CHECK(run({"induction-walk", "--alpha-max", "2", "--theory", bad}).code == cli::kViolation);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"depth", "--bogus", "0=0"}).code == cli::kUsage);
  CHECK(run({"depth", "((0=0)"}).code == cli::kUsage);
  CHECK(run({"stratify", "(0=0)"}).code == cli::kUsage);
  CHECK(run({"stratify", "--x", "tail:nowhere", "(0=0)"}).code == cli::kUsage);
  CHECK(run({"collapse", "--n", "0", "--supers", "1"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("structured output round-trips") {
  testing::FormulaGen gen(17);
  const auto x = parse_spec("seed:[1,w] tail:all-from(w*2)");
  for (int k = 0; k < 200; ++k) {
    const Formula f = gen.formula();
    const auto r = run({"--structured", "stratify", "--x", to_string(x), render(f)});
    REQUIRE(r.code == cli::kOk);
    const json j = json::parse(r.out);
    CHECK(parse_formula(j["formula"].get<std::string>()) == stratify(f, x));
    const auto on = json::parse(run({"onset", "--structured", j["formula"].get<std::string>()}).out);
    for (const auto& a : on["onset"]) CHECK(to_string(parse_ordinal(a.get<std::string>())) == a.get<std::string>());
  }
  const auto r = run({"--structured", "e2-demo"});
  const json j = json::parse(r.out);
  CHECK(j["conclusive"] == true);
  CHECK(j["value"] == "fails");
  CHECK(r.out.find('\n') == r.out.size() - 1);
}

TEST_CASE("exit codes are deterministic") {
  for (const char* f : {"K (0=0)", "(K (0=0) -> K (0=0))", "forall x. K (x=x)"}) {
    const auto a = run({"prove", "--budget", "200", f});
    const auto b = run({"prove", "--budget", "200", f});
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
