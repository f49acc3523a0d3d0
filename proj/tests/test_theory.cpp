#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stratum/error.hpp"
#include "stratum/parse.hpp"
#include "stratum/theory.hpp"
#include "support/gen.hpp"

using namespace stratum;

namespace {

Formula P(std::string_view s) { return parse_formula(s); }

SchemaArgs with(const Formula& phi) {
  SchemaArgs a;
  a.phi = phi;
  return a;
}

}  // namespace

TEST_CASE("schema templates") {
  CHECK(instantiate_schema(SchemaId::kE3, with(P("1=0"))) == P("(K(1=0) -> (1=0))"));
  CHECK(instantiate_schema(SchemaId::kE4, with(P("x=0"))) == P("forall x. (K(x=0) -> K K (x=0))"));
  CHECK(instantiate_schema(SchemaId::kE1, with(P("x=x"))) == P("forall x. K (x=x)"));

  SchemaArgs e2 = with(P("K(1=0)"));
  e2.psi = P("1=0");
  CHECK(instantiate_schema(SchemaId::kE2, e2) == P("K(K(1=0) -> 1=0) -> K K(1=0) -> K(1=0)"));
  try {
    instantiate_schema(SchemaId::kE2prime, e2);
    FAIL("E2prime accepted a deeper phi");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("1 > 0") != std::string::npos);
  }
  std::swap(*e2.psi, e2.phi);
  CHECK(instantiate_schema(SchemaId::kE2prime, e2) == P("K(1=0 -> K(1=0)) -> K(1=0) -> K K(1=0)"));
  CHECK_THROWS_AS(instantiate_schema(SchemaId::kE2, with(P("0=0"))), PreconditionError);
}

TEST_CASE("induction template") {
  CHECK(instantiate_schema(SchemaId::kEAInduction, with(P("x=x"))) ==
        P("(0=0) -> forall x. ((x=x) -> (S(x)=S(x))) -> forall x. (x=x)"));
  SchemaArgs a = with(P("K((x+y)=y)"));
  CHECK(instantiate_schema(SchemaId::kEAInduction, a) ==
        P("forall y. (K((0+y)=y) -> forall x. (K((x+y)=y) -> K((S(x)+y)=y)) -> forall x. K((x+y)=y))"));
}

TEST_CASE("assigned validity and mechanicalness") {
  SchemaArgs a = with(P("(x=y) -> (x=y)"));
  a.s = Assignment{{Symbol("x"), 2}, {Symbol("y"), 0}};
  CHECK(instantiate_schema(SchemaId::kAssignedValidity, a) == P("(2=0) -> (2=0)"));
  a.validity = [](const Formula&) { return false; };
  CHECK_THROWS_AS(instantiate_schema(SchemaId::kAssignedValidity, a), PreconditionError);
  CHECK_THROWS_AS(instantiate_schema(SchemaId::kAssignedValidity, with(P("x=x"))), PreconditionError);

  CHECK(instantiate_schema(SchemaId::kMechanicalness, with(P("x=y"))) ==
        P("forall y. exists e. forall x. (K(x=y) <-> In(x,e))"));
  CHECK_THROWS_AS(instantiate_schema(SchemaId::kMechanicalness, with(P("x=e"))), PreconditionError);
}

TEST_CASE("PA axioms") {
  REQUIRE(pa_axioms().size() == 6);
  for (const Formula& f : pa_axioms()) {
    CHECK(is_sentence(f));
    CHECK(is_arithmetic(f));
  }
  SchemaArgs a;
  a.pa_index = 1;
  CHECK(instantiate_schema(SchemaId::kPAAxiom, a) == P("forall x. forall y. (S(x)=S(y) -> x=y)"));
}

TEST_CASE("schema ids") {
  for (SchemaId id : {SchemaId::kE1, SchemaId::kE2, SchemaId::kE2prime, SchemaId::kE3, SchemaId::kE4,
                      SchemaId::kAssignedValidity, SchemaId::kMechanicalness, SchemaId::kEAInduction,
                      SchemaId::kPAAxiom})
    CHECK(parse_schema_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_schema_id("E5"), ParseError);
}

TEST_CASE("k_close") {
  const std::set<Formula> base{P("0=0")};
  CHECK(k_close(base, 1) == std::set<Formula>{P("0=0"), P("K(0=0)")});
  CHECK(k_close(base, 0) == base);
  CHECK(k_close(base, 2) == std::set<Formula>{P("0=0"), P("K(0=0)"), P("K K(0=0)")});
}

TEST_CASE("k_close size and depth bounds") {
  testing::FormulaGen gen(31);
  for (int k = 0; k < 200; ++k) {
    std::set<Formula> f;
    for (int j = 0; j < 5; ++j) f.insert(gen.sentence());
    const std::size_t steps = k % 4;
    const auto closed = k_close(f, steps);
    std::size_t max_depth = 0;
    for (const Formula& g : f) max_depth = std::max(max_depth, depth(g));
    CHECK(closed.size() <= (steps + 1) * f.size());
    for (const Formula& g : closed) CHECK(depth(g) <= max_depth + steps);
  }
}

TEST_CASE("oplus_sample") {
  const auto veri = StratifierSpec::veristratifier();
  const auto naturals = StratifierSpec::all_from({});
  const auto got = oplus_sample(P("K(1=0) -> K K(1=0)"), {veri, naturals, StratifierSpec::all_from({0, 2})});
  CHECK(got == StratifiedFragment{P("K^{w}(1=0) -> K^{w*2} K^{w}(1=0)"), P("K^{0}(1=0) -> K^{1} K^{0}(1=0)"),
                                  P("K^{2}(1=0) -> K^{3} K^{2}(1=0)")});
  CHECK(oplus_sample(P("0=0 -> 1=0"), {veri, naturals}) == StratifiedFragment{P("0=0 -> 1=0")});
  CHECK(oplus_sample(P("K(1=0)"), {naturals, veri}) == StratifiedFragment{P("K^{0}(1=0)"), P("K^{w}(1=0)")});
  CHECK_THROWS_AS(oplus_sample(P("K(x=0)"), {veri}), PreconditionError);
}

TEST_CASE("restrict") {
  const StratifiedFragment f{P("0=0"), P("K^{0}(0=0)"), P("K^{1}K^{0}(0=0)"), P("K^{w}(1=0)")};
  CHECK(restrict(f, {}) == StratifiedFragment{P("0=0")});
  CHECK(restrict(f, {0, 1}) == StratifiedFragment{P("0=0"), P("K^{0}(0=0)")});
  CHECK(restrict({}, {3, 3}).empty());
  CHECK(restrict(f, {1, 1}) == f);
}

TEST_CASE("restrict is monotone") {
  testing::GenOptions opts;
  opts.ops = testing::Operators::kIndexed;
  testing::FormulaGen gen(32, opts);
  StratifiedFragment f;
  for (int j = 0; j < 200; ++j) f.insert(gen.sentence());
  const std::vector<Ordinal> grid{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}, {1, 2}, {1, 4}, {2, 0}, {2, 1}, {3, 0}};
  for (Ordinal a : grid)
    for (Ordinal b : grid)
      if (a <= b) {
        const auto ra = restrict(f, a), rb = restrict(f, b);
        CHECK(std::includes(rb.begin(), rb.end(), ra.begin(), ra.end()));
      }
}

TEST_CASE("check_uniform") {
  const StratifiedFragment seed{P("K^{1}K^{0}(1=0)")};
  const std::set<Ordinal> pool{{0, 0}, {0, 1}, {0, 2}};
  const auto v = check_uniform(seed, pool);
  std::set<Formula> missing;
  for (const auto& x : v) {
    CHECK(x.member == P("K^{1}K^{0}(1=0)"));
    CHECK(x.h.order_preserving());
    missing.insert(x.missing);
  }
  CHECK(missing == std::set<Formula>{P("K^{2}K^{0}(1=0)"), P("K^{2}K^{1}(1=0)")});
  const auto closed = uniform_closure(seed, pool);
  CHECK(closed.size() == 3);
  CHECK(check_uniform(closed, pool).empty());
  CHECK(check_uniform({}, pool).empty());
}

TEST_CASE("T(+) images under order-preserving maps are stratifier images") {
  testing::FormulaGen gen(33);
  const std::vector<StratifierSpec> specs{StratifierSpec::all_from({}), StratifierSpec::veristratifier(),
                                          StratifierSpec::all_from({0, 3})};
  const std::set<Ordinal> pool{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 0}, {2, 0}, {3, 0}};
  for (int k = 0; k < 100; ++k) {
    gen.options().max_nodes = 20;
    gen.options().max_op_depth = 3;
    const Formula phi = gen.sentence();
    const auto sample = oplus_sample(phi, specs);
    for (const Formula& s : sample) CHECK(recognize_stratified(s).has_value());
    for (const auto& v : check_uniform(sample, pool)) {
      const auto witness = recognize_stratified(v.missing);
      REQUIRE(witness.has_value());
      CHECK(destratify(v.missing) == phi);
      CHECK(stratify(phi, *witness) == v.missing);
    }
  }
}

TEST_CASE("theory files") {
  const auto t = parse_theory(R"(# the lemma's theory
sentence: K(1=0)
sentence: K(1=0) -> (1=0)
schema: E2            # over operands
operand: 1=0
operand: K(1=0)
schema: E2prime; phi = 1=0; psi = K(1=0)
schema: AssignedValidity; phi = (x=x); s = x:3
schema: EAInduction; phi = (x=y); var = x
schema: PAAxiom; index = 0
k-closure: 1
)");
  CHECK(t.sentences.size() == 2);
  CHECK(t.operands.size() == 2);
  CHECK(t.schemas.size() == 5);
  CHECK(t.k_closure_depth == 1);
  const auto all = expand(t);
  // 2 sentences + 4 pool E2 instances + 3 new explicit instances (the E2prime
  // one repeats a pool instance), then K of each
  CHECK(all.size() == 18);
  CHECK(all[0] == P("K(1=0)"));
  CHECK(all[9] == P("K K(1=0)"));
  CHECK(std::find(all.begin(), all.end(), P("3=3")) != all.end());

  CHECK_THROWS_AS(parse_theory("sentence: x=0"), ParseError);
  CHECK_THROWS_AS(parse_theory("schema: E9"), ParseError);
  CHECK_THROWS_AS(parse_theory("schema: E2prime; phi = K(1=0); psi = 1=0"), ParseError);
  CHECK_THROWS_AS(parse_theory("frobnicate: 3"), ParseError);
  try {
    parse_theory("sentence: 0=0\nsentence: 0=\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 26);
  }
}
