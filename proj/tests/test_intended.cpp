#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "stratum/error.hpp"
#include "stratum/intended.hpp"
#include "stratum/parse.hpp"

using namespace stratum;

namespace {

Formula P(std::string_view s) { return parse_formula(s); }

OperatorTag at(Natural limit, Natural offset) { return OperatorTag::at({limit, offset}); }

}  // namespace

TEST_CASE("knows examples") {
  const BoundedIntendedStructure empty({}, Budget{});
  const auto k = empty.knows(at(0, 0), P("1=0"));
  CHECK(k.verdict == Verdict::kFails);
  REQUIRE(k.report.countermodel);
  CHECK(k.report.countermodel->structure.succ(0) == 1);

  const BoundedIntendedStructure one({P("K^{0}(1=0)")}, Budget{});
  CHECK(one.knows(at(0, 1), P("K^{0}(1=0)")).verdict == Verdict::kHolds);
  CHECK(one.knows(at(0, 0), P("K^{0}(1=0)")).verdict == Verdict::kFails);
  CHECK(one.knows(OperatorTag::plain(), P("K^{0}(1=0)")).verdict == Verdict::kHolds);

  // phi^s is what gets proved.
  const BoundedIntendedStructure arith({P("forall x. ((x+0)=x)")}, Budget{});
  CHECK(arith.knows(at(0, 0), P("((y+0)=y)"), {{Symbol("y"), 2}}).verdict == Verdict::kHolds);
  CHECK_THROWS_AS(arith.knows(at(0, 0), P("((y+0)=y)")), PreconditionError);

  const BoundedIntendedStructure tiny({P("forall x. forall y. In(x, (y+y))")}, Budget(2));
  CHECK(tiny.knows(at(0, 0), P("forall u. forall v. In(S(u), (S(v)+S(v)))")).verdict == Verdict::kUnknown);
}

TEST_CASE("eval3") {
  const BoundedIntendedStructure m({P("K^{0}(0=0)")}, Budget{});
  CHECK(m.eval3(P("(S(0)+S(0)) = 2")) == Verdict::kHolds);
  CHECK(m.eval3(P("1=0")) == Verdict::kFails);
  CHECK(m.eval3(P("In(0,0)")) == Verdict::kUnknown);
  CHECK(m.eval3(P("(In(0,0) -> (0=0))")) == Verdict::kHolds);
  CHECK(m.eval3(P("forall x. (x = 0)")) == Verdict::kFails);
  CHECK(m.eval3(P("forall x. (x = x)")) == Verdict::kHolds);
  CHECK(m.eval3(P("forall x. ((x+0) = x)")) == Verdict::kUnknown);
  CHECK(m.eval3(P("K^{1}K^{0}(0=0)")) == Verdict::kHolds);
  CHECK(m.eval3(P("K^{0}K^{0}(0=0)")) == Verdict::kFails);
  CHECK_THROWS_AS(m.eval3(P("x=0")), PreconditionError);
}

TEST_CASE("e2 counterexample") {
  const auto r = check_e2_counterexample();
  CHECK(r.theta_plus == P("(K^{1}(K^{0}(1=0) -> (1=0)) -> (K^{1}K^{0}(1=0) -> K^{0}(1=0)))"));
  REQUIRE(r.queries.size() == 3);
  CHECK(r.queries[0].answer.verdict == Verdict::kHolds);
  CHECK(r.queries[1].answer.verdict == Verdict::kHolds);
  CHECK(r.queries[2].answer.verdict == Verdict::kFails);
  CHECK(r.theta_plus_value == Verdict::kFails);
  CHECK(r.conclusive());
  CHECK(r.e2prime_rejection.find("1 > 0") != std::string::npos);
  CHECK(r.admissible_value != Verdict::kFails);
  CHECK(r.trace.back() == "theta+ evaluates FALSE");

  const auto zero = check_e2_counterexample(Budget(0));
  CHECK_FALSE(zero.conclusive());
  CHECK(zero.trace.back() != "theta+ evaluates FALSE");
}

TEST_CASE("truth-induction walk") {
  const auto t0 = parse_theory("sentence: 0=0\nschema: E3\nk-closure: 2\n");
  const auto r = truth_induction_walk(t0, {3, 0});
  CHECK(r.ok());
  CHECK(r.members.size() == r.cases[0] + r.cases[1] + r.cases[2]);
  CHECK(r.cases[0] > 0);
  CHECK(r.cases[1] > 0);
  CHECK(r.cases[2] > 0);
  CHECK(r.unknown == 0);
  for (const auto& w : r.members)
    if (w.which == WalkCase::kClosure && w.sigma.size() == 4) CHECK(w.outcome == Verdict::kHolds);
  CHECK(render_walk_report(r).find("violations 0\n") != std::string::npos);

  const auto vacuous = truth_induction_walk({}, {3, 0});
  CHECK(vacuous.ok());
  CHECK(vacuous.members.empty());

  const auto bad = truth_induction_walk(parse_theory("sentence: 1=0\nk-closure: 1\n"), {2, 0});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations.front().which == WalkCase::kBase);
  CHECK(bad.violations.front().level == Ordinal{0, 0});

  CHECK(walk_grid({1, 1}) == std::vector<Ordinal>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}, {1, 1}});
}

TEST_CASE("level monotonicity") {
  StratifiedFragment pool;
  for (const char* s : {"K^{0}(0=0)", "(K^{0}(0=0) -> K^{1}(1=0))", "K^{w}(1=0)", "(K^{w}(1=0) -> (0=1))",
                        "K^{2}K^{1}(0=0)"})
    pool.insert(P(s));
  const BoundedIntendedStructure m(pool, Budget{});
  const std::vector<Ordinal> levels{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}, {1, 1}, {2, 0}};
  for (const char* q : {"K^{1}(1=0)", "K^{0}(0=0)", "(0=1)", "K^{w}(1=0)", "K^{2}K^{1}(0=0)"}) {
    bool held = false;
    for (Ordinal a : levels) {
      const Verdict v = m.knows(OperatorTag::at(a), P(q)).verdict;
      if (held) CHECK(v == Verdict::kHolds);
      held = held || v == Verdict::kHolds;
    }
    CHECK(held);
  }
}

TEST_CASE("cache coherence under concurrent queries") {
  StratifiedFragment pool{P("K^{0}(0=0)"), P("(K^{0}(0=0) -> (1=0))")};
  const BoundedIntendedStructure m(pool, Budget{});
  std::vector<std::vector<Verdict>> seen(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < seen.size(); ++t)
    threads.emplace_back([&, t] {
      for (Natural k = 0; k < 4; ++k)
        for (const char* q : {"1=0", "K^{0}(0=0)", "0=1"}) seen[t].push_back(m.knows(at(0, k), P(q)).verdict);
    });
  for (auto& th : threads) th.join();
  for (std::size_t t = 1; t < seen.size(); ++t) CHECK(seen[t] == seen[0]);
  CHECK(m.cache_size() == 12);
}
