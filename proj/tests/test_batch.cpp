#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stratum/batch.hpp"
#include "stratum/error.hpp"
#include "stratum/parse.hpp"
#include "support/gen.hpp"

using namespace stratum;

TEST_CASE("parallel kernels match the serial paths and the reference") {
  testing::FormulaGen gen(51);
  std::vector<Formula> formulas;
  for (int k = 0; k < 2000; ++k) formulas.push_back(gen.formula());
  const std::vector<StratifierSpec> specs{StratifierSpec::veristratifier(), StratifierSpec::all_from({0, 3})};
  for (const auto& x : specs) {
    const auto par = stratify_batch(formulas, x, true);
    CHECK(par == stratify_batch(formulas, x, false));
    CHECK(par == reference::stratify_batch(formulas, x));
    CHECK(destratify_batch(par, true) == formulas);
  }
  CHECK(round_trip_failures(formulas, specs, true) == 0);
  CHECK(round_trip_failures(formulas, specs, false) == 0);
}

TEST_CASE("errors propagate from workers") {
  const std::vector<Formula> mixed{parse_formula("K(0=0)"), parse_formula("K^{1}(0=0)")};
  CHECK_THROWS_AS(stratify_batch(mixed, StratifierSpec::veristratifier()), PreconditionError);
  CHECK_THROWS_AS(destratify_batch(mixed), PreconditionError);
}

TEST_CASE("prove_batch is deterministic") {
  testing::GenOptions opts;
  opts.max_nodes = 20;
  testing::FormulaGen gen(52, opts);
  std::vector<Formula> formulas;
  for (int k = 0; k < 60; ++k) formulas.push_back(gen.sentence());
  const auto a = prove_batch(formulas, Budget(300), true);
  const auto b = prove_batch(formulas, Budget(300), false);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(render_report(a[i]) == render_report(b[i]));
}
