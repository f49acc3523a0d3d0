#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stratum/error.hpp"
#include "stratum/parse.hpp"
#include "stratum/stratify.hpp"
#include "support/enumerate.hpp"
#include "support/gen.hpp"

using namespace stratum;

namespace {

Formula P(std::string_view s) { return parse_formula(s); }

std::vector<StratifierSpec> specs() {
  return {StratifierSpec::veristratifier(), StratifierSpec::all_from({0, 0}), StratifierSpec::all_from({2, 3}),
          StratifierSpec::limits_from(3, {{0, 4}, {1, 1}}), StratifierSpec::all_from({1, 0}, {{0, 1}, {0, 7}})};
}

const std::vector<Ordinal> kPool{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}};

// Brute-force recognizer: some X drawn from the pool, followed by every
// ordinal above it, stratifies sigma- to sigma.
bool brute_recognize(const Formula& sigma) {
  const Formula plain = destratify(sigma);
  const Ordinal above = kPool.back().successor();
  for (unsigned mask = 0; mask < (1u << kPool.size()); ++mask) {
    std::vector<Ordinal> seed;
    for (std::size_t k = 0; k < kPool.size(); ++k)
      if (mask & (1u << k)) seed.push_back(kPool[k]);
    if (stratify(plain, StratifierSpec::all_from(above, seed)) == sigma) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("least_excluding") {
  CHECK(least_excluding(StratifierSpec::veristratifier(), {}) == Ordinal{1, 0});
  CHECK(least_excluding(StratifierSpec::veristratifier(), {{1, 0}}) == Ordinal{2, 0});
  CHECK(least_excluding(StratifierSpec::all_from({}), {{0, 0}, {0, 1}, {0, 3}}) == Ordinal{0, 2});
  CHECK(least_excluding(StratifierSpec::limits_from(2, {{0, 5}}), {{0, 5}, {2, 0}}) == Ordinal{3, 0});
}

TEST_CASE("spec parse/render") {
  const auto a = parse_spec("seed:[w,w*2] tail:all-from(w*3)");
  CHECK(a.seed() == std::vector<Ordinal>{{1, 0}, {2, 0}});
  CHECK(a.tail() == StratifierSpec::Tail::kAllFrom);
  CHECK(a.tail_start() == Ordinal{3, 0});
  CHECK(to_string(a) == "seed:[w,w*2] tail:all-from(w*3)");
  CHECK(parse_spec("tail:limits-from(1)") == StratifierSpec::veristratifier());
  CHECK(parse_spec("all-from(0)") == StratifierSpec::all_from({}));
  CHECK(to_string(StratifierSpec::veristratifier()) == "tail:limits-from(1)");
  for (const auto& x : specs()) CHECK(parse_spec(to_string(x)) == x);
  CHECK_THROWS_AS(parse_spec("seed:[w*3] tail:all-from(w)"), ParseError);
  CHECK_THROWS_AS(parse_spec("seed:[2,1] tail:all-from(w)"), ParseError);
  CHECK_THROWS_AS(parse_spec("tail:limits-from(w)"), ParseError);
  CHECK_THROWS_AS(parse_spec("tail:sometimes(1)"), ParseError);
  CHECK(StratifierSpec::limits_from(1).contains({3, 0}));
  CHECK_FALSE(StratifierSpec::limits_from(1).contains({3, 1}));
  CHECK_FALSE(StratifierSpec::limits_from(1).contains({0, 0}));
}

TEST_CASE("stratify examples") {
  const auto veri = StratifierSpec::veristratifier();
  CHECK(stratify(P("(K(1=0) -> K K(1=0))"), veri) == P("(K^{w}(1=0) -> K^{w*2}K^{w}(1=0))"));
  CHECK(stratify(P("1=0"), veri) == P("1=0"));
  const Formula theta = P("(K(K(1=0)->(1=0)) -> (K K(1=0) -> K(1=0)))");
  const Formula expected = P("(K^{1}(K^{0}(1=0)->(1=0)) -> (K^{1}K^{0}(1=0) -> K^{0}(1=0)))");
  CHECK(stratify(theta, StratifierSpec::all_from({})) == expected);
  CHECK(reference::stratify(theta, StratifierSpec::all_from({})) == expected);
  CHECK_THROWS_AS(stratify(P("K^{0}(0=0)"), veri), PreconditionError);
}

TEST_CASE("destratify examples") {
  CHECK(destratify(P("K^{w*8+3} forall x. K^{17}(x=y)")) == P("K forall x. K(x=y)"));
  CHECK(destratify(P("0=0")) == P("0=0"));
  CHECK_THROWS_AS(destratify(P("K (0=0)")), PreconditionError);
  CHECK(destratify(P("K K^{2} (0=0)"), false) == P("K K (0=0)"));
}

TEST_CASE("apply_ordinal_map examples") {
  const Ordinal a1{0, 1}, a2{0, 5}, a3{1, 0}, a4{2, 1};
  const OrdinalMap h({{a2, a3}, {a3, a4}});
  const auto K = [](Ordinal a, const Formula& f) { return Formula::op(OperatorTag::at(a), f); };
  const Formula one = P("1=1");
  CHECK(apply_ordinal_map(K(a3, K(a2, K(a1, one))), h) == K(a4, K(a3, K(a1, one))));
  const Formula f = P("K^{3} K^{w} (0=0)");
  CHECK(apply_ordinal_map(f, OrdinalMap::identity(on_set(f))) == f);
  CHECK(apply_ordinal_map(P("K^{3}(0=0)"), parse_ordinal_map("5:w")) == P("K^{3}(0=0)"));
}

TEST_CASE("ordinal map parsing and flags") {
  const auto h = parse_ordinal_map("w:5, 3:4");
  CHECK(h(Ordinal{1, 0}) == Ordinal{0, 5});
  CHECK(h(Ordinal{0, 3}) == Ordinal{0, 4});
  CHECK(h.order_preserving());
  CHECK(parse_ordinal_map(to_string(h)) == h);
  CHECK_FALSE(parse_ordinal_map("1:5,2:3").order_preserving());
  CHECK_FALSE(parse_ordinal_map("1:5,2:5").injective());
  CHECK_THROWS_AS(parse_ordinal_map("1:5,1:6"), ParseError);
  CHECK_THROWS_AS(parse_ordinal_map("1-5"), ParseError);
  CHECK(parse_ordinal_map("").pairs().empty());
}

TEST_CASE("compose_stratifier examples") {
  const auto y = compose_stratifier(StratifierSpec::veristratifier(), parse_ordinal_map("w:5"), P("K(1=0)"));
  CHECK(y.seed() == std::vector<Ordinal>{{0, 5}});
  CHECK(stratify(P("K(1=0)"), y) == P("K^{5}(1=0)"));

  const Formula kk = P("K K (1=0)");
  const auto y2 = compose_stratifier(StratifierSpec::all_from({}), parse_ordinal_map("0:w,1:w*2"), kk);
  CHECK(y2.seed() == std::vector<Ordinal>{{1, 0}, {2, 0}});
  CHECK(stratify(kk, y2) == P("K^{w*2} K^{w} (1=0)"));

  const auto x = StratifierSpec::veristratifier();
  const auto id = OrdinalMap::identity(on_set(stratify(kk, x)));
  CHECK(stratify(kk, compose_stratifier(x, id, kk)) == stratify(kk, x));

  CHECK_THROWS_AS(compose_stratifier(x, parse_ordinal_map("w:5"), kk), PreconditionError);
  CHECK_THROWS_AS(compose_stratifier(x, parse_ordinal_map("w:5,w*2:1"), kk), PreconditionError);
}

TEST_CASE("collapse_map examples") {
  CHECK(collapse_map({{0, 3}, {1, 1}, {2, 5}}, 1) == parse_ordinal_map("3:3,w+1:4,w*2+5:5"));
  const std::set<Ordinal> low{{0, 2}, {1, 4}};
  CHECK(collapse_map(low, 2) == OrdinalMap::identity(low));
  CHECK(collapse_map({{1, 0}}, 1) == parse_ordinal_map("w:0"));
  CHECK_THROWS_AS(collapse_map({}, 0), PreconditionError);
}

TEST_CASE("recognize examples") {
  CHECK(recognize_stratified(P("K^{1}K^{0}(1=0)")).has_value());
  CHECK_FALSE(recognize_stratified(P("K^{0}K^{0}(1=0)")).has_value());
  const auto any = recognize_stratified(P("forall x. (x=x)"));
  REQUIRE(any.has_value());
  CHECK(stratify(P("forall x. (x=x)"), *any) == P("forall x. (x=x)"));
  CHECK(brute_recognize(P("K^{1}K^{0}(1=0)")));
  CHECK_FALSE(brute_recognize(P("K^{0}K^{0}(1=0)")));
}

TEST_CASE("fast stratify agrees with the reference") {
  testing::FormulaGen gen(21);
  for (int k = 0; k < 3000; ++k) {
    const Formula f = gen.formula();
    for (const auto& x : specs()) CHECK(stratify(f, x) == reference::stratify(f, x));
  }
}

TEST_CASE("round-trip and commutation") {
  testing::FormulaGen gen(22);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 3000; ++k) {
    const Formula f = gen.formula();
    Assignment s;
    for (Symbol v : free_vars(f)) s[v] = rng() % 5;
    for (const auto& x : specs()) {
      const Formula plus = stratify(f, x);
      CHECK(destratify(plus) == f);
      CHECK(stratify(assign_substitute(f, s), x) == assign_substitute(plus, s));
    }
  }
}

TEST_CASE("depth order of top superscripts") {
  testing::FormulaGen gen(23);
  std::vector<Formula> pool;
  for (int k = 0; k < 40; ++k) pool.push_back(gen.formula());
  for (const auto& x : specs())
    for (const Formula& f : pool)
      for (const Formula& g : pool) {
        const Ordinal a = stratify(Formula::know(f), x)[static_cast<NodeId>(f.size())].tag.level;
        const Ordinal b = stratify(Formula::know(g), x)[static_cast<NodeId>(g.size())].tag.level;
        CHECK((depth(f) < depth(g)) == (a < b));
        CHECK((depth(f) == depth(g)) == (a == b));
      }
}

TEST_CASE("injective maps are inverted by their inverse") {
  testing::GenOptions opts;
  opts.ops = testing::Operators::kIndexed;
  testing::FormulaGen gen(24, opts);
  for (int k = 0; k < 500; ++k) {
    const Formula f = gen.formula();
    std::map<Ordinal, Ordinal> m;
    std::vector<Ordinal> targets;
    for (Natural t = 0; t < 20; ++t) targets.push_back({t % 4, t});
    std::shuffle(targets.begin(), targets.end(), gen.rng());
    std::size_t next = 0;
    for (Ordinal a : on_set(f)) m.emplace(a, targets[next++]);
    const OrdinalMap h(m);
    REQUIRE(h.injective());
    CHECK(apply_ordinal_map(apply_ordinal_map(f, h), h.inverse()) == f);
  }
}

TEST_CASE("collapse_map structure") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 2000; ++k) {
    std::set<Ordinal> s;
    const std::size_t count = rng() % 6;
    for (std::size_t j = 0; j < count; ++j) s.insert({rng() % 4, rng() % 5});
    const Natural n = 1 + rng() % 3;
    const OrdinalMap h = collapse_map(s, n);
    CHECK(h.domain() == s);
    CHECK(h.order_preserving());
    for (Ordinal a : s) {
      CHECK(h(a) < omega_times(n));
      if (a < omega_times(n)) CHECK(h(a) == a);
    }
  }
}

TEST_CASE("compose_stratifier on random inputs") {
  testing::FormulaGen gen(25);
  for (int k = 0; k < 500; ++k) {
    const Formula f = gen.formula();
    for (const auto& x : specs()) {
      const std::set<Ordinal> on = on_set(stratify(f, x));
      std::map<Ordinal, Ordinal> m;
      Ordinal next{gen.below(2), gen.below(3)};
      for (Ordinal a : on) {
        m.emplace(a, next);
        next = gen.below(2) ? next.successor() : Ordinal{next.limit + 1, gen.below(3)};
      }
      const OrdinalMap h(m);
      const auto y = compose_stratifier(x, h, f);
      CHECK(stratify(f, y) == apply_ordinal_map(stratify(f, x), h));
    }
  }
}

TEST_CASE("recognizer agrees with brute force") {
  std::size_t accepted = 0, total = 0;
  for (const Formula& skeleton : testing::skeletons(3, 1)) {
    for (const Formula& sigma : testing::indexings(skeleton, kPool)) {
      const bool fast = recognize_stratified(sigma).has_value();
      CHECK(fast == brute_recognize(sigma));
      accepted += fast;
      ++total;
    }
  }
  CHECK(accepted > 0);
  CHECK(accepted < total);
}
