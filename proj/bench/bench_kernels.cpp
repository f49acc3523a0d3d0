#include <benchmark/benchmark.h>

#include "stratum/batch.hpp"
#include "stratum/parse.hpp"
#include "stratum/semantics.hpp"
#include "support/gen.hpp"

using namespace stratum;

namespace {

const std::vector<Formula>& corpus(std::size_t n) {
  static std::map<std::size_t, std::vector<Formula>> cache;
  auto& out = cache[n];
  if (out.empty()) {
    testing::FormulaGen gen(99);
    for (std::size_t k = 0; k < n; ++k) out.push_back(gen.formula());
  }
  return out;
}

const StratifierSpec& spec() {
  static const StratifierSpec x = parse_spec("seed:[1,3,w] tail:all-from(w*2+1)");
  return x;
}

void BM_StratifyReference(benchmark::State& state) {
  const auto& fs = corpus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::stratify_batch(fs, spec()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StratifySerial(benchmark::State& state) {
  const auto& fs = corpus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stratify_batch(fs, spec(), false));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_StratifyParallel(benchmark::State& state) {
  const auto& fs = corpus(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stratify_batch(fs, spec(), true));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DestratifySerial(benchmark::State& state) {
  const auto strat = stratify_batch(corpus(state.range(0)), spec());
  for (auto _ : state) benchmark::DoNotOptimize(destratify_batch(strat, false));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DestratifyParallel(benchmark::State& state) {
  const auto strat = stratify_batch(corpus(state.range(0)), spec());
  for (auto _ : state) benchmark::DoNotOptimize(destratify_batch(strat, true));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Valid, so every candidate structure is exhausted.
const Formula& search_target() {
  static const Formula f = parse_formula("(K (x=y) -> (K (y=x) -> (K (x=y) & K (y=x))))");
  return f;
}

void BM_CountermodelSerial(benchmark::State& state) {
  SearchOptions o;
  o.parallel = false;
  for (auto _ : state) benchmark::DoNotOptimize(countermodel_search(search_target(), o));
}

void BM_CountermodelParallel(benchmark::State& state) {
  SearchOptions o;
  o.parallel = true;
  for (auto _ : state) benchmark::DoNotOptimize(countermodel_search(search_target(), o));
}

std::vector<Formula> sentences(std::size_t n) {
  testing::GenOptions opts;
  opts.max_nodes = 20;
  testing::FormulaGen gen(7, opts);
  std::vector<Formula> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(gen.sentence());
  return out;
}

void BM_ProveSerial(benchmark::State& state) {
  const auto fs = sentences(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prove_batch(fs, Budget(300), false));
}

void BM_ProveParallel(benchmark::State& state) {
  const auto fs = sentences(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(prove_batch(fs, Budget(300), true));
}

}  // namespace

BENCHMARK(BM_StratifyReference)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StratifySerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StratifyParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DestratifySerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DestratifyParallel)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CountermodelSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountermodelParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ProveSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProveParallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
