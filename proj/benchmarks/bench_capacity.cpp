#include <benchmark/benchmark.h>

#include "treecap/blowups.hpp"
#include "treecap/disk_numerics.hpp"
#include "treecap/hankel.hpp"
#include "treecap/instances.hpp"
#include "treecap/symbol.hpp"
#include "treecap/tree_capacity.hpp"

using namespace treecap;

static void BM_CapRecursive(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  BergmanTree tree(level, 0.0);
  Rng rng(1);
  StoppingTime st = random_stopping_time(tree, rng, 200, 1, level);
  for (auto _ : state) benchmark::DoNotOptimize(cap_recursive(tree, st).cap);
}
BENCHMARK(BM_CapRecursive)->DenseRange(10, 18, 4)->Unit(benchmark::kMillisecond);

static void BM_CapCondenser(benchmark::State& state) {
  BergmanTree tree(static_cast<int>(state.range(0)), 0.0);
  Rng rng(2);
  auto [e, f] = random_condenser(tree, rng, 30);
  CondenserProblem problem(tree, e, f);
  for (auto _ : state) benchmark::DoNotOptimize(cap_condenser(tree, problem).cap);
}
BENCHMARK(BM_CapCondenser)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_QpOracle(benchmark::State& state) {
  BergmanTree tree(static_cast<int>(state.range(0)), 0.0);
  Rng rng(3);
  StoppingTime st = random_stopping_time(tree, rng, 20, 1, tree.max_level());
  for (auto _ : state) benchmark::DoNotOptimize(qp_oracle(tree, st));
}
BENCHMARK(BM_QpOracle)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_CapacitaryBlowup(benchmark::State& state) {
  BergmanTree tree(16, 0.0);
  Rng rng(4);
  StoppingTime w = random_stopping_time(tree, rng, 50, 4, 12);
  ExtremalSolution sol = cap_recursive(tree, w);
  for (auto _ : state) benchmark::DoNotOptimize(capacitary_blowup(sol, 0.4).size());
}
BENCHMARK(BM_CapacitaryBlowup)->Unit(benchmark::kMillisecond);

static void BM_FormNorm(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  Rng rng(5);
  FormMatrix m = tb_matrix(random_symbol(rng, degree), 4 * degree);
  for (auto _ : state) benchmark::DoNotOptimize(form_norm(m));
}
BENCHMARK(BM_FormNorm)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMicrosecond);

static void BM_MeasureFromSymbol(benchmark::State& state) {
  BergmanTree tree(static_cast<int>(state.range(0)), 0.0);
  Rng rng(6);
  Symbol b = random_symbol(rng, 8);
  for (auto _ : state) benchmark::DoNotOptimize(measure_from_symbol(b, tree).total());
}
BENCHMARK(BM_MeasureFromSymbol)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
