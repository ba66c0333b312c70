#include <benchmark/benchmark.h>

#include "dtinf/families.hpp"
#include "dtinf/measures.hpp"
#include "dtinf/optimal.hpp"
#include "dtinf/tree.hpp"

using namespace dtinf;

static void BM_OptimalCostFk2(benchmark::State& state) {
  const auto f = build("fk:2").function;
  for (auto _ : state) benchmark::DoNotOptimize(optimal_expected_cost<double>(f).cost);
}
BENCHMARK(BM_OptimalCostFk2)->Unit(benchmark::kMillisecond);

static void BM_OptimalCostMaj(benchmark::State& state) {
  const auto f = build("maj:" + std::to_string(state.range(0))).function;
  for (auto _ : state) benchmark::DoNotOptimize(optimal_expected_cost<Rational>(f).cost);
}
BENCHMARK(BM_OptimalCostMaj)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

static void BM_InfluencesExact(benchmark::State& state) {
  const auto f = graph_property(static_cast<std::size_t>(state.range(0)), "connectivity");
  for (auto _ : state) benchmark::DoNotOptimize(influences<Rational>(f).total);
}
BENCHMARK(BM_InfluencesExact)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_InfluencesFloat(benchmark::State& state) {
  const auto f = graph_property(6, "connectivity", Number(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(influences<double>(f).total);
}
BENCHMARK(BM_InfluencesFloat)->Unit(benchmark::kMillisecond);

static void BM_IsSeparatedTribes(benchmark::State& state) {
  const auto fam = build("tribes:" + std::to_string(state.range(0)) + ",3");
  for (auto _ : state) benchmark::DoNotOptimize(is_separated(*fam.tree, fam.function.space()));
}
BENCHMARK(BM_IsSeparatedTribes)->Arg(2)->Arg(3)->Arg(4);

static void BM_EnumerateDdtsN3(benchmark::State& state) {
  const auto f = build("maj:3").function;
  for (auto _ : state) benchmark::DoNotOptimize(count_ddts(f));
}
BENCHMARK(BM_EnumerateDdtsN3);
BENCHMARK_MAIN();
