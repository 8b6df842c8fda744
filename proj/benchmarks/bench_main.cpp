#include <benchmark/benchmark.h>

#include "cartangeo/cs_metric.hpp"
#include "cartangeo/fisher.hpp"
#include "cartangeo/mean.hpp"
#include "cartangeo/rng.hpp"

using namespace cartangeo;

namespace {

LieAlgebraSpec bench_algebra(int n, int m) {
  Rng rng(42);
  return make_htype(rng.htype(n, m));
}

void BM_bracket(benchmark::State& state) {
  LieAlgebraSpec alg = bench_algebra(8, 4);
  Rng rng(1);
  Vec x = rng.vector(12), y = rng.vector(12);
  for (auto _ : state) benchmark::DoNotOptimize(alg.bracket(x, y));
}
BENCHMARK(BM_bracket);

void BM_solve_cs_space(benchmark::State& state) {
  LieAlgebraSpec alg = bench_algebra(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_cs_space(alg).dimension);
}
BENCHMARK(BM_solve_cs_space)->Arg(4)->Arg(8);

void BM_metric_field_matrix(benchmark::State& state) {
  LieAlgebraSpec alg = bench_algebra(8, 4);
  Rng rng(2);
  Mat g = rng.symmetric_nondegenerate(12);
  GroupPoint sigma{Chart::Exponential, rng.vector(12)};
  for (auto _ : state) benchmark::DoNotOptimize(metric_field_matrix(alg, g, sigma));
}
BENCHMARK(BM_metric_field_matrix);

void BM_barycenter_fixed_point(benchmark::State& state) {
  LieAlgebraSpec alg = bench_algebra(6, 3);
  Rng rng(3);
  Dataset data{rng.matrix(static_cast<int>(state.range(0)), 9), Chart::Exponential, 9, 0};
  for (auto _ : state) benchmark::DoNotOptimize(barycenter_fixed_point(alg, data).iterations);
}
BENCHMARK(BM_barycenter_fixed_point)->Arg(50)->Arg(200);

void BM_fisher_bernoulli(benchmark::State& state) {
  ParametricFamily fam = bernoulli_family();
  Vec theta = Vec::Constant(1, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(fisher_matrix(fam, theta).matrix(0, 0));
}
BENCHMARK(BM_fisher_bernoulli);

}  // namespace

BENCHMARK_MAIN();
