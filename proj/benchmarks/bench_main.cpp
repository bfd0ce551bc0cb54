#include <benchmark/benchmark.h>

#include "omplab/linalg.hpp"
#include "omplab/omp.hpp"
#include "omplab/ric.hpp"
#include "omplab/sensing.hpp"

using namespace omplab;

static void BM_ExactRic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const Matrix a = gaussian_sensing_matrix(16, n, 1, true);
  for (auto _ : state) benchmark::DoNotOptimize(exact_ric(a, k).delta);
  state.counters["subsets"] = static_cast<double>(binomial(n, k));
}
BENCHMARK(BM_ExactRic)->Args({18, 3})->Args({24, 3})->Args({24, 4})->Unit(benchmark::kMillisecond);

static void BM_OmpRun(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto n = 2 * m;
  const auto k = m / 8;
  const Matrix a = gaussian_sensing_matrix(m, n, 2, true);
  const Vector y = multiply(a, random_sparse_signal(n, k, 1.0, 4.0, 3).dense());
  for (auto _ : state) benchmark::DoNotOptimize(omp_run(a, y, StopRule::max_iterations(k)));
}
BENCHMARK(BM_OmpRun)->Arg(32)->Arg(128)->Arg(512);

static void BM_SymEigExtremes(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix g = gram(gaussian_sensing_matrix(2 * n, n, 4, true));
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig_extremes(g).lambda_max);
}
BENCHMARK(BM_SymEigExtremes)->Arg(4)->Arg(16)->Arg(64);

static void BM_LeastSquares(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const Matrix a = gaussian_sensing_matrix(4 * k, k, 5, true);
  const Vector y(4 * k, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(least_squares(a, y));
}
BENCHMARK(BM_LeastSquares)->Arg(4)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
