#include <benchmark/benchmark.h>

#include "cloze/rng.hpp"
#include "cloze/nn.hpp"

using namespace cloze;

static void BM_Gemm(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  Rng rng(1);
  Tensor<float> a(n, n), b(n, n), c(n, n);
  fill_uniform(a, rng, -1, 1);
  fill_uniform(b, rng, -1, 1);
  for (auto _ : state) {
    gemm(a, false, b, false, c, false);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Gemm)->Arg(32)->Arg(64)->Arg(128);

static void BM_GemmTransposed(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  Rng rng(2);
  Tensor<float> a(n, n), b(n, n), c(n, n);
  fill_uniform(a, rng, -1, 1);
  fill_uniform(b, rng, -1, 1);
  for (auto _ : state) {
    gemm(a, false, b, true, c, false);
    benchmark::DoNotOptimize(c.data());
  }
}
BENCHMARK(BM_GemmTransposed)->Arg(64);

static void BM_Gemv(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  Rng rng(3);
  Tensor<double> m(n, n);
  fill_uniform(m, rng, -1, 1);
  std::vector<double> x(n, 0.5), y(n);
  for (auto _ : state) {
    gemv(m, x.data(), y.data(), false);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Gemv)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
