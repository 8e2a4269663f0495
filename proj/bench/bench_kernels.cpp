// Serial vs OpenMP convolution, plus the compound kernels built on it.

#include <benchmark/benchmark.h>

#include "cpa/compound.hpp"
#include "cpa/pmf.hpp"

namespace {

cpa::Pmf dense(std::size_t len) {
  std::vector<double> v(len, 1.0 / static_cast<double>(len));
  return cpa::Pmf(std::move(v), 0.0);
}

void BM_ConvolveSerial(benchmark::State& state) {
  const auto a = dense(static_cast<std::size_t>(state.range(0)));
  const auto b = dense(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cpa::serial::convolve(a, b));
}
BENCHMARK(BM_ConvolveSerial)->RangeMultiplier(4)->Range(64, 4096);

void BM_ConvolveParallel(benchmark::State& state) {
  const auto a = dense(static_cast<std::size_t>(state.range(0)));
  const auto b = dense(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cpa::convolve(a, b));
}
BENCHMARK(BM_ConvolveParallel)->RangeMultiplier(4)->Range(64, 4096);

void BM_CompoundPoisson(benchmark::State& state) {
  const auto q = cpa::geometric(0.2);
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cpa::compound_poisson(lambda, q));
}
BENCHMARK(BM_CompoundPoisson)->Arg(5)->Arg(50)->Arg(500);

void BM_SumDistribution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spec = cpa::SumSpec::equal(n, 5.0 / static_cast<double>(n), cpa::geometric(0.2));
  for (auto _ : state) benchmark::DoNotOptimize(cpa::sum_distribution(spec));
}
BENCHMARK(BM_SumDistribution)->Arg(100)->Arg(1000);

void BM_LeaveOneOutAll(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spec = cpa::SumSpec::equal(n, 5.0 / static_cast<double>(n), cpa::geometric(0.2));
  for (auto _ : state) benchmark::DoNotOptimize(cpa::leave_one_out_all(spec));
}
BENCHMARK(BM_LeaveOneOutAll)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
