#include <benchmark/benchmark.h>

#include "hofa/hofa.hpp"

namespace {

hofa::ComplexFn indicator(int p, int n, std::uint64_t seed) {
  hofa::Rng rng(seed);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(hofa::checked_pow(p, n)));
  for (auto& m : mask) m = static_cast<std::uint8_t>(rng.below(2));
  return hofa::ComplexFn::indicator(p, n, mask);
}

void BM_LambdaTriangle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const hofa::LinearSystem triangle{2, 2, {{1, 0}, {0, 1}, {1, 1}}};
  const std::vector<hofa::ComplexFn> fs{indicator(2, n, 1), indicator(2, n, 2), indicator(2, n, 3)};
  for (auto _ : state) benchmark::DoNotOptimize(hofa::lambda_density(triangle, fs));
}
BENCHMARK(BM_LambdaTriangle)->DenseRange(4, 8, 2);

void BM_GowersU2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const hofa::ComplexFn f = indicator(2, n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(hofa::gowers_norm(f, 2));
}
BENCHMARK(BM_GowersU2)->DenseRange(3, 5);

void BM_GowersU3Sampled(benchmark::State& state) {
  const hofa::ComplexFn f = indicator(2, 8, 5);
  const hofa::EvalMode mode{false, static_cast<std::uint64_t>(state.range(0)), 7};
  for (auto _ : state) benchmark::DoNotOptimize(hofa::gowers_norm(f, 3, mode));
}
BENCHMARK(BM_GowersU3Sampled)->Arg(1000)->Arg(10000);

void BM_ConsistencyTriangle(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hofa::LinearSystem triangle{p, 2, {{1, 0}, {0, 1}, {1, 1}}};
  for (auto _ : state) benchmark::DoNotOptimize(hofa::consistency_set({2, 0}, triangle));
}
BENCHMARK(BM_ConsistencyTriangle)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
