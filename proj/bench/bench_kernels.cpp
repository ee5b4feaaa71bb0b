#include <benchmark/benchmark.h>

#include "mixdisc/kernels.hpp"

using namespace mixdisc;

namespace {

std::vector<CMatrix> random_mats(int n) {
  Rng rng(7, static_cast<std::uint64_t>(n));
  std::vector<CMatrix> mats;
  for (int i = 0; i < n; ++i) mats.push_back(random_psd(n, rng).matrix());
  return mats;
}

CMatrix random_square(int n) {
  Rng rng(8, static_cast<std::uint64_t>(n));
  CMatrix c(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) c(i, j) = rng.complex_normal();
  return c;
}

void BM_DiscriminantSerial(benchmark::State& state) {
  const auto mats = random_mats(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::mixed_discriminant_subsets(mats));
}

void BM_DiscriminantParallel(benchmark::State& state) {
  const auto mats = random_mats(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::mixed_discriminant_centered(mats));
}

void BM_PermanentSerial(benchmark::State& state) {
  const CMatrix c = random_square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::permanent_ryser(c));
}

void BM_PermanentParallel(benchmark::State& state) {
  const CMatrix c = random_square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::permanent_ryser(c));
}

}  // namespace

BENCHMARK(BM_DiscriminantSerial)->DenseRange(6, 14, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiscriminantParallel)->DenseRange(6, 14, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PermanentSerial)->DenseRange(10, 20, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermanentParallel)->DenseRange(10, 20, 2)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
