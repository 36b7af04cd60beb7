#include <benchmark/benchmark.h>

#include <complex>

#include "ndphoton/special_functions.hpp"

using namespace ndphoton;

static void BM_J0Real(benchmark::State& state) {
  const double hi = static_cast<double>(state.range(0));
  for (auto _ : state) {
    double s = 0.0;
    for (int i = 0; i < 1000; ++i) s += bessel_j0(hi * i / 1000.0);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_J0Real)->Arg(12)->Arg(500);

static void BM_J0Complex(benchmark::State& state) {
  const std::complex<double> mu{1.0, 0.35};
  for (auto _ : state) {
    std::complex<double> s{};
    for (int i = 0; i < 1000; ++i) s += bessel_j0(0.37 * i / mu);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_J0Complex);

static void BM_I0Scaled(benchmark::State& state) {
  for (auto _ : state) {
    double s = 0.0;
    for (int i = 0; i < 1000; ++i) s += bessel_i0_scaled(0.1 * i);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_I0Scaled);
