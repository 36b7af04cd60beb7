#include <benchmark/benchmark.h>

#include <random>

#include "ndphoton/field.hpp"

using namespace ndphoton;

static void BM_ToMomentum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ComplexField u(make_grid(n, 12.0), Domain::Position);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (auto& v : u.values()) v = {nd(rng), nd(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(to_momentum(u));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_ToMomentum)->RangeMultiplier(2)->Range(256, 2048)->Unit(benchmark::kMillisecond);

static void BM_RoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ComplexField u(make_grid(n, 12.0), Domain::Position);
  u.values()[n * n / 2 + n / 2] = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(to_position(to_momentum(u)));
}
BENCHMARK(BM_RoundTrip)->Arg(1024)->Unit(benchmark::kMillisecond);
