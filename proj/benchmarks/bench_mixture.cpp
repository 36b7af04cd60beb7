#include <benchmark/benchmark.h>

#include "ndphoton/beams.hpp"
#include "ndphoton/spdc.hpp"

using namespace ndphoton;

namespace {

PumpState lab_pump(std::size_t n) {
  return PumpState::degenerate(bg_spectrum(BGParams{1850.0, 0.046, 0.406}, make_grid(n, 12.0)), 0.406);
}

HeraldSpec idler_fiber(std::size_t nr, std::size_t na) {
  HeraldSpec h;
  h.k_center = {0.046, 0.0};
  h.aperture_radius_k = fiber_radius_to_k(100.0, 0.812, 1e5);
  h.n_radial = nr;
  h.n_azimuthal = na;
  return h;
}

const OpticalTrain kTrain{0.812, {{FourierSystem{1e5}, "FP1"}, {FourierSystem{3e5}, "FP2"}}};

}  // namespace

static void BM_HeraldedIntensity(benchmark::State& state) {
  const PumpState pump = lab_pump(1024);
  const HeraldSpec h = idler_fiber(static_cast<std::size_t>(state.range(0)), 16);
  const MixtureOptions opt{state.range(1) ? MixtureRoute::Literal : MixtureRoute::Covariant, false};
  for (auto _ : state) benchmark::DoNotOptimize(heralded_intensity(pump, h, kTrain, 1e5, opt));
}
BENCHMARK(BM_HeraldedIntensity)
    ->Args({6, 0})
    ->Args({12, 0})
    ->Args({1, 1})
    ->Unit(benchmark::kMillisecond);

static void BM_ConditionalMomentumMap(benchmark::State& state) {
  const PumpState pump = lab_pump(1024);
  const HeraldSpec h = idler_fiber(6, 16);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_momentum_map(pump, h, 0.0));
}
BENCHMARK(BM_ConditionalMomentumMap)->Unit(benchmark::kMillisecond);

static void BM_Singles(benchmark::State& state) {
  const PumpState pump = lab_pump(1024);
  const HeraldSpec acc = default_idler_acceptance(pump);
  for (auto _ : state) benchmark::DoNotOptimize(unconditioned_intensity(pump, acc, kTrain, 1e5));
}
BENCHMARK(BM_Singles)->Unit(benchmark::kMillisecond);
