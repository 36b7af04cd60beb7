#include <benchmark/benchmark.h>

#include "ndphoton/beams.hpp"
#include "ndphoton/optics.hpp"

using namespace ndphoton;

namespace {
const BGParams kPump{1850.0, 0.046, 0.406};
}

static void BM_Propagate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ComplexField near = to_position(bg_spectrum(kPump, make_grid(n, 12.0)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(near, 2.5e5, kPump.wavelength));
}
BENCHMARK(BM_Propagate)->Arg(512)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_BGFieldClosedForm(benchmark::State& state) {
  const GridSpec g = make_grid(1024, 12.0);
  for (auto _ : state) benchmark::DoNotOptimize(bg_field(kPump, 2.5e5, g));
}
BENCHMARK(BM_BGFieldClosedForm)->Unit(benchmark::kMillisecond);

static void BM_FourierTrain(benchmark::State& state) {
  const ComplexField near = to_position(bg_spectrum(kPump, make_grid(1024, 12.0)));
  const OpticalTrain train{0.812, {{FourierSystem{1e5}, "FP1"}, {FourierSystem{3e5}, "FP2"}, {FreeSpace{2e5}, ""}}};
  for (auto _ : state) benchmark::DoNotOptimize(run_train(near, train));
}
BENCHMARK(BM_FourierTrain)->Unit(benchmark::kMillisecond);
