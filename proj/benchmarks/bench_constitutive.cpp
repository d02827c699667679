#include <benchmark/benchmark.h>

#include "richards/soil.hpp"

namespace {

const richards::SoilModel kSand{richards::HaverkampSoil{0.075, 0.287, 1.611e6, 3.96, 1.175e6, 4.74, 34.0}};
const richards::SoilModel kBerino{richards::VanGenuchtenSoil{0.0286, 0.3658, 0.0280, 2.2390, 22.5416}};

void BM_WaterContentHaverkamp(benchmark::State& state) {
  double h = -100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kSand.water_content(h));
    h = h < -1.0 ? h * 0.999 : -100.0;
  }
}
BENCHMARK(BM_WaterContentHaverkamp);

void BM_WaterContentVanGenuchten(benchmark::State& state) {
  double h = -100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kBerino.water_content(h));
    h = h < -1.0 ? h * 0.999 : -100.0;
  }
}
BENCHMARK(BM_WaterContentVanGenuchten);

void BM_DiffusivityHaverkamp(benchmark::State& state) {
  double theta = 0.15;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kSand.diffusivity(theta));
    theta = theta < 0.28 ? theta + 1e-4 : 0.15;
  }
}
BENCHMARK(BM_DiffusivityHaverkamp);

void BM_DiffusivityVanGenuchten(benchmark::State& state) {
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kBerino.diffusivity(theta));
    theta = theta < 0.36 ? theta + 1e-4 : 0.1;
  }
}
BENCHMARK(BM_DiffusivityVanGenuchten);

void BM_PressureHeadInverse(benchmark::State& state) {
  double theta = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kSand.pressure_head(theta));
    theta = theta < 0.28 ? theta + 1e-4 : 0.1;
  }
}
BENCHMARK(BM_PressureHeadInverse);

}  // namespace
