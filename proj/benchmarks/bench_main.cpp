#include <benchmark/benchmark.h>

#include "spectratile/cyclotomic.hpp"
#include "spectratile/fixtures.hpp"
#include "spectratile/spectral.hpp"
#include "spectratile/tiling.hpp"

using namespace spectratile;

static void BM_VanishingSum(benchmark::State& state) {
  const auto m = state.range(0);
  ExponentMultiset e(m);
  for (std::int64_t j = 0; j < m; ++j) e.add(j, 3);
  for (auto _ : state) benchmark::DoNotOptimize(is_vanishing_sum(e));
}
BENCHMARK(BM_VanishingSum)->Arg(6)->Arg(30)->Arg(210);

static void BM_ExhaustiveNonTiling(benchmark::State& state) {
  const PointSet t = fixtures::set_t();
  const GroupSpec g(3, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(decide_m_tile(t, g, {.divisibility_shortcut = false}));
}
BENCHMARK(BM_ExhaustiveNonTiling)->Unit(benchmark::kMicrosecond);

static void BM_ComposedSpectrumCheck(benchmark::State& state) {
  const SpectrumCertificate base{GroupSpec(3, 4), fixtures::set_t(), fixtures::spectrum_l()};
  const auto composed = compose_spectral(base, cube_spectrum(state.range(0), 4));
  for (auto _ : state) benchmark::DoNotOptimize(verify_spectrum(composed));
  state.SetLabel(std::to_string(composed.set.size()) + " points");
}
BENCHMARK(BM_ComposedSpectrumCheck)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_FindSpectrum(benchmark::State& state) {
  const PointSet t = fixtures::set_t();
  for (auto _ : state) benchmark::DoNotOptimize(find_spectrum(t, 3));
}
BENCHMARK(BM_FindSpectrum)->Unit(benchmark::kMicrosecond);

static void BM_TileDecideCyclic(benchmark::State& state) {
  const auto m = state.range(0);
  const PointSet t{{0}, {1}, {m / 2}, {m / 2 + 1}};
  for (auto _ : state) benchmark::DoNotOptimize(decide_m_tile(t, GroupSpec(m, 1)));
}
BENCHMARK(BM_TileDecideCyclic)->Arg(8)->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
