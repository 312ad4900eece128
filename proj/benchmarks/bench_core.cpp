#include <benchmark/benchmark.h>

#include <cmath>

#include "rnds/atlas.hpp"
#include "rnds/charts.hpp"
#include "rnds/diagram.hpp"
#include "rnds/geodesics.hpp"
#include "rnds/horizons.hpp"
#include "rnds/tortoise.hpp"

namespace {

const rnds::BlackHoleParams kParams{1.5, 1.0, 0.01};

const rnds::TortoiseMap& example() {
  static const rnds::TortoiseMap map = rnds::build_tortoise(rnds::classify_horizons(kParams), kParams);
  return map;
}

void BM_ClassifyHorizons(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rnds::classify_horizons(kParams));
}
BENCHMARK(BM_ClassifyHorizons);

void BM_BuildTortoise(benchmark::State& state) {
  const auto s = rnds::classify_horizons(kParams);
  for (auto _ : state) benchmark::DoNotOptimize(rnds::build_tortoise(s, kParams));
}
BENCHMARK(BM_BuildTortoise);

void BM_TortoiseValue(benchmark::State& state) {
  const auto& m = example();
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m(r));
    r = r < 20.0 ? r * 1.01 : 0.1;
  }
}
BENCHMARK(BM_TortoiseValue);

void BM_TortoiseInvert(benchmark::State& state) {
  const auto& m = example();
  const double s = m(3.5);
  for (auto _ : state) benchmark::DoNotOptimize(m.invert(rnds::RegionId{3}, s));
}
BENCHMARK(BM_TortoiseInvert);

void BM_RnDSToKruskal(benchmark::State& state) {
  const auto& m = example();
  const rnds::KruskalChart chart(m, 2);
  const rnds::ChartPoint p{rnds::ChartKind::RNdS, 3, false, {1.0, 3.5}, {}, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(rnds::to_kruskal(rnds::to_double_null(p, m), chart));
}
BENCHMARK(BM_RnDSToKruskal);

void BM_AtlasResolve(benchmark::State& state) {
  const rnds::Atlas atlas(example());
  const auto q = rnds::GlobalPoint::from_lattice(0.9, -0.3);
  for (auto _ : state) benchmark::DoNotOptimize(atlas.resolve(q));
}
BENCHMARK(BM_AtlasResolve);

void BM_TimelikeTrace(benchmark::State& state) {
  const auto& m = example();
  const rnds::ChartPoint start{rnds::ChartKind::RNdS, 3, false, {0.0, 4.0}, {}, std::nullopt};
  const double f = rnds::horizon_function(kParams, 4.0);
  const double r_dot = -0.3;
  const double t_dot = std::sqrt((1.0 + r_dot * r_dot / f) / f);
  for (auto _ : state) benchmark::DoNotOptimize(rnds::radial_timelike_trace(m, start, t_dot, r_dot));
}
BENCHMARK(BM_TimelikeTrace)->Unit(benchmark::kMillisecond);

void BM_DiagramDataset(benchmark::State& state) {
  const rnds::Atlas atlas(example());
  rnds::DiagramOptions opt;
  opt.radii = {0.2, 2.0, 5.0, 20.0};
  opt.times = {-2.0, 0.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(rnds::diagram_dataset(atlas, opt));
}
BENCHMARK(BM_DiagramDataset)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
