#include <benchmark/benchmark.h>

#include "depict/raster.hpp"
#include "depict/rng.hpp"
#include "depict/scene.hpp"

namespace {

void BM_PlaceShapes(benchmark::State& state) {
  const auto space = depict::ConceptSpace::default_shapes();
  const auto canvas = depict::CanvasSpec::default64();
  const depict::ConceptVector v(6, 1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    depict::Rng rng = depict::Rng::derive(seed++, {0});
    benchmark::DoNotOptimize(depict::place_shapes(v, space, canvas, rng));
  }
}
BENCHMARK(BM_PlaceShapes);

void BM_Rasterize(benchmark::State& state) {
  const auto space = depict::ConceptSpace::default_shapes();
  depict::Rng rng(1);
  const auto scene = depict::place_shapes(depict::ConceptVector(6, 1), space, depict::CanvasSpec::default64(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(depict::rasterize(scene, space));
  }
}
BENCHMARK(BM_Rasterize);

}  // namespace

BENCHMARK_MAIN();
