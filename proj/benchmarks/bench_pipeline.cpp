#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "depict/engine.hpp"
#include "depict/metrics.hpp"
#include "depict/models.hpp"
#include "depict/saliency.hpp"

namespace {

using namespace depict;

std::vector<double> random_scores(int n, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, {1});
  std::vector<double> scores(static_cast<std::size_t>(n));
  for (auto& s : scores) s = rng.next_double();
  return scores;
}

std::vector<std::uint8_t> random_labels(int n, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, {2});
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(n));
  labels[0] = 0;
  labels[1] = 1;
  for (std::size_t i = 2; i < labels.size(); ++i) labels[i] = rng.uniform_below(2) ? 1 : 0;
  return labels;
}

void BM_Auroc(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto scores = random_scores(n, 7);
  const auto labels = random_labels(n, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(auroc(scores, labels));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Auroc)->Range(64, 16384)->Complexity(benchmark::oNLogN);

void BM_PredictConcepts(benchmark::State& state) {
  const auto space = ConceptSpace::default_shapes();
  const auto h = ConceptClassifier::analytic_default();
  Rng rng(3);
  const auto scene = place_shapes(ConceptVector{1, 0, 1, 0, 1, 0}, space, h.canvas, rng);
  const Image img = rasterize(scene, space);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_concepts(h, img));
  }
}
BENCHMARK(BM_PredictConcepts);

void BM_DepictRun(benchmark::State& state) {
  const auto space = ConceptSpace::default_shapes();
  ExperimentConfig cfg;
  cfg.generator = GeneratorSpec::oracle_default();
  cfg.N = static_cast<int>(state.range(0));
  cfg.P = 2;
  cfg.seed = 11;
  Rng rng = Rng::derive(11, {3});
  const ConceptMatrix m = sample_concept_matrix(rng, space, cfg.N, 0.5);
  Rng weight_rng = Rng::derive(11, {4});
  const TargetTask task = make_task(weight_rng, ConceptClassifier::analytic_default(), m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(depict_run(task, cfg, m, task.labels, space));
  }
}
BENCHMARK(BM_DepictRun)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_OcclusionSaliency(benchmark::State& state) {
  const auto space = ConceptSpace::default_shapes();
  const auto h = ConceptClassifier::analytic_default();
  Rng rng(5);
  const ConceptMatrix m = sample_concept_matrix(rng, space, 32, 0.5);
  Rng weight_rng(6);
  const TargetTask task = make_task(weight_rng, h, m);
  Rng scene_rng(7);
  const auto scene = place_shapes(ConceptVector{1, 1, 0, 0, 0, 0}, space, h.canvas, scene_rng);
  const Image img = rasterize(scene, space);
  for (auto _ : state) {
    benchmark::DoNotOptimize(occlusion_saliency(task, img));
  }
}
BENCHMARK(BM_OcclusionSaliency);

}  // namespace

BENCHMARK_MAIN();
