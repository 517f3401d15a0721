#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depict/engine.hpp"
#include "depict/saliency.hpp"
#include "depict/serde.hpp"

namespace depict {

// One end-to-end study: sample `tasks` concept-bottleneck targets, measure
// image-space permutation importance for each, and pool the results against
// the standardized-coefficient ground truth.
struct RunConfig {
  ConceptSpace space = ConceptSpace::default_shapes();
  GeneratorSpec generator = GeneratorSpec::oracle_default();  // carries the canvas
  int tasks = 20;
  int N = 1000;
  int P = 100;
  std::uint64_t seed = 0;
  int bootstrap_replicates = 1000;
  double bootstrap_level = 0.95;
  EngineThresholds thresholds;
  bool baseline = false;
  int baseline_images = 50;  // occlusion saliency instances per task
  int workers = 1;           // execution detail: not hashed, not echoed in artifacts

  const CanvasSpec& canvas() const { return generator.canvas; }
  void validate() const;
};

// FNV-1a over the canonical JSON of the semantic fields. Worker count is
// excluded so the hash names the study, not the machine.
std::uint64_t config_hash(const RunConfig& cfg);

Json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const Json& j);

struct TaskArtifacts {
  int task_index = -1;
  std::uint64_t task_seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<double> weights;
  double threshold = 0.0;
  ImportanceReport depict;
  ImportanceReport bottleneck;  // permutes concept predictions directly
  std::vector<double> standardized;
  std::optional<double> pearson_vs_bottleneck;
  std::optional<double> pearson_vs_standardized;
  ValidationReport validation;
  std::optional<IouRanking> baseline;
};

struct TaskFailure {
  int task_index = -1;
  std::string error;
};

struct PooledMetrics {
  int excluded_tasks = 0;
  std::optional<MetricValue> depict_vs_standardized;    // pooled over task x concept points
  std::optional<MetricValue> bottleneck_vs_standardized;
  std::optional<MetricValue> baseline_vs_standardized;  // mean IOU as importance, absent = 0
  std::vector<double> topk_agreement;                   // entry k-1: mean top-k agreement
  std::vector<ThresholdSweepEntry> importance_auroc_sweep;
};

struct ExperimentArtifacts {
  int schema_version = 1;
  std::uint64_t config_hash = 0;
  RunConfig config;
  std::vector<TaskArtifacts> tasks;
  std::vector<TaskFailure> failures;
  PooledMetrics pooled;
};

// Tasks run sequentially with derived seeds; a failing task records a
// TaskFailure and is excluded from the pooled metrics.
ExperimentArtifacts run_experiment(const RunConfig& cfg);

Json artifacts_to_json(const ExperimentArtifacts& artifacts);
ExperimentArtifacts artifacts_from_json(const Json& j);

// dir/report.json, dir/report.csv (one row per task x concept, failed tasks
// with empty metric cells), dir/report.svg (per-concept drop boxplots).
// formats picks any subset of {"json", "csv", "svg"}.
void emit_report(const ExperimentArtifacts& artifacts, const std::string& dir,
                 const std::vector<std::string>& formats);

std::string report_csv(const ExperimentArtifacts& artifacts);
std::string report_svg(const ExperimentArtifacts& artifacts);

}  // namespace depict
