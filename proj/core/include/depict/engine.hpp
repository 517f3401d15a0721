#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "depict/concept_space.hpp"
#include "depict/generators.hpp"
#include "depict/metrics.hpp"
#include "depict/models.hpp"

namespace depict {

struct EngineThresholds {
  double effective_generation = 0.05;  // flag target/concept diffs above this
  double independent_diag = 0.25;      // expect at least this drop on the permuted concept
  double independent_offdiag = 0.05;   // flag other concepts dropping above this
  void validate() const;
};

struct ExperimentConfig {
  int P = 100;  // permutation repetitions
  int N = 1000; // test-set rows
  std::uint64_t seed = 0;
  GeneratorSpec generator;
  EngineThresholds thresholds;
  int bootstrap_replicates = 1000;
  double bootstrap_level = 0.95;
  int workers = 1;
  void validate(const ConceptSpace& space) const;
};

struct ImportanceDistribution {
  int concept_index = -1;
  std::vector<double> drops;  // reference minus permuted performance, one per repetition
  double mean_drop = 0.0;
  ConfidenceInterval ci;
};

struct ImportanceReport {
  double reference = 0.0;                // performance the drops subtract from
  std::optional<double> reference_real;  // performance on real images, when known
  std::vector<ImportanceDistribution> concepts;
  std::vector<int> ranking;  // descending mean drop, ascending index on ties

  std::vector<double> mean_drops() const;
};

std::vector<int> rank_concepts(const ImportanceReport& report);

// AUROC of the task's scores over a concrete image set.
MetricValue reference_performance(const TargetTask& f, const std::vector<Image>& images,
                                  const std::vector<std::uint8_t>& labels, std::uint64_t seed,
                                  std::uint64_t salt, int workers);

using RowPredictor = std::function<double(const ConceptVector&)>;

// Classic tabular permutation importance over explicit concept rows.
ImportanceDistribution tabular_permutation_importance(const RowPredictor& predict, const ConceptMatrix& m,
                                                      const std::vector<std::uint8_t>& labels, int j, int P,
                                                      std::uint64_t seed, int bootstrap_replicates = 1000,
                                                      double bootstrap_level = 0.95);

// Test hook: supplies the row permutation for repetition (j, p) instead of
// the seeded shuffle.
using PermutationHook = std::function<std::vector<int>(int rows, int j, int p)>;

// Image-space permutation importance: permute concept j across rows, map the
// rows back through the generator, rescore. Repetition (j, p) draws its
// shuffle from a stream derived from (seed, j, p); the bottleneck oracle
// derives the same shuffles, so the two stay pairable.
ImportanceReport depict_run(const TargetTask& f, const ExperimentConfig& cfg, const ConceptMatrix& m,
                            const std::vector<std::uint8_t>& labels, const ConceptSpace& space,
                            const PermutationHook& hook = {});

// Permutes stored concept predictions directly, skipping generation.
ImportanceReport bottleneck_oracle(const TargetTask& f, const std::vector<ConceptPrediction>& predictions,
                                   const std::vector<std::uint8_t>& labels, int P, std::uint64_t seed,
                                   int bootstrap_replicates = 1000, double bootstrap_level = 0.95);

struct EffectiveGenerationReport {
  double reference_real = 0.0;       // a
  double reference_generated = 0.0;  // a'
  double target_diff = 0.0;          // a - a'
  bool target_flagged = false;
  std::vector<std::optional<double>> concept_diffs;  // real minus generated concept AUROC
  std::vector<bool> concept_flags;
};

EffectiveGenerationReport effective_generation_check(const TargetTask& f, const ConceptClassifier& h,
                                                     const std::vector<Image>& real_images,
                                                     const std::vector<Image>& generated_images,
                                                     const std::vector<std::uint8_t>& labels,
                                                     const ConceptMatrix& true_concepts,
                                                     const EngineThresholds& thresholds, std::uint64_t seed,
                                                     int workers);

// Entry [k]: concept-k classifier AUROC change (before minus after) caused by
// permuting concept j, judged against the pre-permutation truth.
std::vector<std::optional<double>> independent_permutation_check(const ConceptClassifier& h,
                                                                 const ExperimentConfig& cfg,
                                                                 const ConceptMatrix& m, int j,
                                                                 const ConceptSpace& space);

struct IndependentPermutationReport {
  std::vector<std::vector<std::optional<double>>> changes;  // [permuted j][concept k]
  std::vector<std::vector<bool>> flags;
};

IndependentPermutationReport independent_permutation_matrix(const ConceptClassifier& h, const ExperimentConfig& cfg,
                                                            const ConceptMatrix& m, const ConceptSpace& space);

struct ValidationReport {
  EffectiveGenerationReport effective_generation;
  IndependentPermutationReport independent_permutation;
};

}  // namespace depict
