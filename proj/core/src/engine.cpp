#include "depict/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "depict/parallel.hpp"

namespace depict {
namespace {

// Stream salts. kPermutationSalt is shared between depict_run and
// bottleneck_oracle on purpose: repetition (j, p) must draw the same shuffle
// in both pipelines.
constexpr std::uint64_t kPermutationSalt = 0xa11ce;
constexpr std::uint64_t kCiSalt = 0xb007;
constexpr std::uint64_t kTabularSalt = 0x7ab;
constexpr std::uint64_t kIndependentSalt = 0x1d9;

// Dataset / prediction stream ids inside one engine call.
constexpr std::uint64_t kReferenceDataset = 0;
constexpr std::uint64_t kIndependentBase = std::uint64_t{1} << 30;
constexpr std::uint64_t kEffectiveBase = std::uint64_t{1} << 40;

std::uint64_t cell_dataset_id(int j, int P, int p) {
  return 1 + static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(P) + static_cast<std::uint64_t>(p);
}

std::vector<int> seeded_shuffle(std::uint64_t seed, std::uint64_t salt, std::uint64_t j, std::uint64_t p, int n) {
  Rng rng = Rng::derive(seed, {salt, j, p});
  return rng.permutation(n);
}

ConceptMatrix permute_column_by(const ConceptMatrix& m, int j, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != m.rows()) throw std::invalid_argument("permutation length mismatch");
  ConceptMatrix out = m;
  for (int r = 0; r < m.rows(); ++r) {
    out.set(r, j, m.at(perm[static_cast<std::size_t>(r)], j));
  }
  return out;
}

double prediction_value(const TargetTask& f, const ConceptPrediction& p, int j) {
  return f.bottleneck.kind == ClassifierKind::analytic ? static_cast<double>(p.bits[static_cast<std::size_t>(j)])
                                                       : p.probs[static_cast<std::size_t>(j)];
}

std::vector<double> task_scores(const TargetTask& f, const std::vector<ConceptPrediction>& preds) {
  std::vector<double> scores(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) scores[i] = task_score_from_prediction(f, preds[i]);
  return scores;
}

ConfidenceInterval drops_ci(const std::vector<double>& drops, std::uint64_t seed, std::uint64_t salt, int j,
                            int replicates, double level) {
  Rng rng = Rng::derive(seed, {kCiSalt, salt, static_cast<std::uint64_t>(j)});
  return bootstrap_ci(drops, level, replicates, rng);
}

void finalize_report(ImportanceReport& report) {
  for (auto& dist : report.concepts) {
    double sum = 0.0;
    for (const double d : dist.drops) sum += d;
    dist.mean_drop = dist.drops.empty() ? 0.0 : sum / static_cast<double>(dist.drops.size());
  }
  report.ranking = rank_concepts(report);
}

std::vector<double> concept_column(const std::vector<ConceptPrediction>& preds, int k) {
  std::vector<double> out(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) out[i] = preds[i].probs[static_cast<std::size_t>(k)];
  return out;
}

std::vector<std::uint8_t> column_bits(const ConceptMatrix& m, int k) { return m.column(k); }

}  // namespace

void EngineThresholds::validate() const {
  for (const double t : {effective_generation, independent_diag, independent_offdiag}) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("thresholds must lie in [0,1]");
  }
}

void ExperimentConfig::validate(const ConceptSpace& space) const {
  if (P < 1) throw std::invalid_argument("P must be at least 1");
  if (N < 10) throw std::invalid_argument("N must be at least 10");
  if (bootstrap_replicates < 1) throw std::invalid_argument("bootstrap replicates must be positive");
  if (bootstrap_level <= 0.0 || bootstrap_level >= 1.0) throw std::invalid_argument("bootstrap level outside (0,1)");
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  thresholds.validate();
  generator.validate(space);
}

std::vector<double> ImportanceReport::mean_drops() const {
  std::vector<double> out(concepts.size());
  for (std::size_t j = 0; j < concepts.size(); ++j) out[j] = concepts[j].mean_drop;
  return out;
}

std::vector<int> rank_concepts(const ImportanceReport& report) {
  return importance_order(report.mean_drops());
}

MetricValue reference_performance(const TargetTask& f, const std::vector<Image>& images,
                                  const std::vector<std::uint8_t>& labels, std::uint64_t seed,
                                  std::uint64_t salt, int workers) {
  if (images.size() != labels.size()) throw std::invalid_argument("image and label counts differ");
  const auto preds = predict_dataset(f.bottleneck, images, seed, salt, workers);
  return auroc(task_scores(f, preds), labels);
}

ImportanceDistribution tabular_permutation_importance(const RowPredictor& predict, const ConceptMatrix& m,
                                                      const std::vector<std::uint8_t>& labels, int j, int P,
                                                      std::uint64_t seed, int bootstrap_replicates,
                                                      double bootstrap_level) {
  if (j < 0 || j >= m.cols()) throw std::out_of_range("concept index out of range");
  if (P < 1) throw std::invalid_argument("P must be at least 1");
  if (static_cast<int>(labels.size()) != m.rows()) throw std::invalid_argument("label count mismatch");

  std::vector<double> scores(static_cast<std::size_t>(m.rows()));
  for (int r = 0; r < m.rows(); ++r) scores[static_cast<std::size_t>(r)] = predict(m.row(r));
  const double reference = auroc(scores, labels).value;

  ImportanceDistribution dist;
  dist.concept_index = j;
  dist.drops.resize(static_cast<std::size_t>(P));
  for (int p = 0; p < P; ++p) {
    const std::vector<int> perm = seeded_shuffle(seed, kTabularSalt, static_cast<std::uint64_t>(j),
                                                 static_cast<std::uint64_t>(p), m.rows());
    const ConceptMatrix permuted = permute_column_by(m, j, perm);
    std::vector<double> perm_scores(static_cast<std::size_t>(m.rows()));
    for (int r = 0; r < m.rows(); ++r) perm_scores[static_cast<std::size_t>(r)] = predict(permuted.row(r));
    dist.drops[static_cast<std::size_t>(p)] = reference - auroc(perm_scores, labels).value;
  }
  double sum = 0.0;
  for (const double d : dist.drops) sum += d;
  dist.mean_drop = sum / static_cast<double>(P);
  dist.ci = drops_ci(dist.drops, seed, kTabularSalt, j, bootstrap_replicates, bootstrap_level);
  return dist;
}

ImportanceReport depict_run(const TargetTask& f, const ExperimentConfig& cfg, const ConceptMatrix& m,
                            const std::vector<std::uint8_t>& labels, const ConceptSpace& space,
                            const PermutationHook& hook) {
  cfg.validate(space);
  if (static_cast<int>(labels.size()) != m.rows()) throw std::invalid_argument("label count mismatch");
  if (static_cast<int>(f.weights.size()) != m.cols()) throw std::invalid_argument("task width mismatch");

  const std::vector<Image> reference_images =
      generate_dataset(cfg.generator, m, space, cfg.seed, kReferenceDataset, cfg.workers);
  const auto reference_preds =
      predict_dataset(f.bottleneck, reference_images, cfg.seed, kReferenceDataset, cfg.workers);
  const double reference = auroc(task_scores(f, reference_preds), labels).value;

  const int d = m.cols();
  ImportanceReport report;
  report.reference = reference;
  report.concepts.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    report.concepts[static_cast<std::size_t>(j)].concept_index = j;
    report.concepts[static_cast<std::size_t>(j)].drops.resize(static_cast<std::size_t>(cfg.P));
  }

  const std::size_t cells = static_cast<std::size_t>(d) * static_cast<std::size_t>(cfg.P);
  parallel_for(cells, cfg.workers, [&](std::size_t cell) {
    const int j = static_cast<int>(cell / static_cast<std::size_t>(cfg.P));
    const int p = static_cast<int>(cell % static_cast<std::size_t>(cfg.P));
    try {
      const std::vector<int> perm =
          hook ? hook(m.rows(), j, p)
               : seeded_shuffle(cfg.seed, kPermutationSalt, static_cast<std::uint64_t>(j),
                                static_cast<std::uint64_t>(p), m.rows());
      const ConceptMatrix permuted = permute_column_by(m, j, perm);
      const std::uint64_t id = cell_dataset_id(j, cfg.P, p);
      const std::vector<Image> images = generate_dataset(cfg.generator, permuted, space, cfg.seed, id, 1);
      const auto preds = predict_dataset(f.bottleneck, images, cfg.seed, id, 1);
      const double permuted_auroc = auroc(task_scores(f, preds), labels).value;
      report.concepts[static_cast<std::size_t>(j)].drops[static_cast<std::size_t>(p)] =
          reference - permuted_auroc;
    } catch (const std::exception& e) {
      throw std::runtime_error("concept " + std::to_string(j) + " repetition " + std::to_string(p) + ": " +
                               e.what());
    }
  });

  for (int j = 0; j < d; ++j) {
    auto& dist = report.concepts[static_cast<std::size_t>(j)];
    dist.ci = drops_ci(dist.drops, cfg.seed, kPermutationSalt, j, cfg.bootstrap_replicates, cfg.bootstrap_level);
  }
  finalize_report(report);
  return report;
}

ImportanceReport bottleneck_oracle(const TargetTask& f, const std::vector<ConceptPrediction>& predictions,
                                   const std::vector<std::uint8_t>& labels, int P, std::uint64_t seed,
                                   int bootstrap_replicates, double bootstrap_level) {
  if (predictions.size() != labels.size()) throw std::invalid_argument("prediction and label counts differ");
  if (predictions.empty()) throw std::invalid_argument("no predictions");
  if (P < 1) throw std::invalid_argument("P must be at least 1");
  const int d = static_cast<int>(f.weights.size());
  const int n = static_cast<int>(predictions.size());

  const std::vector<double> reference_scores = task_scores(f, predictions);
  const double reference = auroc(reference_scores, labels).value;

  ImportanceReport report;
  report.reference = reference;
  report.reference_real = reference;
  report.concepts.resize(static_cast<std::size_t>(d));

  // Per-row values in the same order the score loop reads them, so the
  // permuted sums land on bitwise the same doubles as the image pipeline and
  // tie groups match it exactly.
  std::vector<std::vector<double>> values(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(n)));
  for (int k = 0; k < d; ++k) {
    for (int r = 0; r < n; ++r) {
      values[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] =
          prediction_value(f, predictions[static_cast<std::size_t>(r)], k);
    }
  }

  std::vector<double> scores(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    auto& dist = report.concepts[static_cast<std::size_t>(j)];
    dist.concept_index = j;
    dist.drops.resize(static_cast<std::size_t>(P));
    for (int p = 0; p < P; ++p) {
      const std::vector<int> perm = seeded_shuffle(seed, kPermutationSalt, static_cast<std::uint64_t>(j),
                                                   static_cast<std::uint64_t>(p), n);
      for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
          const int source = k == j ? perm[static_cast<std::size_t>(r)] : r;
          s += f.weights[static_cast<std::size_t>(k)] *
               values[static_cast<std::size_t>(k)][static_cast<std::size_t>(source)];
        }
        scores[static_cast<std::size_t>(r)] = s;
      }
      dist.drops[static_cast<std::size_t>(p)] = reference - auroc(scores, labels).value;
    }
    dist.ci = drops_ci(dist.drops, seed, kPermutationSalt, j, bootstrap_replicates, bootstrap_level);
  }
  finalize_report(report);
  return report;
}

EffectiveGenerationReport effective_generation_check(const TargetTask& f, const ConceptClassifier& h,
                                                     const std::vector<Image>& real_images,
                                                     const std::vector<Image>& generated_images,
                                                     const std::vector<std::uint8_t>& labels,
                                                     const ConceptMatrix& true_concepts,
                                                     const EngineThresholds& thresholds, std::uint64_t seed,
                                                     int workers) {
  if (real_images.size() != generated_images.size()) throw std::invalid_argument("image set sizes differ");
  if (real_images.size() != labels.size()) throw std::invalid_argument("label count mismatch");
  if (static_cast<int>(real_images.size()) != true_concepts.rows()) {
    throw std::invalid_argument("truth matrix row count mismatch");
  }
  thresholds.validate();

  EffectiveGenerationReport report;
  report.reference_real = reference_performance(f, real_images, labels, seed, kEffectiveBase + 1, workers).value;
  report.reference_generated =
      reference_performance(f, generated_images, labels, seed, kEffectiveBase + 2, workers).value;
  report.target_diff = report.reference_real - report.reference_generated;
  report.target_flagged = report.target_diff > thresholds.effective_generation;

  const auto preds_real = predict_dataset(h, real_images, seed, kEffectiveBase + 3, workers);
  const auto preds_generated = predict_dataset(h, generated_images, seed, kEffectiveBase + 4, workers);
  const int d = static_cast<int>(h.space.size());
  report.concept_diffs.assign(static_cast<std::size_t>(d), std::nullopt);
  report.concept_flags.assign(static_cast<std::size_t>(d), false);
  for (int k = 0; k < d; ++k) {
    const auto truth = column_bits(true_concepts, k);
    const auto real_auroc = try_auroc(concept_column(preds_real, k), truth);
    const auto generated_auroc = try_auroc(concept_column(preds_generated, k), truth);
    if (!real_auroc || !generated_auroc) continue;
    const double diff = real_auroc->value - generated_auroc->value;
    report.concept_diffs[static_cast<std::size_t>(k)] = diff;
    report.concept_flags[static_cast<std::size_t>(k)] = diff > thresholds.effective_generation;
  }
  return report;
}

std::vector<std::optional<double>> independent_permutation_check(const ConceptClassifier& h,
                                                                 const ExperimentConfig& cfg,
                                                                 const ConceptMatrix& m, int j,
                                                                 const ConceptSpace& space) {
  if (j < 0 || j >= m.cols()) throw std::out_of_range("concept index out of range");
  const std::vector<Image> base =
      generate_dataset(cfg.generator, m, space, cfg.seed, kIndependentBase, cfg.workers);
  const auto base_preds = predict_dataset(h, base, cfg.seed, kIndependentBase, cfg.workers);

  const std::vector<int> perm =
      seeded_shuffle(cfg.seed, kIndependentSalt, static_cast<std::uint64_t>(j), 0, m.rows());
  const ConceptMatrix permuted = permute_column_by(m, j, perm);
  const std::uint64_t id = kIndependentBase + 1 + static_cast<std::uint64_t>(j);
  const std::vector<Image> after = generate_dataset(cfg.generator, permuted, space, cfg.seed, id, cfg.workers);
  const auto after_preds = predict_dataset(h, after, cfg.seed, id, cfg.workers);

  std::vector<std::optional<double>> changes(static_cast<std::size_t>(m.cols()), std::nullopt);
  for (int k = 0; k < m.cols(); ++k) {
    const auto truth = column_bits(m, k);  // pre-permutation truth
    const auto before = try_auroc(concept_column(base_preds, k), truth);
    const auto post = try_auroc(concept_column(after_preds, k), truth);
    if (before && post) changes[static_cast<std::size_t>(k)] = before->value - post->value;
  }
  return changes;
}

IndependentPermutationReport independent_permutation_matrix(const ConceptClassifier& h, const ExperimentConfig& cfg,
                                                            const ConceptMatrix& m, const ConceptSpace& space) {
  cfg.validate(space);
  IndependentPermutationReport report;
  const int d = m.cols();
  report.changes.resize(static_cast<std::size_t>(d));
  report.flags.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    report.changes[static_cast<std::size_t>(j)] = independent_permutation_check(h, cfg, m, j, space);
    auto& flags = report.flags[static_cast<std::size_t>(j)];
    flags.assign(static_cast<std::size_t>(d), false);
    for (int k = 0; k < d; ++k) {
      const auto& change = report.changes[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      if (!change) continue;
      if (k == j) {
        flags[static_cast<std::size_t>(k)] = *change < cfg.thresholds.independent_diag;
      } else {
        flags[static_cast<std::size_t>(k)] = *change > cfg.thresholds.independent_offdiag;
      }
    }
  }
  return report;
}

}  // namespace depict
