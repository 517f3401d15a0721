#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "depict/rng.hpp"

namespace depict {

struct MetricValue {
  double value = 0.0;
  std::size_t n = 0;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  int replicates = 0;
};

// Mann-Whitney AUROC with half credit per tied pair. Throws when one class
// is missing; try_auroc reports that case as an empty optional instead.
MetricValue auroc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);
std::optional<MetricValue> try_auroc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

MetricValue pearson(const std::vector<double>& x, const std::vector<double>& y);

// Percentile bootstrap of the mean, replicate streams derived from the
// caller's stream so the result is schedule-independent.
ConfidenceInterval bootstrap_ci(const std::vector<double>& samples, double level, int replicates, Rng& rng);

// |top_k(a) cut top_k(b)| / k with descending-value, index-ascending order.
double topk_agreement(const std::vector<double>& a, const std::vector<double>& b, int k);

std::vector<int> importance_order(const std::vector<double>& values);

// weights[j] times the population standard deviation of prediction column j.
std::vector<double> standardized_coefficients(const std::vector<double>& weights,
                                              const std::vector<std::vector<double>>& prediction_rows);

std::optional<MetricValue> importance_prediction_auroc(const std::vector<double>& importance,
                                                       const std::vector<double>& oracle, double threshold);

struct ThresholdSweepEntry {
  double threshold = 0.0;
  std::optional<MetricValue> auroc;  // empty when binarization is single-class
};

// One entry per unique oracle value used as a threshold.
std::vector<ThresholdSweepEntry> importance_auroc_sweep(const std::vector<double>& importance,
                                                        const std::vector<double>& oracle);

}  // namespace depict
