#include "depict/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace depict {

MetricValue auroc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("score and label counts differ");
  if (scores.empty()) throw std::invalid_argument("empty score set");
  std::size_t positives = 0;
  for (const auto y : labels) positives += y ? 1 : 0;
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) throw std::invalid_argument("labels contain a single class");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Positive rank sum with average ranks over tie groups; exact in doubles
  // because every term is a multiple of one half.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t k = i;
    while (k + 1 < order.size() && scores[order[k + 1]] == scores[order[i]]) ++k;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(k + 1));
    for (std::size_t t = i; t <= k; ++t) {
      if (labels[order[t]]) rank_sum_pos += avg_rank;
    }
    i = k + 1;
  }
  const double u = rank_sum_pos - 0.5 * static_cast<double>(positives) * static_cast<double>(positives + 1);
  return MetricValue{u / (static_cast<double>(positives) * static_cast<double>(negatives)), scores.size()};
}

std::optional<MetricValue> try_auroc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
  bool any_pos = false, any_neg = false;
  for (const auto y : labels) (y ? any_pos : any_neg) = true;
  if (!any_pos || !any_neg || scores.size() != labels.size() || scores.empty()) return std::nullopt;
  return auroc(scores, labels);
}

MetricValue pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson inputs differ in length");
  if (x.size() < 2) throw std::invalid_argument("pearson needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson input is constant");
  const double r = sxy / std::sqrt(sxx * syy);
  return MetricValue{std::clamp(r, -1.0, 1.0), x.size()};
}

ConfidenceInterval bootstrap_ci(const std::vector<double>& samples, double level, int replicates, Rng& rng) {
  if (samples.empty()) throw std::invalid_argument("bootstrap needs samples");
  if (replicates < 1) throw std::invalid_argument("bootstrap needs at least one replicate");
  if (level <= 0.0 || level >= 1.0) throw std::invalid_argument("level outside (0,1)");
  const std::uint64_t base = rng.next_u64();
  const std::size_t n = samples.size();
  std::vector<double> means(static_cast<std::size_t>(replicates));
  for (int b = 0; b < replicates; ++b) {
    Rng r = Rng::derive(base, {static_cast<std::uint64_t>(b)});
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += samples[r.uniform_below(n)];
    means[static_cast<std::size_t>(b)] = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(replicates - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, means.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return means[lo] + frac * (means[hi] - means[lo]);
  };
  const double alpha = 1.0 - level;
  return ConfidenceInterval{quantile(alpha / 2.0), quantile(1.0 - alpha / 2.0), level, replicates};
}

std::vector<int> importance_order(const std::vector<double>& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double va = values[static_cast<std::size_t>(a)];
    const double vb = values[static_cast<std::size_t>(b)];
    return va != vb ? va > vb : a < b;
  });
  return order;
}

double topk_agreement(const std::vector<double>& a, const std::vector<double>& b, int k) {
  if (a.size() != b.size()) throw std::invalid_argument("importance vectors differ in length");
  if (k < 1 || static_cast<std::size_t>(k) > a.size()) throw std::invalid_argument("k out of range");
  const std::vector<int> oa = importance_order(a);
  const std::vector<int> ob = importance_order(b);
  std::set<int> ta(oa.begin(), oa.begin() + k);
  int hits = 0;
  for (int i = 0; i < k; ++i) hits += ta.count(ob[static_cast<std::size_t>(i)]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

std::vector<double> standardized_coefficients(const std::vector<double>& weights,
                                              const std::vector<std::vector<double>>& prediction_rows) {
  if (prediction_rows.empty()) throw std::invalid_argument("no prediction rows");
  const std::size_t d = weights.size();
  for (const auto& row : prediction_rows) {
    if (row.size() != d) throw std::invalid_argument("prediction row width does not match weights");
  }
  const double n = static_cast<double>(prediction_rows.size());
  std::vector<double> out(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (const auto& row : prediction_rows) mean += row[j];
    mean /= n;
    double var = 0.0;
    for (const auto& row : prediction_rows) {
      const double dv = row[j] - mean;
      var += dv * dv;
    }
    var /= n;  // population variance
    out[j] = weights[j] * std::sqrt(std::max(var, 0.0));
  }
  return out;
}

std::optional<MetricValue> importance_prediction_auroc(const std::vector<double>& importance,
                                                       const std::vector<double>& oracle, double threshold) {
  if (importance.size() != oracle.size()) throw std::invalid_argument("vector lengths differ");
  std::vector<std::uint8_t> labels(oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) labels[i] = oracle[i] > threshold ? 1 : 0;
  return try_auroc(importance, labels);
}

std::vector<ThresholdSweepEntry> importance_auroc_sweep(const std::vector<double>& importance,
                                                        const std::vector<double>& oracle) {
  std::set<double> uniques(oracle.begin(), oracle.end());
  std::vector<ThresholdSweepEntry> out;
  out.reserve(uniques.size());
  for (const double t : uniques) {
    out.push_back(ThresholdSweepEntry{t, importance_prediction_auroc(importance, oracle, t)});
  }
  return out;
}

}  // namespace depict
