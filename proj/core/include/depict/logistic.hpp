#pragma once

#include <cstdint>
#include <vector>

namespace depict {

struct LogisticConfig {
  double learning_rate = 0.1;
  int iterations = 500;
  double l2 = 1e-3;  // bias stays unregularized
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  int iterations_run = 0;
  double final_loss = 0.0;
  std::vector<double> loss_trace;  // loss before each step, then the final loss

  double raw_score(const std::vector<double>& x) const;
  double prob(const std::vector<double>& x) const;
};

double sigmoid(double z);

double logistic_loss(const std::vector<std::vector<double>>& x, const std::vector<std::uint8_t>& y,
                     const std::vector<double>& weights, double bias, double l2);

void logistic_gradient(const std::vector<std::vector<double>>& x, const std::vector<std::uint8_t>& y,
                       const std::vector<double>& weights, double bias, double l2,
                       std::vector<double>& grad_w, double& grad_b);

// Deterministic full-batch gradient descent from a zero initialization.
LinearModel train_logistic(const std::vector<std::vector<double>>& x, const std::vector<std::uint8_t>& y,
                           const LogisticConfig& cfg = {});

}  // namespace depict
