#include "depict/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace depict {
namespace {

void check_inputs(const std::vector<std::vector<double>>& x, const std::vector<std::uint8_t>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("feature and label counts differ");
  if (x.empty()) throw std::invalid_argument("empty training set");
  const std::size_t dim = x.front().size();
  for (const auto& row : x) {
    if (row.size() != dim) throw std::invalid_argument("ragged feature rows");
  }
}

// softplus(z) = log(1 + e^z), stable for large |z|
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LinearModel::raw_score(const std::vector<double>& x) const {
  if (x.size() != weights.size()) throw std::invalid_argument("feature width does not match the model");
  double z = bias;
  for (std::size_t i = 0; i < x.size(); ++i) z += weights[i] * x[i];
  return z;
}

double LinearModel::prob(const std::vector<double>& x) const { return sigmoid(raw_score(x)); }

double logistic_loss(const std::vector<std::vector<double>>& x, const std::vector<std::uint8_t>& y,
                     const std::vector<double>& weights, double bias, double l2) {
  check_inputs(x, y);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = bias;
    for (std::size_t k = 0; k < weights.size(); ++k) z += weights[k] * x[i][k];
    sum += softplus(z) - (y[i] ? z : 0.0);
  }
  double reg = 0.0;
  for (const double w : weights) reg += w * w;
  return sum / static_cast<double>(x.size()) + 0.5 * l2 * reg;
}

void logistic_gradient(const std::vector<std::vector<double>>& x, const std::vector<std::uint8_t>& y,
                       const std::vector<double>& weights, double bias, double l2,
                       std::vector<double>& grad_w, double& grad_b) {
  check_inputs(x, y);
  grad_w.assign(weights.size(), 0.0);
  grad_b = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = bias;
    for (std::size_t k = 0; k < weights.size(); ++k) z += weights[k] * x[i][k];
    const double residual = sigmoid(z) - (y[i] ? 1.0 : 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) grad_w[k] += residual * x[i][k];
    grad_b += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t k = 0; k < weights.size(); ++k) grad_w[k] = grad_w[k] * inv_n + l2 * weights[k];
  grad_b *= inv_n;
}

LinearModel train_logistic(const std::vector<std::vector<double>>& x, const std::vector<std::uint8_t>& y,
                           const LogisticConfig& cfg) {
  check_inputs(x, y);
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  if (cfg.l2 < 0.0) throw std::invalid_argument("l2 must be non-negative");
  bool any_pos = false, any_neg = false;
  for (const auto label : y) (label ? any_pos : any_neg) = true;
  if (!any_pos || !any_neg) throw std::invalid_argument("training labels contain a single class");

  LinearModel model;
  model.weights.assign(x.front().size(), 0.0);
  std::vector<double> grad_w;
  double grad_b = 0.0;
  model.loss_trace.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
  for (int it = 0; it < cfg.iterations; ++it) {
    model.loss_trace.push_back(logistic_loss(x, y, model.weights, model.bias, cfg.l2));
    logistic_gradient(x, y, model.weights, model.bias, cfg.l2, grad_w, grad_b);
    for (std::size_t k = 0; k < model.weights.size(); ++k) {
      model.weights[k] -= cfg.learning_rate * grad_w[k];
    }
    model.bias -= cfg.learning_rate * grad_b;
  }
  model.final_loss = logistic_loss(x, y, model.weights, model.bias, cfg.l2);
  model.loss_trace.push_back(model.final_loss);
  model.iterations_run = cfg.iterations;
  return model;
}

}  // namespace depict
