#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "grs/error.hpp"
#include "grs/matrix.hpp"

namespace grs {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Weights hold one coefficient per feature followed by the bias.
inline double linear_score(std::span<const double> weights, std::span<const double> x) {
  double z = weights[x.size()];
  for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * x[j];
  return z;
}

namespace detail {
inline void check_weights(std::span<const double> weights, const DesignMatrix& data) {
  if (weights.size() != data.cols() + 1)
    throw ValueError("weight vector length must be feature count + 1");
}
}  // namespace detail

// Mean log-loss plus (l2_strength / 2) * |w|^2 over the non-bias weights.
inline double logloss(std::span<const double> weights, const DesignMatrix& data,
                      double l2_strength) {
  detail::check_weights(weights, data);
  double loss = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const double z = linear_score(weights, data.features.row(r));
    // log(1 + e^z) - y z, evaluated stably
    const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss += softplus - static_cast<double>(data.labels[r]) * z;
  }
  loss /= static_cast<double>(data.rows());
  double penalty = 0.0;
  for (std::size_t j = 0; j < data.cols(); ++j) penalty += weights[j] * weights[j];
  return loss + 0.5 * l2_strength * penalty;
}

// Gradient of `logloss`; the bias entry is unregularized.
inline std::vector<double> logloss_gradient(std::span<const double> weights,
                                            const DesignMatrix& data, double l2_strength) {
  detail::check_weights(weights, data);
  const std::size_t d = data.cols();
  std::vector<double> grad(d + 1, 0.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    auto x = data.features.row(r);
    const double err = sigmoid(linear_score(weights, x)) - static_cast<double>(data.labels[r]);
    for (std::size_t j = 0; j < d; ++j) grad[j] += err * x[j];
    grad[d] += err;
  }
  const double inv_n = 1.0 / static_cast<double>(data.rows());
  for (auto& g : grad) g *= inv_n;
  for (std::size_t j = 0; j < d; ++j) grad[j] += l2_strength * weights[j];
  return grad;
}

// Batch gradient descent from zero weights.
class LogisticRegression {
 public:
  static LogisticRegression fit(const DesignMatrix& data, double l2_strength,
                                double learning_rate, int epochs) {
    LogisticRegression model;
    model.weights_.assign(data.cols() + 1, 0.0);
    for (int e = 0; e < epochs; ++e) {
      const auto grad = logloss_gradient(model.weights_, data, l2_strength);
      for (std::size_t j = 0; j < grad.size(); ++j) model.weights_[j] -= learning_rate * grad[j];
    }
    return model;
  }

  static LogisticRegression from_weights(std::vector<double> weights) {
    LogisticRegression model;
    model.weights_ = std::move(weights);
    return model;
  }

  double probability(std::span<const double> x) const {
    return sigmoid(linear_score(weights_, x));
  }

  // 1 iff p > 0.5
  int predict_row(std::span<const double> x) const { return probability(x) > 0.5 ? 1 : 0; }

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

}  // namespace grs
