#pragma once

#include <span>
#include <vector>

#include "grs/classifiers/logistic.hpp"
#include "grs/matrix.hpp"

namespace grs {

// Linear soft-margin SVM trained by full-batch subgradient descent on
//   (1 / 2) |w|^2 + c * sum_i max(0, 1 - y_i (w.x_i + b)),  y in {-1, +1},
// scaled by 1 / (c n) so that lambda = 1 / (c n) multiplies the penalty and
// the hinge term is a mean. Step size at epoch t is 1 / (1 + lambda * t). The
// bias is unregularized.
class LinearSvm {
 public:
  static LinearSvm fit(const DesignMatrix& data, double c, int epochs) {
    LinearSvm model;
    const std::size_t d = data.cols();
    const double inv_n = 1.0 / static_cast<double>(data.rows());
    const double lambda = inv_n / c;
    model.weights_.assign(d + 1, 0.0);
    std::vector<double> grad(d + 1);
    for (int t = 1; t <= epochs; ++t) {
      for (std::size_t j = 0; j < d; ++j) grad[j] = lambda * model.weights_[j];
      grad[d] = 0.0;
      for (std::size_t r = 0; r < data.rows(); ++r) {
        auto x = data.features.row(r);
        const double y = data.labels[r] == 1 ? 1.0 : -1.0;
        if (y * linear_score(model.weights_, x) < 1.0) {
          for (std::size_t j = 0; j < d; ++j) grad[j] -= inv_n * y * x[j];
          grad[d] -= inv_n * y;
        }
      }
      const double step = 1.0 / (1.0 + lambda * static_cast<double>(t));
      for (std::size_t j = 0; j <= d; ++j) model.weights_[j] -= step * grad[j];
    }
    return model;
  }

  double decision(std::span<const double> x) const { return linear_score(weights_, x); }
  int predict_row(std::span<const double> x) const { return decision(x) > 0.0 ? 1 : 0; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

}  // namespace grs
