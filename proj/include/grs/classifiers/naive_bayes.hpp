#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "grs/matrix.hpp"

namespace grs {

// Gaussian naive Bayes. Every per-class variance is smoothed by adding
// 10^var_smoothing_exp times the largest per-feature variance of the whole
// training set.
class GaussianNB {
 public:
  static GaussianNB fit(const DesignMatrix& data, double var_smoothing_exp) {
    GaussianNB nb;
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    nb.mean_.assign(2, std::vector<double>(d, 0.0));
    nb.var_.assign(2, std::vector<double>(d, 0.0));
    double count[2] = {0.0, 0.0};
    for (std::size_t r = 0; r < n; ++r) {
      const auto c = static_cast<std::size_t>(data.labels[r]);
      count[c] += 1.0;
      auto row = data.features.row(r);
      for (std::size_t j = 0; j < d; ++j) nb.mean_[c][j] += row[j];
    }
    for (std::size_t c = 0; c < 2; ++c)
      for (auto& m : nb.mean_[c]) m /= count[c];
    for (std::size_t r = 0; r < n; ++r) {
      const auto c = static_cast<std::size_t>(data.labels[r]);
      auto row = data.features.row(r);
      for (std::size_t j = 0; j < d; ++j) {
        const double dev = row[j] - nb.mean_[c][j];
        nb.var_[c][j] += dev * dev;
      }
    }
    for (std::size_t c = 0; c < 2; ++c)
      for (auto& v : nb.var_[c]) v /= count[c];

    double max_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0;
      for (std::size_t r = 0; r < n; ++r) mean += data.features(r, j);
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const double dev = data.features(r, j) - mean;
        var += dev * dev;
      }
      max_var = std::max(max_var, var / static_cast<double>(n));
    }
    // All-constant features: fall back to unit scale so variances stay positive.
    if (max_var <= 0.0) max_var = 1.0;
    nb.epsilon_ = std::pow(10.0, var_smoothing_exp) * max_var;
    for (std::size_t c = 0; c < 2; ++c)
      for (auto& v : nb.var_[c]) v += nb.epsilon_;
    for (std::size_t c = 0; c < 2; ++c)
      nb.log_prior_[c] = std::log(count[c] / static_cast<double>(n));
    return nb;
  }

  // log P(class) + sum_j log N(x_j; mean, var)
  double joint_log_likelihood(std::span<const double> x, std::size_t c) const {
    double ll = log_prior_[c];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = var_[c][j];
      const double dev = x[j] - mean_[c][j];
      ll -= 0.5 * std::log(2.0 * std::numbers::pi * v) + dev * dev / (2.0 * v);
    }
    return ll;
  }

  int predict_row(std::span<const double> x) const {
    return joint_log_likelihood(x, 1) > joint_log_likelihood(x, 0) ? 1 : 0;
  }

  double epsilon() const { return epsilon_; }
  const std::vector<double>& means(std::size_t c) const { return mean_[c]; }
  const std::vector<double>& variances(std::size_t c) const { return var_[c]; }

 private:
  std::vector<std::vector<double>> mean_;
  std::vector<std::vector<double>> var_;
  double log_prior_[2] = {0.0, 0.0};
  double epsilon_ = 0.0;
};

}  // namespace grs
