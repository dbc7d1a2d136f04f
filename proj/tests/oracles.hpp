#pragma once

// Brute-force reference implementations and random fixtures for tests. These
// deliberately avoid the library's own helpers (sorting scans, presorted
// trees, cached statistics) so they can serve as independent oracles.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "grs/matrix.hpp"

namespace oracle {

using grs::DesignMatrix;
using grs::Matrix;

// Random binary-labelled design matrix. With `grid` set, feature values are
// drawn from a few integers so that ties in distances and thresholds occur.
inline DesignMatrix random_design(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                  bool grid = false) {
  std::uniform_real_distribution<double> real(-2.0, 2.0);
  std::uniform_int_distribution<int> small(0, 3);
  std::vector<double> data(n * d);
  for (auto& v : data) v = grid ? small(rng) : real(rng);
  DesignMatrix m;
  m.features = Matrix(n, d, std::move(data));
  for (std::size_t j = 0; j < d; ++j) m.feature_names.push_back("f" + std::to_string(j));
  std::bernoulli_distribution coin(0.5);
  m.labels.resize(n);
  for (auto& y : m.labels) y = coin(rng) ? 1 : 0;
  // both classes present
  if (n >= 2) {
    m.labels[0] = 0;
    m.labels[1] = 1;
  }
  return m;
}

inline double squared_distance(const Matrix& a, std::size_t r, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = a(r, j) - x[j];
    s += diff * diff;
  }
  return s;
}

// Full pairwise distances, stable ordering by (distance, row), explicit vote.
inline int knn(const DesignMatrix& train, std::span<const double> x, std::size_t k,
               bool distance_weighted) {
  const std::size_t n = train.rows();
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = squared_distance(train.features, i, x);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  k = std::min(k, n);
  double votes[2] = {0.0, 0.0};
  bool exact = false;
  for (std::size_t i = 0; i < k; ++i) exact = exact || dist[order[i]] == 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto r = order[i];
    if (!distance_weighted) votes[train.labels[r]] += 1.0;
    else if (exact) votes[train.labels[r]] += dist[r] == 0.0 ? 1.0 : 0.0;
    else votes[train.labels[r]] += 1.0 / std::sqrt(dist[r]);
  }
  return votes[1] > votes[0] ? 1 : 0;
}

struct NbPosterior {
  double log_joint[2];
  double log_posterior1;
  int label;
};

// Gaussian naive Bayes from first principles: per-class means and population
// variances, smoothing 10^exp times the largest overall feature variance.
inline NbPosterior naive_bayes(const DesignMatrix& train, std::span<const double> x,
                               double var_smoothing_exp) {
  const std::size_t n = train.rows(), d = train.cols();
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double s = 0.0, ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += train.features(r, j);
    const double mean = s / n;
    for (std::size_t r = 0; r < n; ++r) ss += (train.features(r, j) - mean) * (train.features(r, j) - mean);
    max_var = std::max(max_var, ss / n);
  }
  if (max_var <= 0.0) max_var = 1.0;
  const double eps = std::pow(10.0, var_smoothing_exp) * max_var;
  NbPosterior out{};
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r)
      if (train.labels[r] == c) rows.push_back(r);
    double lj = std::log(static_cast<double>(rows.size()) / n);
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0;
      for (auto r : rows) mean += train.features(r, j);
      mean /= rows.size();
      double var = 0.0;
      for (auto r : rows) var += (train.features(r, j) - mean) * (train.features(r, j) - mean);
      var = var / rows.size() + eps;
      const double pi = 3.14159265358979323846;
      lj += -0.5 * std::log(2.0 * pi * var) - (x[j] - mean) * (x[j] - mean) / (2.0 * var);
    }
    out.log_joint[c] = lj;
  }
  const double m = std::max(out.log_joint[0], out.log_joint[1]);
  const double lse = m + std::log(std::exp(out.log_joint[0] - m) + std::exp(out.log_joint[1] - m));
  out.log_posterior1 = out.log_joint[1] - lse;
  out.label = out.log_joint[1] > out.log_joint[0] ? 1 : 0;
  return out;
}

// Log-loss written out directly, for finite differences.
inline double lr_loss(const std::vector<double>& w, const DesignMatrix& data, double l2) {
  const std::size_t d = data.cols();
  double total = 0.0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    double z = w[d];
    for (std::size_t j = 0; j < d; ++j) z += w[j] * data.features(r, j);
    const double p = 1.0 / (1.0 + std::exp(-z));
    total += data.labels[r] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  double pen = 0.0;
  for (std::size_t j = 0; j < d; ++j) pen += w[j] * w[j];
  return total / data.rows() + 0.5 * l2 * pen;
}

inline std::vector<double> central_difference(const std::vector<double>& w,
                                              const DesignMatrix& data, double l2,
                                              double h = 1e-6) {
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto up = w, down = w;
    up[i] += h;
    down[i] -= h;
    g[i] = (lr_loss(up, data, l2) - lr_loss(down, data, l2)) / (2.0 * h);
  }
  return g;
}

inline double gini_counts(double n0, double n1) {
  const double n = n0 + n1;
  if (n == 0) return 0.0;
  return 1.0 - (n0 / n) * (n0 / n) - (n1 / n) * (n1 / n);
}

struct BruteSplit {
  double threshold;
  double gain;
};

// Every midpoint between distinct values, each scored by recounting all rows.
// Smallest threshold wins ties (within 1e-12).
inline std::optional<BruteSplit> best_gini_split(const std::vector<double>& x,
                                                 const std::vector<int>& y) {
  const double n = static_cast<double>(x.size());
  double n1 = 0;
  for (int v : y) n1 += v;
  const double parent = gini_counts(n - n1, n1);
  std::vector<double> values = x;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::optional<BruteSplit> best;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double t = values[i] + (values[i + 1] - values[i]) / 2.0;
    double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] <= t) (y[k] ? l1 : l0) += 1;
      else (y[k] ? r1 : r0) += 1;
    }
    const double gain = parent - ((l0 + l1) / n) * gini_counts(l0, l1) -
                        ((r0 + r1) / n) * gini_counts(r0, r1);
    if (gain > 1e-12 && (!best || gain > best->gain + 1e-12)) best = BruteSplit{t, gain};
  }
  return best;
}

}  // namespace oracle
