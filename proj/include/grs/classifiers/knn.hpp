#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "grs/matrix.hpp"

namespace grs {

enum class Weighting { uniform, distance };

// Euclidean k-nearest neighbours. Equal distances order by training row
// index; vote ties go to label 0. Under distance weighting, exact matches
// (distance 0) outvote everything else with one vote each.
class KNearest {
 public:
  static KNearest fit(const DesignMatrix& data, int n_neighbors, Weighting weighting) {
    KNearest model;
    model.train_ = data.features;
    model.labels_ = data.labels;
    model.k_ = std::max<std::size_t>(1, static_cast<std::size_t>(n_neighbors));
    model.weighting_ = weighting;
    return model;
  }

  int predict_row(std::span<const double> x) const {
    const std::size_t n = train_.rows();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = train_.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = row[j] - x[j];
        s += diff * diff;
      }
      dist[i] = {s, i};
    }
    const std::size_t k = std::min(k_, n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    double vote[2] = {0.0, 0.0};
    if (weighting_ == Weighting::distance && dist[0].first == 0.0) {
      for (std::size_t i = 0; i < k && dist[i].first == 0.0; ++i)
        vote[labels_[dist[i].second]] += 1.0;
    } else {
      for (std::size_t i = 0; i < k; ++i) {
        const double w = weighting_ == Weighting::uniform ? 1.0 : 1.0 / std::sqrt(dist[i].first);
        vote[labels_[dist[i].second]] += w;
      }
    }
    return vote[1] > vote[0] ? 1 : 0;
  }

 private:
  Matrix train_;
  Labels labels_;
  std::size_t k_ = 5;
  Weighting weighting_ = Weighting::uniform;
};

}  // namespace grs
