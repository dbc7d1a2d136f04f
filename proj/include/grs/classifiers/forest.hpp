#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "grs/classifiers/tree.hpp"
#include "grs/random.hpp"

namespace grs {

struct ForestParams {
  int n_estimators = 50;
  int max_depth = 10;
  double max_features_frac = 1.0;
  // Off only in tests: every tree then sees the full training set.
  bool bootstrap = true;
};

// Bagged classification trees with per-split feature subsampling of
// ceil(max_features_frac * d) features; majority vote, ties to label 0.
class RandomForest {
 public:
  static RandomForest fit(const DesignMatrix& data, const ForestParams& params,
                          std::uint64_t seed) {
    RandomForest forest;
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.min_samples_split = 2;
    tp.criterion = Criterion::gini;
    tp.max_features = static_cast<std::size_t>(
        std::ceil(params.max_features_frac * static_cast<double>(d) - 1e-9));
    tp.max_features = std::clamp<std::size_t>(tp.max_features, 1, std::max<std::size_t>(d, 1));
    for (int t = 0; t < params.n_estimators; ++t) {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
      std::vector<std::size_t> rows(n);
      if (params.bootstrap) {
        for (auto& r : rows) r = static_cast<std::size_t>(uniform_below(rng, n));
      } else {
        rows = all_rows(n);
      }
      TreeBuilder builder(data.features, tp, &rng);
      forest.trees_.push_back(builder.grow_classifier(data.labels, std::move(rows)));
    }
    return forest;
  }

  // Number of trees voting 1.
  std::size_t votes_for_one(std::span<const double> x) const {
    std::size_t ones = 0;
    for (const auto& tree : trees_) ones += tree.evaluate(x) > 0.5 ? 1 : 0;
    return ones;
  }

  int predict_row(std::span<const double> x) const {
    return 2 * votes_for_one(x) > trees_.size() ? 1 : 0;
  }

  const std::vector<Tree>& trees() const { return trees_; }

 private:
  std::vector<Tree> trees_;
};

}  // namespace grs
