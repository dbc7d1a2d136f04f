#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "grs/classifiers/logistic.hpp"
#include "grs/classifiers/tree.hpp"

namespace grs {

struct BoostingParams {
  int n_estimators = 50;
  double learning_rate = 0.3;
  int max_depth = 3;
};

// First-order gradient boosting on the logistic loss. Starts from the log-odds
// of the training prior; each stage fits a least-squares tree to the residuals
// y - p and adds learning_rate times its leaf means.
class GradientBoosting {
 public:
  static GradientBoosting fit(const DesignMatrix& data, const BoostingParams& params) {
    GradientBoosting model;
    const std::size_t n = data.rows();
    double positives = 0.0;
    for (int y : data.labels) positives += y;
    const double p0 = positives / static_cast<double>(n);
    model.init_ = std::log(p0 / (1.0 - p0));
    model.learning_rate_ = params.learning_rate;

    std::vector<double> score(n, model.init_);
    std::vector<double> residual(n);
    model.stage_loss_.push_back(mean_logloss(score, data.labels));
    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.min_samples_split = 2;
    for (int m = 0; m < params.n_estimators; ++m) {
      for (std::size_t i = 0; i < n; ++i)
        residual[i] = static_cast<double>(data.labels[i]) - sigmoid(score[i]);
      TreeBuilder builder(data.features, tp);
      model.trees_.push_back(builder.grow_regressor(residual, all_rows(n)));
      const auto& tree = model.trees_.back();
      for (std::size_t i = 0; i < n; ++i)
        score[i] += params.learning_rate * tree.evaluate(data.features.row(i));
      model.stage_loss_.push_back(mean_logloss(score, data.labels));
    }
    return model;
  }

  double raw_score(std::span<const double> x) const {
    double s = init_;
    for (const auto& tree : trees_) s += learning_rate_ * tree.evaluate(x);
    return s;
  }

  // 1 iff p > 0.5
  int predict_row(std::span<const double> x) const { return raw_score(x) > 0.0 ? 1 : 0; }

  // Training log-loss before any tree (index 0) and after each stage.
  const std::vector<double>& stage_losses() const { return stage_loss_; }
  const std::vector<Tree>& trees() const { return trees_; }

  static double mean_logloss(std::span<const double> score, std::span<const int> labels) {
    double loss = 0.0;
    for (std::size_t i = 0; i < score.size(); ++i) {
      const double z = score[i];
      const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
      loss += softplus - static_cast<double>(labels[i]) * z;
    }
    return loss / static_cast<double>(score.size());
  }

 private:
  double init_ = 0.0;
  double learning_rate_ = 0.3;
  std::vector<Tree> trees_;
  std::vector<double> stage_loss_;
};

}  // namespace grs
