#pragma once

// Uniform train/predict contract over the seven classifier families.

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "grs/classifiers/boosting.hpp"
#include "grs/classifiers/forest.hpp"
#include "grs/classifiers/knn.hpp"
#include "grs/classifiers/logistic.hpp"
#include "grs/classifiers/naive_bayes.hpp"
#include "grs/classifiers/svm.hpp"
#include "grs/classifiers/tree.hpp"
#include "grs/error.hpp"
#include "grs/hyperparams.hpp"
#include "grs/matrix.hpp"

namespace grs {

struct ModelSpec {
  Family family = Family::DT;
  Config config;  // may be partial; train() fills schema defaults
};

struct TrainedModel {
  using State = std::variant<DecisionTree, RandomForest, GaussianNB, LogisticRegression,
                             KNearest, LinearSvm, GradientBoosting>;

  Family family = Family::DT;
  Config config;  // fully resolved
  std::uint64_t train_seed = 0;
  std::size_t n_features = 0;
  double fit_seconds = 0.0;
  State state;

  int predict_row(std::span<const double> x) const {
    return std::visit([&](const auto& m) { return m.predict_row(x); }, state);
  }
};

inline double accuracy(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size())
    throw ValueError("accuracy: predicted and actual lengths differ");
  if (predicted.empty()) throw ValueError("accuracy of empty label vectors");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == actual[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

inline TrainedModel train_model(const ModelSpec& spec, const DesignMatrix& data, std::uint64_t seed) {
  if (data.rows() == 0) throw ValueError("cannot train on an empty design matrix");
  if (data.labels.size() != data.rows())
    throw ValueError("label count does not match feature rows");
  std::size_t ones = 0;
  for (int y : data.labels) {
    if (y != 0 && y != 1) throw ValueError("labels must be 0 or 1");
    ones += static_cast<std::size_t>(y);
  }
  if (ones == 0 || ones == data.rows())
    throw SingleClassError("training data contains a single class");

  TrainedModel model;
  model.family = spec.family;
  model.config = resolve_config(spec.family, spec.config);
  model.train_seed = seed;
  model.n_features = data.cols();
  const auto& c = model.config;

  const auto start = std::chrono::steady_clock::now();
  switch (spec.family) {
    case Family::DT: {
      TreeParams p;
      p.max_depth = static_cast<int>(hp_int(c, "max_depth"));
      p.min_samples_split = static_cast<int>(hp_int(c, "min_samples_split"));
      p.criterion = parse_criterion(hp_string(c, "criterion"));
      model.state = DecisionTree::fit(data, p);
      break;
    }
    case Family::RF: {
      ForestParams p;
      p.n_estimators = static_cast<int>(hp_int(c, "n_estimators"));
      p.max_depth = static_cast<int>(hp_int(c, "max_depth"));
      p.max_features_frac = hp_double(c, "max_features_frac");
      model.state = RandomForest::fit(data, p, seed);
      break;
    }
    case Family::NB:
      model.state = GaussianNB::fit(data, hp_double(c, "var_smoothing_exp"));
      break;
    case Family::LR:
      model.state = LogisticRegression::fit(data, hp_double(c, "l2_strength"),
                                            hp_double(c, "learning_rate"),
                                            static_cast<int>(hp_int(c, "epochs")));
      break;
    case Family::KNN:
      model.state = KNearest::fit(
          data, static_cast<int>(hp_int(c, "n_neighbors")),
          hp_string(c, "weighting") == "distance" ? Weighting::distance : Weighting::uniform);
      break;
    case Family::SVM:
      model.state = LinearSvm::fit(data, hp_double(c, "c"), static_cast<int>(hp_int(c, "epochs")));
      break;
    case Family::GBT: {
      BoostingParams p;
      p.n_estimators = static_cast<int>(hp_int(c, "n_estimators"));
      p.learning_rate = hp_double(c, "learning_rate");
      p.max_depth = static_cast<int>(hp_int(c, "max_depth"));
      model.state = GradientBoosting::fit(data, p);
      break;
    }
  }
  model.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

inline Labels predict(const TrainedModel& model, const Matrix& features) {
  if (features.rows() > 0 && features.cols() != model.n_features)
    throw ValueError("predict: model expects " + std::to_string(model.n_features) +
                     " features, got " + std::to_string(features.cols()));
  Labels out(features.rows());
  std::visit(
      [&](const auto& m) {
        for (std::size_t r = 0; r < features.rows(); ++r) out[r] = m.predict_row(features.row(r));
      },
      model.state);
  return out;
}

struct ModelSummary {
  Family family = Family::DT;
  Config config;
  double training_accuracy = 0.0;
  double fit_seconds = 0.0;
};

inline ModelSummary summarize(const TrainedModel& model, const DesignMatrix& training) {
  return {model.family, model.config,
          accuracy(predict(model, training.features), training.labels), model.fit_seconds};
}

}  // namespace grs
