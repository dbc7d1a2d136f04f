#pragma once

// CART building blocks: impurity measures, exhaustive threshold search, a
// greedy classification tree (also the base learner of the random forest) and
// a least-squares regression tree (base learner of gradient boosting).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grs/error.hpp"
#include "grs/matrix.hpp"
#include "grs/random.hpp"

namespace grs {

enum class Criterion { gini, entropy };

inline Criterion parse_criterion(std::string_view s) {
  if (s == "gini") return Criterion::gini;
  if (s == "entropy") return Criterion::entropy;
  throw ValueError("unknown split criterion '" + std::string(s) + "'");
}

// Gains closer than this are treated as equal; a split must beat zero by it.
inline constexpr double kGainTieEps = 1e-12;

namespace detail {

inline double impurity_from_counts(double n0, double n1, Criterion criterion) {
  const double n = n0 + n1;
  if (n <= 0.0) return 0.0;
  const double p0 = n0 / n;
  const double p1 = n1 / n;
  if (criterion == Criterion::gini) return 1.0 - p0 * p0 - p1 * p1;
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

// Threshold strictly between a < b; rows with x <= threshold go left.
inline double midpoint(double a, double b) {
  const double m = a + (b - a) / 2.0;
  return m >= b ? a : m;
}

}  // namespace detail

inline double gini_impurity(std::span<const int> labels) {
  if (labels.empty()) throw ValueError("gini impurity of an empty label vector");
  const auto n1 = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  return detail::impurity_from_counts(static_cast<double>(labels.size()) - n1, n1,
                                      Criterion::gini);
}

inline double entropy_impurity(std::span<const int> labels) {
  if (labels.empty()) throw ValueError("entropy of an empty label vector");
  const auto n1 = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  return detail::impurity_from_counts(static_cast<double>(labels.size()) - n1, n1,
                                      Criterion::entropy);
}

struct Split {
  double threshold = 0.0;
  double gain = 0.0;
};

namespace detail {

// Scans n rows already ordered by ascending feature value; `value(i)` and
// `label(i)` read the i-th row of that order. Returns the best
// impurity-decreasing threshold; the smallest threshold wins ties.
template <typename Value, typename Label>
std::optional<Split> scan_classification(std::size_t n, Value value, Label label,
                                         Criterion criterion) {
  if (n < 2) return std::nullopt;
  double total1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) total1 += label(i);
  const double total = static_cast<double>(n);
  const double parent = impurity_from_counts(total - total1, total1, criterion);

  std::optional<Split> best;
  double left1 = 0.0;
  double current = value(0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    left1 += label(i);
    const double next = value(i + 1);
    if (!(current < next)) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = total - nl;
    const double right1 = total1 - left1;
    const double gain = parent -
                        (nl / total) * impurity_from_counts(nl - left1, left1, criterion) -
                        (nr / total) * impurity_from_counts(nr - right1, right1, criterion);
    if (gain > kGainTieEps && (!best || gain > best->gain + kGainTieEps))
      best = Split{midpoint(current, next), gain};
    current = next;
  }
  return best;
}

// Least-squares version: gain is the reduction in the sum of squared errors.
template <typename Value, typename Target>
std::optional<Split> scan_regression(std::size_t n, Value value, Target target) {
  if (n < 2) return std::nullopt;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += target(i);
  const double count = static_cast<double>(n);
  const double parent = total * total / count;

  std::optional<Split> best;
  double left = 0.0;
  double current = value(0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    left += target(i);
    const double next = value(i + 1);
    if (!(current < next)) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = count - nl;
    const double right = total - left;
    const double gain = left * left / nl + right * right / nr - parent;
    if (gain > kGainTieEps && (!best || gain > best->gain + kGainTieEps))
      best = Split{midpoint(current, next), gain};
    current = next;
  }
  return best;
}

}  // namespace detail

// Candidate thresholds are midpoints between consecutive distinct sorted
// values. Returns nullopt when no threshold has positive gain.
inline std::optional<Split> best_split(std::span<const double> feature_column,
                                       std::span<const int> labels,
                                       Criterion criterion = Criterion::gini) {
  if (feature_column.size() != labels.size())
    throw ValueError("best_split: feature and label lengths differ");
  std::vector<std::pair<double, int>> pairs(feature_column.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = {feature_column[i], labels[i]};
  std::sort(pairs.begin(), pairs.end());
  return detail::scan_classification(
      pairs.size(), [&](std::size_t i) { return pairs[i].first; },
      [&](std::size_t i) { return pairs[i].second; }, criterion);
}

// Flat binary tree. Internal nodes route x[feature] <= threshold to `left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // class label (classification) or leaf output
};

class Tree {
 public:
  double evaluate(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
      const auto& node = nodes_[i];
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold
                                       ? node.left
                                       : node.right);
    }
    return nodes_[i].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const { return depth_; }

 private:
  friend class TreeBuilder;
  std::vector<TreeNode> nodes_;
  std::size_t depth_ = 0;
};

struct TreeParams {
  int max_depth = 10;
  int min_samples_split = 2;
  Criterion criterion = Criterion::gini;
  // Features examined per split; 0 examines all, otherwise a seeded subset.
  std::size_t max_features = 0;
};

// Grows classification trees (targets are 0/1 labels, leaves hold the
// majority label with ties to 0) and regression trees (leaves hold the mean
// target). Each node keeps its rows presorted by every feature; children
// inherit the order by stable partitioning, so no node sorts.
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, TreeParams params, Rng* rng = nullptr)
      : x_(x), params_(params), rng_(rng) {}

  Tree grow_classifier(std::span<const int> labels, std::vector<std::size_t> rows) {
    labels_ = labels;
    targets_ = {};
    return grow(std::move(rows));
  }

  Tree grow_regressor(std::span<const double> targets, std::vector<std::size_t> rows) {
    labels_ = {};
    targets_ = targets;
    return grow(std::move(rows));
  }

 private:
  using Sorted = std::vector<std::vector<std::size_t>>;  // per feature

  bool regression() const { return !targets_.empty(); }

  Tree grow(std::vector<std::size_t> rows) {
    tree_ = Tree{};
    const std::size_t d = x_.cols();
    all_features_.resize(d);
    for (std::size_t f = 0; f < d; ++f) all_features_[f] = f;
    if (rows.empty()) {
      tree_.nodes_.push_back({});
      return std::move(tree_);
    }
    goes_left_.assign(x_.rows(), 0);
    Sorted sorted(std::max<std::size_t>(d, 1));
    std::sort(rows.begin(), rows.end());
    for (std::size_t f = 0; f < d; ++f) {
      sorted[f] = rows;
      std::stable_sort(sorted[f].begin(), sorted[f].end(),
                       [&](std::size_t a, std::size_t b) { return x_(a, f) < x_(b, f); });
    }
    if (d == 0) sorted[0] = std::move(rows);
    build(sorted, 0);
    return std::move(tree_);
  }

  double leaf_value(std::span<const std::size_t> rows, bool& pure) const {
    if (regression()) {
      double sum = 0.0;
      for (auto r : rows) sum += targets_[r];
      pure = std::all_of(rows.begin(), rows.end(),
                         [&](std::size_t r) { return targets_[r] == targets_[rows[0]]; });
      return sum / static_cast<double>(rows.size());
    }
    std::size_t ones = 0;
    for (auto r : rows) ones += static_cast<std::size_t>(labels_[r]);
    pure = ones == 0 || ones == rows.size();
    return 2 * ones > rows.size() ? 1.0 : 0.0;
  }

  std::span<const std::size_t> candidate_features() {
    const std::size_t d = all_features_.size();
    if (params_.max_features == 0 || params_.max_features >= d || rng_ == nullptr)
      return all_features_;
    // Partial Fisher-Yates, then ascending order so ties resolve to the
    // lowest feature index.
    scratch_features_ = all_features_;
    for (std::size_t i = 0; i < params_.max_features; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_below(*rng_, d - i));
      std::swap(scratch_features_[i], scratch_features_[j]);
    }
    scratch_features_.resize(params_.max_features);
    std::sort(scratch_features_.begin(), scratch_features_.end());
    return scratch_features_;
  }

  std::int32_t build(Sorted& sorted, std::size_t depth) {
    const auto id = static_cast<std::int32_t>(tree_.nodes_.size());
    tree_.nodes_.push_back({});
    tree_.depth_ = std::max(tree_.depth_, depth);
    const auto& rows = sorted[0];
    bool pure = false;
    tree_.nodes_[static_cast<std::size_t>(id)].value = leaf_value(rows, pure);
    if (pure || all_features_.empty() || depth >= static_cast<std::size_t>(params_.max_depth) ||
        rows.size() < static_cast<std::size_t>(params_.min_samples_split))
      return id;

    const std::size_t n = rows.size();
    int best_feature = -1;
    Split best{};
    for (auto f : candidate_features()) {
      const auto& order = sorted[f];
      auto value = [&](std::size_t i) { return x_(order[i], f); };
      const auto s =
          regression()
              ? detail::scan_regression(n, value, [&](std::size_t i) { return targets_[order[i]]; })
              : detail::scan_classification(
                    n, value, [&](std::size_t i) { return static_cast<double>(labels_[order[i]]); },
                    params_.criterion);
      if (s && (best_feature < 0 || s->gain > best.gain + kGainTieEps)) {
        best = *s;
        best_feature = static_cast<int>(f);
      }
    }
    if (best_feature < 0) return id;

    const auto bf = static_cast<std::size_t>(best_feature);
    for (auto r : rows) goes_left_[r] = x_(r, bf) <= best.threshold ? 1 : 0;
    Sorted left(sorted.size()), right(sorted.size());
    for (std::size_t f = 0; f < sorted.size(); ++f) {
      for (auto r : sorted[f]) (goes_left_[r] ? left[f] : right[f]).push_back(r);
      sorted[f].clear();
      sorted[f].shrink_to_fit();
    }

    const auto l = build(left, depth + 1);
    left.clear();
    const auto r = build(right, depth + 1);
    auto& node = tree_.nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  const Matrix& x_;
  TreeParams params_;
  Rng* rng_;
  std::span<const int> labels_;
  std::span<const double> targets_;
  Tree tree_;
  std::vector<std::size_t> all_features_;
  std::vector<std::size_t> scratch_features_;
  std::vector<std::uint8_t> goes_left_;
};

inline std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

class DecisionTree {
 public:
  static DecisionTree fit(const DesignMatrix& data, const TreeParams& params) {
    DecisionTree model;
    TreeBuilder builder(data.features, params);
    model.tree_ = builder.grow_classifier(data.labels, all_rows(data.rows()));
    return model;
  }

  int predict_row(std::span<const double> x) const {
    return tree_.evaluate(x) > 0.5 ? 1 : 0;
  }

  const Tree& tree() const { return tree_; }

 private:
  Tree tree_;
};

}  // namespace grs
