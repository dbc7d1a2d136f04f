#pragma once

// Data preparation: sparse-column pruning, numeric scaling with train-mean
// imputation, and one-hot encoding into a DesignMatrix. Plans are fit on the
// training part only and then applied unchanged to any table.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grs/error.hpp"
#include "grs/matrix.hpp"
#include "grs/tabular.hpp"

namespace grs {

enum class Scaling { minmax, zscore, none };

inline std::string_view to_string(Scaling s) {
  switch (s) {
    case Scaling::minmax: return "minmax";
    case Scaling::zscore: return "zscore";
    case Scaling::none: return "none";
  }
  return "?";
}

inline std::optional<Scaling> parse_scaling(std::string_view s) {
  if (s == "minmax") return Scaling::minmax;
  if (s == "zscore") return Scaling::zscore;
  if (s == "none") return Scaling::none;
  return std::nullopt;
}

inline constexpr std::string_view kMissingLevel = "__missing__";

struct NumericScale {
  std::string column;
  double mean = 0.0;  // imputation value
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;  // population
  bool operator==(const NumericScale&) const = default;
};

struct OneHotGroup {
  std::string column;
  std::vector<std::string> levels;  // train categories; "__missing__" is implicit last
  bool operator==(const OneHotGroup&) const = default;
};

// Surviving feature columns appear in `features` in source-schema order; each
// entry is either a numeric scale or a one-hot group.
struct PreprocessPlan {
  struct Feature {
    bool numeric = true;
    std::size_t index = 0;  // into `scales` or `one_hot`
    bool operator==(const Feature&) const = default;
  };

  std::vector<std::string> dropped_columns;
  Scaling scaling = Scaling::minmax;
  double missing_threshold = 0.6;
  std::string target;
  std::vector<NumericScale> scales;
  std::vector<OneHotGroup> one_hot;
  std::vector<Feature> features;

  std::vector<std::string> feature_names() const {
    std::vector<std::string> names;
    for (const auto& f : features) {
      if (f.numeric) {
        names.push_back(scales[f.index].column);
        continue;
      }
      const auto& g = one_hot[f.index];
      for (const auto& level : g.levels) names.push_back(g.column + "=" + level);
      names.push_back(g.column + "=" + std::string(kMissingLevel));
    }
    return names;
  }

  bool operator==(const PreprocessPlan&) const = default;
};

// Optional engineered column: ratio or difference of two numeric columns.
struct DerivedFeature {
  enum class Op { ratio, difference };
  std::string name;
  Op op = Op::ratio;
  std::string left;
  std::string right;
};

// Appends the derived column. Missing operands, or a zero ratio denominator,
// make the derived cell missing.
inline Table add_derived_column(const Table& table, const DerivedFeature& spec) {
  const auto l = table.column_index(spec.left);
  const auto r = table.column_index(spec.right);
  if (table.schema(l).kind != ColumnKind::numeric ||
      table.schema(r).kind != ColumnKind::numeric)
    throw SchemaError("derived feature '" + spec.name +
                      "' needs two numeric columns");
  if (table.find_column(spec.name))
    throw SchemaError("derived feature name '" + spec.name + "' already exists");
  std::vector<double> values(table.n_rows(), 0.0);
  std::vector<std::uint8_t> missing(table.n_rows(), 0);
  for (std::size_t i = 0; i < table.n_rows(); ++i) {
    if (table.is_missing(l, i) || table.is_missing(r, i)) {
      missing[i] = 1;
      continue;
    }
    const double a = table.numeric(l, i);
    const double b = table.numeric(r, i);
    if (spec.op == DerivedFeature::Op::difference) {
      values[i] = a - b;
    } else if (b == 0.0) {
      missing[i] = 1;
    } else {
      values[i] = a / b;
    }
  }
  return table.with_numeric_column(spec.name, std::move(values), std::move(missing));
}

// A feature column is dropped iff its missing fraction is strictly greater
// than `missing_threshold`.
inline PreprocessPlan fit_plan(const Table& train, double missing_threshold,
                               Scaling scaling) {
  if (train.n_rows() == 0) throw ValueError("cannot fit a plan on an empty table");
  if (!(missing_threshold >= 0.0 && missing_threshold <= 1.0))
    throw ValueError("missing_threshold must lie in [0, 1]");

  PreprocessPlan plan;
  plan.scaling = scaling;
  plan.missing_threshold = missing_threshold;
  plan.target = train.schema(train.target_index()).name;

  for (std::size_t c = 0; c < train.n_cols(); ++c) {
    const auto& s = train.schema(c);
    if (s.kind == ColumnKind::target) continue;
    if (train.missing_fraction(c) > missing_threshold) {
      plan.dropped_columns.push_back(s.name);
      continue;
    }
    if (s.kind == ColumnKind::categorical) {
      plan.features.push_back({false, plan.one_hot.size()});
      plan.one_hot.push_back({s.name, s.categories});
      continue;
    }
    NumericScale scale{s.name};
    double sum = 0.0;
    std::size_t n = 0;
    bool first = true;
    for (std::size_t r = 0; r < train.n_rows(); ++r) {
      if (train.is_missing(c, r)) continue;
      const double v = train.numeric(c, r);
      sum += v;
      ++n;
      if (first || v < scale.min) scale.min = v;
      if (first || v > scale.max) scale.max = v;
      first = false;
    }
    if (n > 0) {
      scale.mean = sum / static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t r = 0; r < train.n_rows(); ++r) {
        if (train.is_missing(c, r)) continue;
        const double d = train.numeric(c, r) - scale.mean;
        ss += d * d;
      }
      scale.std = std::sqrt(ss / static_cast<double>(n));
    }
    plan.features.push_back({true, plan.scales.size()});
    plan.scales.push_back(std::move(scale));
  }
  if (plan.features.empty())
    throw ValueError("degenerate preprocessing plan: every feature column was dropped");
  return plan;
}

inline double scale_value(const NumericScale& s, Scaling mode, double v) {
  switch (mode) {
    case Scaling::minmax: {
      const double range = s.max - s.min;
      return range > 0.0 ? (v - s.min) / range : 0.0;
    }
    case Scaling::zscore:
      return s.std > 0.0 ? (v - s.mean) / s.std : 0.0;
    case Scaling::none:
      return v;
  }
  return v;
}

inline DesignMatrix apply_plan(const PreprocessPlan& plan, const Table& table) {
  struct Source {
    std::size_t column;
    std::vector<std::size_t> level_map;  // table level -> group slot
  };
  std::vector<Source> sources;
  std::size_t width = 0;
  for (const auto& f : plan.features) {
    const auto& name = f.numeric ? plan.scales[f.index].column : plan.one_hot[f.index].column;
    const auto c = table.find_column(name);
    if (!c) throw SchemaError("table lacks plan column '" + name + "'");
    const auto& s = table.schema(*c);
    if ((s.kind == ColumnKind::numeric) != f.numeric || s.kind == ColumnKind::target)
      throw SchemaError("column '" + name + "' changed kind since the plan was fit");
    Source src{*c, {}};
    if (f.numeric) {
      ++width;
    } else {
      const auto& g = plan.one_hot[f.index];
      const std::size_t missing_slot = g.levels.size();
      for (const auto& level : s.categories) {
        auto it = std::lower_bound(g.levels.begin(), g.levels.end(), level);
        src.level_map.push_back(it != g.levels.end() && *it == level
                                    ? static_cast<std::size_t>(it - g.levels.begin())
                                    : missing_slot);
      }
      width += g.levels.size() + 1;
    }
    sources.push_back(std::move(src));
  }

  const auto target = table.find_column(plan.target);
  if (!target || table.schema(*target).kind != ColumnKind::target)
    throw SchemaError("table lacks target column '" + plan.target + "'");

  DesignMatrix out;
  out.features = Matrix(table.n_rows(), width, 0.0);
  out.feature_names = plan.feature_names();
  out.labels.resize(table.n_rows());
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    out.labels[r] = table.label(r);
    auto row = out.features.row(r);
    std::size_t offset = 0;
    for (std::size_t i = 0; i < plan.features.size(); ++i) {
      const auto& f = plan.features[i];
      const auto& src = sources[i];
      if (f.numeric) {
        const auto& s = plan.scales[f.index];
        const double v = table.is_missing(src.column, r) ? s.mean
                                                         : table.numeric(src.column, r);
        row[offset++] = scale_value(s, plan.scaling, v);
        continue;
      }
      const auto& g = plan.one_hot[f.index];
      const std::size_t slot =
          table.is_missing(src.column, r)
              ? g.levels.size()
              : src.level_map[static_cast<std::size_t>(table.code(src.column, r))];
      row[offset + slot] = 1.0;
      offset += g.levels.size() + 1;
    }
  }
  return out;
}

// Fits on split.train and applies to both parts.
inline std::pair<DesignMatrix, DesignMatrix> preprocess_split(
    const SplitPair& split, double missing_threshold, Scaling scaling,
    PreprocessPlan* plan_out = nullptr) {
  auto plan = fit_plan(split.train, missing_threshold, scaling);
  auto result = std::make_pair(apply_plan(plan, split.train), apply_plan(plan, split.test));
  if (plan_out) *plan_out = std::move(plan);
  return result;
}

}  // namespace grs
