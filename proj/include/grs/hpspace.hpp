#pragma once

// Declarative hyper-parameter search spaces: exhaustive grids built from
// per-parameter steps, and seeded uniform random sampling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "grs/error.hpp"
#include "grs/hyperparams.hpp"
#include "grs/random.hpp"

namespace grs {

// Tolerance for deciding that (hi - lo) is a whole number of steps.
inline constexpr double kGridStepTolerance = 1e-9;

struct ParamSpec {
  std::string name;
  HpKind kind = HpKind::continuous;
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> step;  // grid only; see default_step()
  std::vector<std::string> choices;

  // 5 for any parameter named n_estimators, 1 for other integers, 0.5 for
  // continuous parameters.
  static double default_step(const std::string& name, HpKind kind) {
    if (name == "n_estimators") return 5.0;
    return kind == HpKind::integer ? 1.0 : 0.5;
  }

  double grid_step() const { return step.value_or(default_step(name, kind)); }

  static ParamSpec continuous(std::string name, double lo, double hi,
                              std::optional<double> step = std::nullopt) {
    return {std::move(name), HpKind::continuous, lo, hi, step, {}};
  }
  static ParamSpec integer(std::string name, std::int64_t lo, std::int64_t hi,
                           std::optional<double> step = std::nullopt) {
    return {std::move(name), HpKind::integer, static_cast<double>(lo),
            static_cast<double>(hi), step, {}};
  }
  static ParamSpec categorical(std::string name, std::vector<std::string> choices) {
    return {std::move(name), HpKind::categorical, 0.0, 0.0, std::nullopt, std::move(choices)};
  }
};

struct SearchSpace {
  Family family = Family::DT;
  std::vector<ParamSpec> params;
};

// Checks the ParamSpec invariants; when `family` is given, also checks the
// parameter against that family's schema (name, kind, bounds, choices).
inline void validate_param(const ParamSpec& p, std::optional<Family> family = std::nullopt) {
  const std::string where = "parameter '" + p.name + "'";
  if (p.name.empty()) throw ValueError("parameter name must not be empty");
  if (p.kind == HpKind::categorical) {
    if (p.choices.empty()) throw ValueError(where + " has no choices");
    std::set<std::string> seen(p.choices.begin(), p.choices.end());
    if (seen.size() != p.choices.size()) throw ValueError(where + " has duplicate choices");
  } else {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || p.lo > p.hi)
      throw ValueError(where + " needs finite bounds with lo <= hi");
    const double step = p.grid_step();
    if (!(step > 0.0) || !std::isfinite(step)) throw ValueError(where + " needs a positive step");
    if (p.kind == HpKind::integer &&
        (std::nearbyint(p.lo) != p.lo || std::nearbyint(p.hi) != p.hi ||
         std::nearbyint(step) != step))
      throw ValueError(where + " is integer-valued; bounds and step must be integral");
  }
  if (!family) return;
  const auto* def = find_hp(*family, p.name);
  if (!def)
    throw ValueError(where + " is not a hyper-parameter of " + std::string(to_string(*family)));
  if (def->kind != p.kind)
    throw ValueError(where + " must be " + std::string(to_string(def->kind)));
  if (p.kind == HpKind::categorical) {
    for (const auto& c : p.choices)
      if (std::find(def->choices.begin(), def->choices.end(), c) == def->choices.end())
        throw ValueError(where + " has unsupported choice '" + c + "'");
  } else if (p.lo < def->lo || p.hi > def->hi) {
    throw ValueError(where + " bounds exceed the schema range [" + format_hp(def->lo) + ", " +
                     format_hp(def->hi) + "]");
  }
}

inline void validate_space(const SearchSpace& space) {
  std::set<std::string> names;
  for (const auto& p : space.params) {
    if (!names.insert(p.name).second)
      throw ValueError("duplicate parameter '" + p.name + "' in search space");
    validate_param(p, space.family);
  }
}

// Number of grid points of one parameter.
inline std::size_t grid_count(const ParamSpec& p) {
  if (p.kind == HpKind::categorical) return p.choices.size();
  const double q = (p.hi - p.lo) / p.grid_step();
  const double r = std::nearbyint(q);
  const double whole = std::abs(q - r) < kGridStepTolerance ? r : std::floor(q);
  return static_cast<std::size_t>(whole) + 1;
}

// lo, lo + step, ... up to hi (inclusive when hi is a whole number of steps
// away, within tolerance; the last point is then exactly hi).
inline std::vector<HpValue> grid_values(const ParamSpec& p) {
  std::vector<HpValue> values;
  if (p.kind == HpKind::categorical) {
    for (const auto& c : p.choices) values.emplace_back(c);
    return values;
  }
  const std::size_t n = grid_count(p);
  const double step = p.grid_step();
  const double q = (p.hi - p.lo) / step;
  const bool hits_hi = std::abs(q - std::nearbyint(q)) < kGridStepTolerance;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = p.lo + static_cast<double>(i) * step;
    if (i + 1 == n && hits_hi) v = p.hi;
    v = std::min(v, p.hi);
    if (p.kind == HpKind::integer)
      values.emplace_back(static_cast<std::int64_t>(std::nearbyint(v)));
    else
      values.emplace_back(v);
  }
  return values;
}

// Product of per-parameter counts; 1 for an empty space. Saturates at
// SIZE_MAX instead of overflowing.
inline std::size_t grid_size(const SearchSpace& space) {
  std::size_t total = 1;
  for (const auto& p : space.params) {
    const std::size_t n = grid_count(p);
    if (n != 0 && total > std::numeric_limits<std::size_t>::max() / n)
      return std::numeric_limits<std::size_t>::max();
    total *= n;
  }
  return total;
}

// Cartesian product in lexicographic order: the first parameter varies
// slowest, values in their grid order.
inline std::vector<Config> grid_enumerate(const SearchSpace& space) {
  std::vector<std::vector<HpValue>> axes;
  for (const auto& p : space.params) {
    axes.push_back(grid_values(p));
    if (axes.back().empty()) throw ValueError("parameter '" + p.name + "' has an empty grid");
  }
  std::vector<Config> out;
  out.reserve(grid_size(space));
  std::vector<std::size_t> odometer(axes.size(), 0);
  while (true) {
    Config config;
    for (std::size_t i = 0; i < axes.size(); ++i)
      config[space.params[i].name] = axes[i][odometer[i]];
    out.push_back(std::move(config));
    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++odometer[i] < axes[i].size()) break;
      odometer[i] = 0;
      if (i == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

// `budget` independent draws (with replacement). Continuous parameters are
// uniform on [lo, hi], integers uniform on {lo..hi}, categoricals uniform over
// choices; within a draw parameters are sampled in declaration order.
inline std::vector<Config> random_sample(const SearchSpace& space, std::size_t budget,
                                         std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0xA11CE));
  std::vector<Config> out;
  out.reserve(budget);
  for (std::size_t b = 0; b < budget; ++b) {
    Config config;
    for (const auto& p : space.params) {
      switch (p.kind) {
        case HpKind::continuous:
          config[p.name] = uniform_real(rng, p.lo, p.hi);
          break;
        case HpKind::integer:
          config[p.name] = uniform_int(rng, static_cast<std::int64_t>(p.lo),
                                       static_cast<std::int64_t>(p.hi));
          break;
        case HpKind::categorical:
          config[p.name] = p.choices[static_cast<std::size_t>(uniform_below(rng, p.choices.size()))];
          break;
      }
    }
    out.push_back(std::move(config));
  }
  return out;
}

inline constexpr std::size_t kDefaultRsBudgetCap = 200;

// Random-search budget when none is configured: the grid size, capped.
inline std::size_t default_rs_budget(const SearchSpace& space) {
  return std::min(grid_size(space), kDefaultRsBudgetCap);
}

}  // namespace grs
