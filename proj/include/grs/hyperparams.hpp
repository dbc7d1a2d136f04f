#pragma once

// Classifier families, hyper-parameter values, and the built-in HP schema of
// each family (names, kinds, bounds, defaults).

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grs/error.hpp"

namespace grs {

enum class Family { DT, RF, NB, LR, KNN, SVM, GBT };

inline constexpr std::array<Family, 7> kAllFamilies{
    Family::DT, Family::RF, Family::NB, Family::LR,
    Family::KNN, Family::SVM, Family::GBT};

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::DT: return "DT";
    case Family::RF: return "RF";
    case Family::NB: return "NB";
    case Family::LR: return "LR";
    case Family::KNN: return "KNN";
    case Family::SVM: return "SVM";
    case Family::GBT: return "GBT";
  }
  return "?";
}

// Accepts "XGB" as an alias of GBT.
inline std::optional<Family> parse_family(std::string_view name) {
  for (auto f : kAllFamilies)
    if (to_string(f) == name) return f;
  if (name == "XGB") return Family::GBT;
  return std::nullopt;
}

using HpValue = std::variant<std::int64_t, double, std::string>;
using Config = std::map<std::string, HpValue>;

inline std::string format_hp(const HpValue& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto* s = std::get_if<std::string>(&v)) return *s;
  std::ostringstream out;
  out.precision(17);
  out << std::get<double>(v);
  return out.str();
}

inline std::string format_config(const Config& config) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : config) {
    if (!first) out += ", ";
    first = false;
    out += name + ": " + format_hp(value);
  }
  return out + "}";
}

enum class HpKind { continuous, integer, categorical };

inline std::string_view to_string(HpKind k) {
  switch (k) {
    case HpKind::continuous: return "continuous";
    case HpKind::integer: return "integer";
    case HpKind::categorical: return "categorical";
  }
  return "?";
}

struct HpDef {
  std::string name;
  HpKind kind = HpKind::continuous;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::string> choices;
  HpValue default_value;
};

inline const std::vector<HpDef>& hp_schema(Family family) {
  using K = HpKind;
  static const std::vector<HpDef> dt{
      {"max_depth", K::integer, 1, 20, {}, std::int64_t{10}},
      {"min_samples_split", K::integer, 2, 10, {}, std::int64_t{2}},
      {"criterion", K::categorical, 0, 0, {"gini", "entropy"}, std::string("gini")}};
  static const std::vector<HpDef> rf{
      {"n_estimators", K::integer, 5, 100, {}, std::int64_t{50}},
      {"max_depth", K::integer, 1, 20, {}, std::int64_t{10}},
      {"max_features_frac", K::continuous, 0.1, 1.0, {}, 1.0}};
  static const std::vector<HpDef> nb{
      {"var_smoothing_exp", K::continuous, -12.0, -6.0, {}, -9.0}};
  static const std::vector<HpDef> lr{
      {"l2_strength", K::continuous, 0.0, 2.0, {}, 0.0},
      {"learning_rate", K::continuous, 0.01, 1.0, {}, 0.1},
      {"epochs", K::integer, 10, 200, {}, std::int64_t{100}}};
  static const std::vector<HpDef> knn{
      {"n_neighbors", K::integer, 1, 25, {}, std::int64_t{5}},
      {"weighting", K::categorical, 0, 0, {"uniform", "distance"}, std::string("uniform")}};
  static const std::vector<HpDef> svm{
      {"c", K::continuous, 0.5, 4.0, {}, 1.0},
      {"epochs", K::integer, 10, 200, {}, std::int64_t{100}}};
  static const std::vector<HpDef> gbt{
      {"n_estimators", K::integer, 5, 100, {}, std::int64_t{50}},
      {"learning_rate", K::continuous, 0.05, 1.0, {}, 0.3},
      {"max_depth", K::integer, 1, 6, {}, std::int64_t{3}}};
  switch (family) {
    case Family::DT: return dt;
    case Family::RF: return rf;
    case Family::NB: return nb;
    case Family::LR: return lr;
    case Family::KNN: return knn;
    case Family::SVM: return svm;
    case Family::GBT: return gbt;
  }
  throw ValueError("unknown classifier family");
}

inline const HpDef* find_hp(Family family, std::string_view name) {
  for (const auto& def : hp_schema(family))
    if (def.name == name) return &def;
  return nullptr;
}

inline Config default_config(Family family) {
  Config config;
  for (const auto& def : hp_schema(family)) config[def.name] = def.default_value;
  return config;
}

// Coerces `value` to the kind of `def` and checks bounds. Integral doubles are
// accepted for integer HPs and integers for continuous ones.
inline HpValue normalize_hp(const HpDef& def, const HpValue& value) {
  auto bounds_error = [&](const std::string& shown) {
    return ValueError("hyper-parameter " + def.name + "=" + shown +
                      " outside its bounds");
  };
  switch (def.kind) {
    case HpKind::categorical: {
      const auto* s = std::get_if<std::string>(&value);
      if (!s) throw ValueError("hyper-parameter " + def.name + " expects a choice string");
      for (const auto& c : def.choices)
        if (c == *s) return *s;
      throw bounds_error(*s);
    }
    case HpKind::integer: {
      std::int64_t v = 0;
      if (auto* i = std::get_if<std::int64_t>(&value)) {
        v = *i;
      } else if (auto* d = std::get_if<double>(&value); d && std::nearbyint(*d) == *d) {
        v = static_cast<std::int64_t>(*d);
      } else {
        throw ValueError("hyper-parameter " + def.name + " expects an integer");
      }
      if (static_cast<double>(v) < def.lo || static_cast<double>(v) > def.hi)
        throw bounds_error(std::to_string(v));
      return v;
    }
    case HpKind::continuous: {
      double v = 0.0;
      if (auto* i = std::get_if<std::int64_t>(&value)) {
        v = static_cast<double>(*i);
      } else if (auto* d = std::get_if<double>(&value)) {
        v = *d;
      } else {
        throw ValueError("hyper-parameter " + def.name + " expects a number");
      }
      if (!(v >= def.lo && v <= def.hi)) throw bounds_error(format_hp(v));
      return v;
    }
  }
  return value;
}

// Full configuration: schema defaults overlaid with `config`, validated.
inline Config resolve_config(Family family, const Config& config) {
  Config full = default_config(family);
  for (const auto& [name, value] : config) {
    const auto* def = find_hp(family, name);
    if (!def)
      throw ValueError("unknown hyper-parameter '" + name + "' for family " +
                       std::string(to_string(family)));
    full[name] = normalize_hp(*def, value);
  }
  return full;
}

inline std::int64_t hp_int(const Config& c, const std::string& name) {
  return std::get<std::int64_t>(c.at(name));
}
inline double hp_double(const Config& c, const std::string& name) {
  return std::get<double>(c.at(name));
}
inline const std::string& hp_string(const Config& c, const std::string& name) {
  return std::get<std::string>(c.at(name));
}

}  // namespace grs
