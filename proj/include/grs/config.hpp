#pragma once

// Run configuration: JSON parsing with field-level validation, and the
// normalized echo stored in every report. Relative paths resolve against the
// directory of the configuration file.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grs/error.hpp"
#include "grs/hpspace.hpp"
#include "grs/preprocess.hpp"
#include "grs/serialize.hpp"
#include "grs/tuner.hpp"

namespace grs {

struct RowFilter {
  std::string column;
  std::set<std::string> allowed;
};

struct DataSource {
  enum class Kind { csv, synthetic };
  Kind kind = Kind::synthetic;
  // csv
  std::string path;
  std::string target;
  std::optional<RowFilter> filter;
  // synthetic
  std::size_t rows = 2000;
  std::uint64_t seed = 7;
  double positive_rate = 0.6;
};

struct RunConfig {
  DataSource data;
  double missing_threshold = 0.6;
  Scaling scaling = Scaling::minmax;
  std::optional<DerivedFeature> derived;
  double train_fraction = 0.75;
  std::uint64_t split_seed = 42;
  std::vector<Family> families{kAllFamilies.begin(), kAllFamilies.end()};
  std::map<Family, SearchSpace> spaces;
  std::size_t k = 3;
  std::optional<std::size_t> rs_budget;
  TuningSeeds seeds;
  std::string report_path = "report.json";
  std::string table_path = "table.md";
  std::string chart_path = "chart.svg";
  Json references = Json::object();  // label -> {family -> accuracy in [0, 1]}
  std::filesystem::path base_dir = ".";

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }
};

namespace detail {

class ConfigReader {
 public:
  ConfigReader(const Json& node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) throw ConfigError(where_.empty() ? "<root>" : where_, "must be an object");
  }

  std::string field(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, value] : node_.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError(field(key), "unknown field");
    }
  }

  bool has(const char* key) const { return node_.contains(key) && !node_[key].is_null(); }
  const Json& at(const char* key) const { return node_[key]; }

  double number(const char* key, double fallback, double lo, double hi, bool open = false) const {
    if (!has(key)) return fallback;
    const auto& v = node_[key];
    if (!v.is_number()) throw ConfigError(field(key), "must be a number");
    const double d = v.get<double>();
    const bool inside = open ? (d > lo && d < hi) : (d >= lo && d <= hi);
    if (!inside) {
      std::ostringstream msg;
      msg << "must lie in " << (open ? "(" : "[") << lo << ", " << hi << (open ? ")" : "]");
      throw ConfigError(field(key), msg.str());
    }
    return d;
  }

  std::uint64_t unsigned_int(const char* key, std::uint64_t fallback, std::uint64_t lo = 0,
                             std::uint64_t hi = std::numeric_limits<std::uint64_t>::max()) const {
    if (!has(key)) return fallback;
    const auto& v = node_[key];
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
      throw ConfigError(field(key), "must be a non-negative integer");
    const auto u = v.get<std::uint64_t>();
    if (u < lo || u > hi)
      throw ConfigError(field(key),
                        "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return u;
  }

  std::string string(const char* key, const std::string& fallback, bool required = false) const {
    if (!has(key)) {
      if (required) throw ConfigError(field(key), "is required");
      return fallback;
    }
    if (!node_[key].is_string()) throw ConfigError(field(key), "must be a string");
    return node_[key].get<std::string>();
  }

  const std::string& where() const { return where_; }

 private:
  const Json& node_;
  std::string where_;
};

inline SearchSpace parse_space(Family family, const Json& node, const std::string& where) {
  ConfigReader reader(node, where);
  SearchSpace space{family, {}};
  // Parameters follow schema order regardless of JSON key order.
  for (const auto& def : hp_schema(family)) {
    if (!node.contains(def.name)) continue;
    ConfigReader p(node[def.name], reader.field(def.name));
    ParamSpec spec;
    spec.name = def.name;
    spec.kind = def.kind;
    if (def.kind == HpKind::categorical) {
      p.only({"choices"});
      if (!p.has("choices") || !p.at("choices").is_array())
        throw ConfigError(p.field("choices"), "must be an array of strings");
      for (const auto& c : p.at("choices")) {
        if (!c.is_string()) throw ConfigError(p.field("choices"), "must be an array of strings");
        spec.choices.push_back(c.get<std::string>());
      }
    } else {
      p.only({"lo", "hi", "step"});
      if (!p.has("lo") || !p.has("hi")) throw ConfigError(p.where(), "needs lo and hi");
      spec.lo = p.number("lo", 0.0, def.lo, def.hi);
      spec.hi = p.number("hi", 0.0, def.lo, def.hi);
      if (p.has("step")) spec.step = p.number("step", 1.0, 0.0, 1e12);
    }
    try {
      validate_param(spec, family);
    } catch (const ValueError& e) {
      throw ConfigError(p.where(), e.what());
    }
    space.params.push_back(std::move(spec));
  }
  for (const auto& [key, value] : node.items())
    if (!find_hp(family, key))
      throw ConfigError(reader.field(key), "is not a hyper-parameter of " +
                                               std::string(to_string(family)));
  return space;
}

}  // namespace detail

inline RunConfig parse_run_config(const Json& root, std::filesystem::path base_dir = ".") {
  using detail::ConfigReader;
  RunConfig cfg;
  cfg.base_dir = std::move(base_dir);
  ConfigReader top(root, "");
  top.only({"data", "preprocess", "split", "tuner", "output", "references"});

  if (!top.has("data")) throw ConfigError("data", "is required");
  {
    ConfigReader data(top.at("data"), "data");
    data.only({"csv", "synthetic"});
    if (data.has("csv") == data.has("synthetic"))
      throw ConfigError("data", "needs exactly one of csv or synthetic");
    if (data.has("csv")) {
      ConfigReader csv(data.at("csv"), "data.csv");
      csv.only({"path", "target", "filter"});
      cfg.data.kind = DataSource::Kind::csv;
      cfg.data.path = csv.string("path", "", true);
      cfg.data.target = csv.string("target", "", true);
      if (csv.has("filter")) {
        ConfigReader f(csv.at("filter"), "data.csv.filter");
        f.only({"column", "allowed"});
        RowFilter filter;
        filter.column = f.string("column", "", true);
        if (!f.has("allowed") || !f.at("allowed").is_array())
          throw ConfigError(f.field("allowed"), "must be an array of strings");
        for (const auto& v : f.at("allowed")) {
          if (!v.is_string()) throw ConfigError(f.field("allowed"), "must be an array of strings");
          filter.allowed.insert(v.get<std::string>());
        }
        cfg.data.filter = std::move(filter);
      }
    } else {
      ConfigReader syn(data.at("synthetic"), "data.synthetic");
      syn.only({"rows", "seed", "positive_rate"});
      cfg.data.kind = DataSource::Kind::synthetic;
      cfg.data.rows = syn.unsigned_int("rows", cfg.data.rows, 0, 10'000'000);
      cfg.data.seed = syn.unsigned_int("seed", cfg.data.seed);
      cfg.data.positive_rate = syn.number("positive_rate", cfg.data.positive_rate, 0.0, 1.0, true);
    }
  }

  if (top.has("preprocess")) {
    ConfigReader pre(top.at("preprocess"), "preprocess");
    pre.only({"missing_threshold", "scaling", "derived"});
    cfg.missing_threshold = pre.number("missing_threshold", cfg.missing_threshold, 0.0, 1.0);
    const auto scaling = pre.string("scaling", "minmax");
    if (auto s = parse_scaling(scaling)) cfg.scaling = *s;
    else throw ConfigError(pre.field("scaling"), "must be minmax, zscore or none");
    if (pre.has("derived")) {
      ConfigReader d(pre.at("derived"), "preprocess.derived");
      d.only({"name", "op", "left", "right"});
      DerivedFeature f;
      f.name = d.string("name", "", true);
      const auto op = d.string("op", "", true);
      if (op == "ratio") f.op = DerivedFeature::Op::ratio;
      else if (op == "difference") f.op = DerivedFeature::Op::difference;
      else throw ConfigError(d.field("op"), "must be ratio or difference");
      f.left = d.string("left", "", true);
      f.right = d.string("right", "", true);
      cfg.derived = std::move(f);
    }
  }

  if (top.has("split")) {
    ConfigReader split(top.at("split"), "split");
    split.only({"train_fraction", "seed"});
    cfg.train_fraction = split.number("train_fraction", cfg.train_fraction, 0.0, 1.0, true);
    cfg.split_seed = split.unsigned_int("seed", cfg.split_seed);
  }

  if (top.has("tuner")) {
    ConfigReader tuner(top.at("tuner"), "tuner");
    tuner.only({"families", "k", "rs_budget", "seeds", "spaces"});
    if (tuner.has("families")) {
      const auto& list = tuner.at("families");
      if (!list.is_array() || list.empty())
        throw ConfigError("tuner.families", "must be a non-empty array of family names");
      cfg.families.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string at = "tuner.families[" + std::to_string(i) + "]";
        if (!list[i].is_string()) throw ConfigError(at, "must be a string");
        const auto name = list[i].get<std::string>();
        const auto family = parse_family(name);
        if (!family)
          throw ConfigError(at, "unknown family '" + name +
                                    "' (supported: DT, RF, NB, LR, KNN, SVM, GBT/XGB)");
        for (auto f : cfg.families)
          if (f == *family) throw ConfigError(at, "family '" + name + "' listed twice");
        cfg.families.push_back(*family);
      }
    }
    cfg.k = static_cast<std::size_t>(tuner.unsigned_int("k", cfg.k, 2, 100));
    if (tuner.has("rs_budget")) {
      const auto& b = tuner.at("rs_budget");
      if (b.is_string() && b.get<std::string>() == "auto") cfg.rs_budget.reset();
      else cfg.rs_budget = static_cast<std::size_t>(tuner.unsigned_int("rs_budget", 0, 1, 1'000'000));
    }
    if (tuner.has("seeds")) {
      ConfigReader seeds(tuner.at("seeds"), "tuner.seeds");
      seeds.only({"folds", "model", "search"});
      cfg.seeds.folds = seeds.unsigned_int("folds", cfg.seeds.folds);
      cfg.seeds.model = seeds.unsigned_int("model", cfg.seeds.model);
      cfg.seeds.search = seeds.unsigned_int("search", cfg.seeds.search);
    }
    if (tuner.has("spaces")) {
      ConfigReader spaces(tuner.at("spaces"), "tuner.spaces");
      for (const auto& [name, node] : tuner.at("spaces").items()) {
        const auto family = parse_family(name);
        if (!family) throw ConfigError(spaces.field(name), "unknown family '" + name + "'");
        if (cfg.spaces.count(*family))
          throw ConfigError(spaces.field(name), "search space given twice");
        cfg.spaces[*family] = detail::parse_space(*family, node, spaces.field(name));
      }
    }
  }

  if (top.has("output")) {
    ConfigReader out(top.at("output"), "output");
    out.only({"report", "table", "chart"});
    cfg.report_path = out.string("report", cfg.report_path);
    cfg.table_path = out.string("table", cfg.table_path);
    cfg.chart_path = out.string("chart", cfg.chart_path);
  }

  if (top.has("references")) {
    const auto& refs = top.at("references");
    if (!refs.is_object()) throw ConfigError("references", "must be an object");
    for (const auto& [label, column] : refs.items()) {
      const std::string at = "references." + label;
      if (!column.is_object()) throw ConfigError(at, "must map family names to accuracies");
      for (const auto& [family, value] : column.items()) {
        if (!parse_family(family)) throw ConfigError(at + "." + family, "unknown family");
        if (!value.is_number() || value.get<double>() < 0.0 || value.get<double>() > 1.0)
          throw ConfigError(at + "." + family, "must be an accuracy in [0, 1]");
      }
    }
    cfg.references = refs;
  }
  return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open configuration file");
  Json root;
  try {
    root = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  auto dir = path.parent_path();
  return parse_run_config(root, dir.empty() ? std::filesystem::path(".") : dir);
}

inline Json space_to_json(const SearchSpace& space) {
  Json j = Json::object();
  for (const auto& p : space.params) {
    if (p.kind == HpKind::categorical) j[p.name] = {{"choices", p.choices}};
    else j[p.name] = {{"lo", p.lo}, {"hi", p.hi}, {"step", p.grid_step()}};
  }
  return j;
}

// Normalized configuration with every default spelled out. Parsing it back
// yields an equivalent RunConfig.
inline Json run_config_to_json(const RunConfig& cfg) {
  Json j;
  if (cfg.data.kind == DataSource::Kind::csv) {
    Json csv{{"path", cfg.data.path}, {"target", cfg.data.target}};
    if (cfg.data.filter)
      csv["filter"] = {{"column", cfg.data.filter->column},
                       {"allowed", std::vector<std::string>(cfg.data.filter->allowed.begin(),
                                                            cfg.data.filter->allowed.end())}};
    j["data"] = {{"csv", csv}};
  } else {
    j["data"] = {{"synthetic",
                  {{"rows", cfg.data.rows},
                   {"seed", cfg.data.seed},
                   {"positive_rate", cfg.data.positive_rate}}}};
  }
  Json pre{{"missing_threshold", cfg.missing_threshold},
           {"scaling", std::string(to_string(cfg.scaling))}};
  if (cfg.derived)
    pre["derived"] = {{"name", cfg.derived->name},
                      {"op", cfg.derived->op == DerivedFeature::Op::ratio ? "ratio" : "difference"},
                      {"left", cfg.derived->left},
                      {"right", cfg.derived->right}};
  j["preprocess"] = pre;
  j["split"] = {{"train_fraction", cfg.train_fraction}, {"seed", cfg.split_seed}};
  Json families = Json::array();
  for (auto f : cfg.families) families.push_back(std::string(to_string(f)));
  Json spaces = Json::object();
  for (auto f : cfg.families)
    if (auto it = cfg.spaces.find(f); it != cfg.spaces.end())
      spaces[std::string(to_string(f))] = space_to_json(it->second);
  j["tuner"] = {{"families", families},
                {"k", cfg.k},
                {"rs_budget", cfg.rs_budget ? Json(*cfg.rs_budget) : Json("auto")},
                {"seeds",
                 {{"folds", cfg.seeds.folds}, {"model", cfg.seeds.model}, {"search", cfg.seeds.search}}},
                {"spaces", spaces}};
  j["output"] = {{"report", cfg.report_path}, {"table", cfg.table_path}, {"chart", cfg.chart_path}};
  j["references"] = cfg.references;
  return j;
}

}  // namespace grs
