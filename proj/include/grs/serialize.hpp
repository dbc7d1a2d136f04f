#pragma once

// JSON views of the library's value types (nlohmann::json).

#include <chrono>
#include <cmath>
#include <ctime>
#include <string>

#include "grs/classifiers.hpp"
#include "grs/preprocess.hpp"
#include "grs/tuner.hpp"
#include "grs/version.hpp"
#include "json.hpp"

namespace grs {

using Json = nlohmann::ordered_json;

inline Json hp_to_json(const HpValue& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

inline HpValue hp_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw ValueError("hyper-parameter values must be numbers or strings");
}

inline Json config_to_json(const Config& config) {
  Json j = Json::object();
  for (const auto& [name, value] : config) j[name] = hp_to_json(value);
  return j;
}

inline Config config_from_json(const Json& j) {
  Config config;
  for (const auto& [name, value] : j.items()) config[name] = hp_from_json(value);
  return config;
}

inline Json trial_to_json(const TrialResult& t) {
  return Json{{"trial_index", t.trial_index},
              {"config", config_to_json(t.config)},
              {"fold_accuracies", t.fold_accuracies},
              {"mean_accuracy", t.mean_accuracy},
              {"degenerate_folds", t.degenerate_folds},
              {"duration_seconds", t.duration_seconds}};
}

inline Json plan_to_json(const PreprocessPlan& plan) {
  Json scales = Json::array();
  for (const auto& s : plan.scales)
    scales.push_back(
        {{"column", s.column}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"std", s.std}});
  Json one_hot = Json::array();
  for (const auto& g : plan.one_hot) {
    auto outputs = g.levels;
    outputs.emplace_back(kMissingLevel);
    one_hot.push_back({{"column", g.column}, {"levels", outputs}});
  }
  return Json{{"missing_threshold", plan.missing_threshold},
              {"scaling", std::string(to_string(plan.scaling))},
              {"target", plan.target},
              {"dropped_columns", plan.dropped_columns},
              {"numeric_scales", scales},
              {"one_hot", one_hot},
              {"feature_names", plan.feature_names()}};
}

inline Json model_summary_to_json(const ModelSummary& s) {
  return Json{{"family", std::string(to_string(s.family))},
              {"config", config_to_json(s.config)},
              {"training_accuracy", s.training_accuracy},
              {"fit_seconds", s.fit_seconds}};
}

inline constexpr std::size_t kMaxRecordedTrials = 10000;

inline Json search_to_json(const SearchOutcome& s) {
  Json trials = Json::array();
  const std::size_t kept = std::min(s.trials.size(), kMaxRecordedTrials);
  for (std::size_t i = 0; i < kept; ++i) trials.push_back(trial_to_json(s.trials[i]));
  return Json{{"best", trial_to_json(s.best)},
              {"trials_count", s.trials.size()},
              {"trials_truncated", kept < s.trials.size()},
              {"total_seconds", s.total_seconds},
              {"trials", trials}};
}

inline Json family_to_json(const FamilyReport& fr) {
  Json j{{"family", std::string(to_string(fr.family))},
         {"grid_size", fr.grid_size},
         {"rs_budget", fr.rs_budget},
         {"errors", fr.errors}};
  j["baseline"] = fr.baseline ? trial_to_json(*fr.baseline) : Json(nullptr);
  j["gs"] = fr.gs ? search_to_json(*fr.gs) : Json(nullptr);
  j["rs"] = fr.rs ? search_to_json(*fr.rs) : Json(nullptr);
  const auto w = fr.winner();
  j["winner"] = w ? Json(std::string(to_string(*w))) : Json(nullptr);
  return j;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Full report document. `config_echo`, `plan` and `references` come from the
// pipeline layer; pass null/empty when not applicable.
inline Json report_to_json(const TuningReport& report, const Json& config_echo = nullptr,
                           const PreprocessPlan* plan = nullptr,
                           const Json& references = Json::object(),
                           std::uint64_t split_seed = 0) {
  Json families = Json::array();
  for (const auto& fr : report.families) families.push_back(family_to_json(fr));
  Json j;
  j["tool"] = {{"name", kToolName}, {"version", kVersion}};
  j["generated_at"] = utc_timestamp();
  j["seeds"] = {{"split", split_seed},
                {"folds", report.seeds.folds},
                {"model", report.seeds.model},
                {"search", report.seeds.search}};
  j["config"] = config_echo;
  j["data"] = {{"train_rows", report.train_rows},
               {"test_rows", report.test_rows},
               {"feature_names", report.feature_names}};
  j["preprocess_plan"] = plan ? plan_to_json(*plan) : Json(nullptr);
  j["k"] = report.k;
  j["families"] = families;
  j["final"] = {{"family", std::string(to_string(report.final.family))},
                {"method", std::string(to_string(report.final.method))},
                {"config", config_to_json(report.final.config)},
                {"cv_accuracy", report.final.cv_accuracy},
                {"test_accuracy", report.final.test_accuracy}};
  j["references"] = references.is_null() ? Json::object() : references;
  return j;
}

// Removes wall-clock fields (durations and the timestamp) in place, for
// determinism comparisons.
inline void strip_timing(Json& j) {
  if (j.is_object()) {
    for (const char* key : {"duration_seconds", "total_seconds", "fit_seconds", "generated_at"})
      j.erase(key);
    for (auto& [key, value] : j.items()) strip_timing(value);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timing(v);
  }
}

namespace detail {
inline void expect(std::vector<std::string>& problems, bool ok, const std::string& what) {
  if (!ok) problems.push_back(what);
}
inline bool is_accuracy(const Json& j) {
  return j.is_number() && j.get<double>() >= 0.0 && j.get<double>() <= 1.0;
}
inline void check_trial(std::vector<std::string>& p, const Json& t, const std::string& at) {
  if (!t.is_object()) {
    p.push_back(at + " must be an object");
    return;
  }
  expect(p, t.contains("trial_index") && t["trial_index"].is_number_unsigned(),
         at + ".trial_index must be a non-negative integer");
  expect(p, t.contains("config") && t["config"].is_object(), at + ".config must be an object");
  expect(p, t.contains("fold_accuracies") && t["fold_accuracies"].is_array() &&
                !t["fold_accuracies"].empty(),
         at + ".fold_accuracies must be a non-empty array");
  if (t.contains("fold_accuracies") && t["fold_accuracies"].is_array()) {
    double sum = 0.0;
    for (const auto& a : t["fold_accuracies"]) {
      expect(p, is_accuracy(a), at + ".fold_accuracies entries must lie in [0, 1]");
      if (a.is_number()) sum += a.get<double>();
    }
    if (t.contains("mean_accuracy") && t["mean_accuracy"].is_number() &&
        !t["fold_accuracies"].empty())
      expect(p, std::abs(sum / static_cast<double>(t["fold_accuracies"].size()) -
                         t["mean_accuracy"].get<double>()) < 1e-9,
             at + ".mean_accuracy must equal the mean of fold_accuracies");
  }
  expect(p, t.contains("mean_accuracy") && is_accuracy(t["mean_accuracy"]),
         at + ".mean_accuracy must lie in [0, 1]");
  expect(p, t.contains("duration_seconds") && t["duration_seconds"].is_number() &&
                t["duration_seconds"].get<double>() >= 0.0,
         at + ".duration_seconds must be a non-negative number");
}
}  // namespace detail

// Structural validation against the documented report schema
// (docs/report.schema.json). Returns an empty list when valid.
inline std::vector<std::string> validate_report(const Json& j) {
  using detail::expect;
  std::vector<std::string> p;
  if (!j.is_object()) return {"report must be a JSON object"};
  expect(p, j.contains("tool") && j["tool"].is_object() && j["tool"].contains("version"),
         "tool.version missing");
  expect(p, j.contains("seeds") && j["seeds"].is_object(), "seeds must be an object");
  expect(p, j.contains("k") && j["k"].is_number_unsigned() && j["k"].get<std::size_t>() >= 2,
         "k must be an integer >= 2");
  expect(p, j.contains("references") && j["references"].is_object(),
         "references must be an object");
  if (!j.contains("families") || !j["families"].is_array() || j["families"].empty()) {
    p.push_back("families must be a non-empty array");
  } else {
    for (std::size_t i = 0; i < j["families"].size(); ++i) {
      const auto& f = j["families"][i];
      const std::string at = "families[" + std::to_string(i) + "]";
      expect(p, f.contains("family") && f["family"].is_string() &&
                    parse_family(f["family"].get<std::string>()).has_value(),
             at + ".family must name a supported family");
      if (f.contains("baseline") && !f["baseline"].is_null())
        detail::check_trial(p, f["baseline"], at + ".baseline");
      for (const char* m : {"gs", "rs"}) {
        if (!f.contains(m)) {
          p.push_back(at + "." + m + " missing");
          continue;
        }
        if (f[m].is_null()) continue;
        const auto& s = f[m];
        const std::string sat = at + "." + m;
        detail::check_trial(p, s.value("best", Json()), sat + ".best");
        expect(p, s.contains("trials_count") && s["trials_count"].is_number_unsigned(),
               sat + ".trials_count must be a non-negative integer");
        expect(p, s.contains("total_seconds") && s["total_seconds"].is_number(),
               sat + ".total_seconds must be a number");
        expect(p, s.contains("trials") && s["trials"].is_array(), sat + ".trials must be an array");
      }
      expect(p, f.contains("errors") && f["errors"].is_array(), at + ".errors must be an array");
    }
  }
  if (!j.contains("final") || !j["final"].is_object()) {
    p.push_back("final must be an object");
  } else {
    const auto& f = j["final"];
    expect(p, f.contains("family") && f["family"].is_string(), "final.family missing");
    expect(p, f.contains("method") && f["method"].is_string() &&
                  (f["method"] == "GS" || f["method"] == "RS"),
           "final.method must be GS or RS");
    expect(p, f.contains("config") && f["config"].is_object(), "final.config must be an object");
    expect(p, f.contains("test_accuracy") && detail::is_accuracy(f["test_accuracy"]),
           "final.test_accuracy must lie in [0, 1]");
    expect(p, f.contains("cv_accuracy") && detail::is_accuracy(f["cv_accuracy"]),
           "final.cv_accuracy must lie in [0, 1]");
  }
  return p;
}

}  // namespace grs
