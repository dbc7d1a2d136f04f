#pragma once

// End-to-end run: load or synthesize data, filter, derive, split, preprocess,
// tune, then write the JSON report, Markdown table and SVG chart.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "grs/config.hpp"
#include "grs/report.hpp"
#include "grs/tabular.hpp"

namespace grs {

struct RunOptions {
  std::optional<std::size_t> workers;  // falls back to GRS_MAX_WORKERS, then hardware threads
  std::ostream* log = nullptr;         // progress and warnings
};

struct RunResult {
  Json report;
  std::string table;
  std::string chart;
  std::filesystem::path report_path, table_path, chart_path;
};

inline Table load_dataset(const RunConfig& cfg) {
  if (cfg.data.kind == DataSource::Kind::csv && !std::filesystem::is_regular_file(cfg.resolve(cfg.data.path)))
    throw ConfigError("data.csv.path", "file not found: " + cfg.resolve(cfg.data.path).string());
  Table table = cfg.data.kind == DataSource::Kind::csv
                    ? load_csv(cfg.resolve(cfg.data.path).string(), cfg.data.target)
                    : generate_synthetic(cfg.data.rows, cfg.data.seed, cfg.data.positive_rate);
  if (cfg.data.filter) table = filter_rows(table, cfg.data.filter->column, cfg.data.filter->allowed);
  if (cfg.derived) table = add_derived_column(table, *cfg.derived);
  return table;
}

// Writes every file to a sibling temporary first and renames only after all
// writes succeeded.
inline void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    auto tmp = path;
    tmp += ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw IoError("cannot write " + path.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot rename " + temps[i].string() + ": " + ec.message());
    }
  }
}

inline RunResult run_pipeline(const RunConfig& cfg, const RunOptions& options = {}) {
  auto log = [&](const std::string& line) {
    if (options.log) *options.log << line << '\n';
  };

  const Table table = load_dataset(cfg);
  log("loaded " + std::to_string(table.n_rows()) + " rows, " + std::to_string(table.n_cols()) +
      " columns");
  const auto split = split_train_test(table, cfg.train_fraction, cfg.split_seed);
  PreprocessPlan plan;
  const auto [train, test] = preprocess_split(split, cfg.missing_threshold, cfg.scaling, &plan);
  log("train " + std::to_string(train.rows()) + " rows, test " + std::to_string(test.rows()) +
      " rows, " + std::to_string(train.cols()) + " features");

  TuningSettings settings;
  settings.k = cfg.k;
  settings.rs_budget = cfg.rs_budget;
  settings.seeds = cfg.seeds;
  settings.options.workers = options.workers.value_or(workers_from_env());
  settings.options.warn = [&](const std::string& w) { log("warning: " + w); };
  const auto tuned = grs_auto_hp(cfg.families, cfg.spaces, train, test, settings);

  RunResult result;
  result.report = report_to_json(tuned, run_config_to_json(cfg), &plan, cfg.references, cfg.split_seed);
  result.table = render_table(result.report);
  result.chart = render_chart(result.report);
  result.report_path = cfg.resolve(cfg.report_path);
  result.table_path = cfg.resolve(cfg.table_path);
  result.chart_path = cfg.resolve(cfg.chart_path);
  write_files_atomically({{result.report_path, result.report.dump(2) + "\n"},
                          {result.table_path, result.table},
                          {result.chart_path, result.chart}});
  return result;
}

inline std::string final_summary(const Json& report) {
  const auto& f = report.at("final");
  return "final: " + f.at("family").get<std::string>() + " via " + f.at("method").get<std::string>() +
         " config=" + f.at("config").dump() +
         " test_accuracy=" + detail::fixed(f.at("test_accuracy").get<double>() * 100.0) + "%" +
         " cv_accuracy=" + detail::fixed(f.at("cv_accuracy").get<double>() * 100.0) + "%";
}

}  // namespace grs
