#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "grs/pipeline.hpp"
#include "grs/version.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kConfig = 3,
  kData = 4,
  kTuning = 5,
  kIo = 6,
};

grs::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw grs::IoError("cannot open " + path);
  try {
    return grs::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw grs::ParseError(path + ": invalid JSON: " + e.what());
  }
}

int cmd_run(const std::string& config_path, std::optional<std::size_t> workers, bool quiet) {
  const auto cfg = grs::load_run_config(config_path);
  grs::RunOptions options;
  options.workers = workers;
  options.log = quiet ? nullptr : &std::cerr;
  const auto result = grs::run_pipeline(cfg, options);
  std::cout << grs::final_summary(result.report) << '\n';
  std::cout << "report: " << result.report_path.string() << '\n'
            << "table: " << result.table_path.string() << '\n'
            << "chart: " << result.chart_path.string() << '\n';
  return kOk;
}

int cmd_render(const std::string& report_path, const std::string& table_path,
               const std::string& chart_path) {
  const auto report = read_json(report_path);
  const auto problems = grs::validate_report(report);
  if (!problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += "\n  " + p;
    throw grs::SchemaError(report_path + " is not a valid report:" + all);
  }
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (!table_path.empty()) files.emplace_back(table_path, grs::render_table(report));
  if (!chart_path.empty()) files.emplace_back(chart_path, grs::render_chart(report));
  if (files.empty()) std::cout << grs::render_table(report);
  grs::write_files_atomically(files);
  return kOk;
}

int cmd_synth(std::size_t rows, std::uint64_t seed, double positive_rate, const std::string& out) {
  const auto table = grs::generate_synthetic(rows, seed, positive_rate);
  grs::write_files_atomically({{out, grs::to_csv(table)}});
  std::cout << "wrote " << rows << " rows to " << out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Baseline, grid search and random search tuning for seven classifier families"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print the version and exit");

  auto* run = app.add_subcommand("run", "Run the full pipeline from a JSON config");
  std::string config_path;
  std::size_t workers = 0;
  bool quiet = false;
  run->add_option("config", config_path, "Path to the run configuration")->required();
  run->add_option("--workers", workers, "Worker threads (overrides GRS_MAX_WORKERS)")
      ->check(CLI::PositiveNumber);
  run->add_flag("-q,--quiet", quiet, "Suppress progress output on stderr");

  auto* render = app.add_subcommand("render", "Render a table and chart from a JSON report");
  std::string report_path, table_out, chart_out;
  render->add_option("report", report_path, "Path to a report produced by run")->required();
  render->add_option("--table", table_out, "Markdown table output path");
  render->add_option("--chart", chart_out, "SVG chart output path");

  auto* synth = app.add_subcommand("synth", "Write a synthetic student-records CSV");
  std::size_t rows = 2000;
  std::uint64_t seed = 7;
  double positive_rate = 0.6;
  std::string synth_out;
  synth->add_option("--rows", rows, "Number of rows")->required();
  synth->add_option("--seed", seed, "Generator seed")->required();
  synth->add_option("--positive-rate", positive_rate, "Fraction of graduated = 1")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--out", synth_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (show_version) {
      std::cout << grs::kToolName << ' ' << grs::kVersion << '\n';
      return kOk;
    }
    if (*run) return cmd_run(config_path, workers ? std::optional<std::size_t>(workers) : std::nullopt, quiet);
    if (*render) return cmd_render(report_path, table_out, chart_out);
    if (*synth) return cmd_synth(rows, seed, positive_rate, synth_out);
    std::cerr << app.help();
    return kUsage;
  } catch (const grs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const grs::TuningError& e) {
    std::cerr << "tuning error: " << e.what() << '\n';
    return kTuning;
  } catch (const grs::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const grs::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return kUnexpected;
  }
}
