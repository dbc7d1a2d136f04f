#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "grs/pipeline.hpp"

using namespace grs;
namespace fs = std::filesystem;

namespace {

const fs::path kData = fs::path(GRS_SOURCE_DIR) / "tests" / "data";

Json family_row(const std::string& name, double base, double gs, double rs) {
  return Json{{"family", name},
              {"baseline", {{"mean_accuracy", base}}},
              {"gs", {{"best", {{"mean_accuracy", gs}}}}},
              {"rs", {{"best", {{"mean_accuracy", rs}}}}}};
}

Json fake_report(std::vector<Json> rows) {
  Json j;
  j["families"] = rows;
  j["references"] = Json::object();
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("grs_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small, fast configuration on synthetic data.
Json small_config() {
  return Json::parse(R"({
    "data": {"synthetic": {"rows": 300, "seed": 5}},
    "tuner": {
      "families": ["DT", "NB", "KNN"],
      "rs_budget": 3,
      "spaces": {
        "DT": {"max_depth": {"lo": 2, "hi": 10, "step": 4}},
        "KNN": {"n_neighbors": {"lo": 1, "hi": 9, "step": 4}}
      }
    }
  })");
}

std::string config_error_field(const Json& j) {
  try {
    parse_run_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(GRS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, DefaultsFilledIn) {
  const auto cfg = parse_run_config(Json::parse(R"({"data": {"synthetic": {}}})"));
  EXPECT_EQ(cfg.k, 3u);
  EXPECT_DOUBLE_EQ(cfg.missing_threshold, 0.6);
  EXPECT_DOUBLE_EQ(cfg.train_fraction, 0.75);
  EXPECT_EQ(cfg.families.size(), 7u);
  EXPECT_FALSE(cfg.rs_budget.has_value());
}

TEST(Config, UnknownFamilyNamesTheField) {
  auto j = small_config();
  j["tuner"]["families"] = {"DT", "MLP"};
  EXPECT_EQ(config_error_field(j), "tuner.families[1]");
  try {
    parse_run_config(j);
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("MLP"), std::string::npos);
  }
}

TEST(Config, FieldLevelErrors) {
  auto j = small_config();
  j["tuner"]["k"] = 1;
  EXPECT_EQ(config_error_field(j), "tuner.k");

  j = small_config();
  j["preprocess"] = {{"scaling", "log"}};
  EXPECT_EQ(config_error_field(j), "preprocess.scaling");

  j = small_config();
  j["split"] = {{"train_fraction", 1.0}};
  EXPECT_EQ(config_error_field(j), "split.train_fraction");

  j = small_config();
  j["tuner"]["spaces"]["DT"]["max_depth"]["lo"] = 0;
  EXPECT_EQ(config_error_field(j), "tuner.spaces.DT.max_depth.lo");

  j = small_config();
  j["tuner"]["spaces"]["DT"]["n_neighbors"] = {{"lo", 1}, {"hi", 3}};
  EXPECT_EQ(config_error_field(j), "tuner.spaces.DT.n_neighbors");

  j = small_config();
  j["outptu"] = Json::object();
  EXPECT_EQ(config_error_field(j), "outptu");

  j = small_config();
  j["data"]["csv"] = {{"path", "x.csv"}, {"target", "y"}};
  EXPECT_EQ(config_error_field(j), "data");

  j = small_config();
  j["references"] = {{"Work", {{"RF", 88.3}}}};
  EXPECT_EQ(config_error_field(j), "references.Work.RF");
}

TEST(Config, RsBudgetAutoOrInteger) {
  auto j = small_config();
  j["tuner"]["rs_budget"] = "auto";
  EXPECT_FALSE(parse_run_config(j).rs_budget.has_value());
  j["tuner"]["rs_budget"] = 12;
  EXPECT_EQ(parse_run_config(j).rs_budget, 12u);
  j["tuner"]["rs_budget"] = 0;
  EXPECT_EQ(config_error_field(j), "tuner.rs_budget");
}

TEST(Config, SpaceParamsFollowSchemaOrder) {
  auto j = small_config();
  j["tuner"]["spaces"]["DT"] = Json::parse(
      R"({"criterion": {"choices": ["gini"]}, "max_depth": {"lo": 1, "hi": 2}})");
  const auto cfg = parse_run_config(j);
  const auto& params = cfg.spaces.at(Family::DT).params;
  ASSERT_EQ(params.size(), 2u);
  EXPECT_EQ(params[0].name, "max_depth");
  EXPECT_EQ(params[1].name, "criterion");
}

TEST(Config, XgbAliasAccepted) {
  auto j = small_config();
  j["tuner"]["families"] = {"XGB"};
  j["tuner"]["spaces"] = {{"XGB", {{"max_depth", {{"lo", 1}, {"hi", 2}}}}}};
  const auto cfg = parse_run_config(j);
  EXPECT_EQ(cfg.families, std::vector<Family>{Family::GBT});
  EXPECT_TRUE(cfg.spaces.count(Family::GBT));
}

TEST(Config, EchoRoundTrips) {
  auto j = small_config();
  j["preprocess"] = Json::parse(
      R"({"scaling": "zscore", "derived": {"name": "load", "op": "ratio", "left": "credits_attempted", "right": "age"}})");
  const auto echo = run_config_to_json(parse_run_config(j));
  EXPECT_EQ(run_config_to_json(parse_run_config(echo)), echo);
}

TEST(Config, MissingCsvIsConfigError) {
  auto j = small_config();
  j["data"] = {{"csv", {{"path", "does_not_exist.csv"}, {"target", "y"}}}};
  const auto cfg = parse_run_config(j, scratch_dir("missing"));
  try {
    load_dataset(cfg);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "data.csv.path");
  }
}

TEST(RenderTable, TwoDecimalPercentRow) {
  const auto report = fake_report(
      {family_row("RF", 0.8524, 0.8834, 0.8837), family_row("GBT", 0.9, 0.9, 0.9)});
  const auto md = render_table(report);
  EXPECT_NE(md.find("| RF | 85.24 | 88.34 | 88.37 |\n"), std::string::npos) << md;
  EXPECT_NE(md.find("| GBT | **90.00** | **90.00** | **90.00** |\n"), std::string::npos) << md;
}

TEST(RenderTable, EqualColumnIsAllBold) {
  const auto md = render_table(fake_report(
      {family_row("DT", 0.5, 0.7, 0.1), family_row("NB", 0.5, 0.6, 0.2), family_row("LR", 0.5, 0.65, 0.3)}));
  EXPECT_EQ(count(md, "**50.00**"), 3u);
  EXPECT_EQ(count(md, "**70.00**"), 1u);
  EXPECT_EQ(count(md, "**30.00**"), 1u);
}

TEST(RenderTable, HeaderAndRowOrder) {
  const auto md = render_table(fake_report(
      {family_row("SVM", 0.5, 0.6, 0.7), family_row("DT", 0.5, 0.6, 0.7)}));
  EXPECT_EQ(md.rfind("| Classifier | Baseline | GS | RS |\n|---|---|---|---|\n", 0), 0u);
  EXPECT_LT(md.find("| SVM |"), md.find("| DT |"));
  // four columns without references
  const auto header = md.substr(0, md.find('\n'));
  EXPECT_EQ(count(header, "|"), 5u);
}

TEST(RenderTable, ReferenceColumnsAppended) {
  auto report = fake_report({family_row("GBT", 0.8, 0.85, 0.86), family_row("NB", 0.7, 0.7, 0.7)});
  const Json refs = {{"Prior", {{"XGB", 0.8516}}}};
  const auto md = render_table(report, refs);
  EXPECT_NE(md.find("| Classifier | Baseline | GS | RS | Prior |"), std::string::npos);
  EXPECT_NE(md.find("| GBT | **80.00** | **85.00** | **86.00** | **85.16** |"), std::string::npos) << md;
  EXPECT_NE(md.find("| NB | 70.00 | 70.00 | 70.00 | n/a |"), std::string::npos) << md;
}

TEST(RenderChart, OneBarPerFamilyAndMethod) {
  std::vector<Json> rows;
  for (auto f : kAllFamilies) rows.push_back(family_row(std::string(to_string(f)), 0.6, 0.7, 0.8));
  const auto svg = render_chart(fake_report(rows));
  EXPECT_EQ(count(svg, "<rect class=\"bar\""), 21u);
  EXPECT_EQ(count(svg, "class=\"legend-swatch\""), 3u);
  EXPECT_NE(svg.find("Accuracy (%)"), std::string::npos);
  EXPECT_NE(svg.find(">Classifier<"), std::string::npos);
  EXPECT_EQ(svg, render_chart(fake_report(rows)));
}

TEST(RenderChart, ZeroAccuracyBarStillDrawn) {
  const auto svg = render_chart(fake_report({family_row("DT", 0.0, 0.5, 1.0)}));
  EXPECT_EQ(count(svg, "<rect class=\"bar\""), 3u);
  EXPECT_NE(svg.find("height=\"0.00\""), std::string::npos);
  EXPECT_NE(svg.find(">0.00</text>"), std::string::npos);
  EXPECT_NE(svg.find(">100.00</text>"), std::string::npos);
}

TEST(Pipeline, WritesValidArtifactsAndIsDeterministic) {
  const auto dir = scratch_dir("pipeline");
  auto cfg = parse_run_config(small_config(), dir);
  const auto first = run_pipeline(cfg);
  for (const auto& p : {first.report_path, first.table_path, first.chart_path}) {
    EXPECT_TRUE(fs::exists(p)) << p;
    auto tmp = p;
    tmp += ".tmp";
    EXPECT_FALSE(fs::exists(tmp)) << tmp;
  }
  const auto on_disk = Json::parse(slurp(first.report_path));
  EXPECT_TRUE(validate_report(on_disk).empty());
  EXPECT_EQ(slurp(first.table_path), render_table(on_disk));
  EXPECT_EQ(slurp(first.chart_path), render_chart(on_disk));

  auto a = first.report;
  auto b = run_pipeline(cfg).report;
  strip_timing(a);
  strip_timing(b);
  EXPECT_EQ(a, b);

  // The echoed config reproduces the report.
  auto again = run_pipeline(parse_run_config(on_disk.at("config"), dir)).report;
  strip_timing(again);
  EXPECT_EQ(a, again);
}

TEST(Pipeline, TableValuesMatchReport) {
  const auto dir = scratch_dir("values");
  const auto result = run_pipeline(parse_run_config(small_config(), dir));
  for (const auto& f : result.report.at("families")) {
    const double gs = f.at("gs").at("best").at("mean_accuracy").get<double>();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", gs * 100.0);
    EXPECT_NE(result.table.find(buf), std::string::npos) << buf;
  }
}

TEST(Pipeline, ParallelAndSequentialReportsAgree) {
  const auto dir = scratch_dir("parallel");
  const auto cfg = parse_run_config(small_config(), dir);
  RunOptions seq, par;
  seq.workers = 1;
  par.workers = 4;
  auto a = run_pipeline(cfg, seq).report;
  auto b = run_pipeline(cfg, par).report;
  strip_timing(a);
  strip_timing(b);
  EXPECT_EQ(a, b);
}

TEST(Report, ValidatorFlagsBrokenReports) {
  EXPECT_FALSE(validate_report(Json::object()).empty());
  const auto dir = scratch_dir("validator");
  auto report = run_pipeline(parse_run_config(small_config(), dir)).report;
  EXPECT_TRUE(validate_report(report).empty());
  report["final"]["method"] = "BO";
  EXPECT_FALSE(validate_report(report).empty());
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  EXPECT_EQ(run_cli("--version"), 0);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("run"), 2);

  auto j = small_config();
  j["tuner"]["families"] = {"MLP"};
  std::ofstream(dir / "bad.json") << j.dump();
  EXPECT_EQ(run_cli((dir / "bad.json").string()), 2);
  EXPECT_EQ(run_cli("run " + (dir / "bad.json").string()), 3);
  EXPECT_EQ(run_cli("run " + (dir / "nope.json").string()), 3);

  std::ofstream(dir / "ragged.csv") << "a,b,y\n1,2,0\n1,1\n";
  j = small_config();
  j["data"] = {{"csv", {{"path", "ragged.csv"}, {"target", "y"}}}};
  std::ofstream(dir / "ragged.json") << j.dump();
  EXPECT_EQ(run_cli("run " + (dir / "ragged.json").string()), 4);

  EXPECT_EQ(run_cli("synth --rows 40 --seed 3 --out " + (dir / "s.csv").string()), 0);
  EXPECT_EQ(load_csv((dir / "s.csv").string(), "graduated"), generate_synthetic(40, 3));
}

TEST(Cli, RunAndRenderOnFixture) {
  const auto dir = scratch_dir("fixture");
  auto j = Json::parse(slurp(kData / "students_500.json"));
  j["data"]["csv"]["path"] = (kData / "students_500.csv").string();
  j["tuner"]["families"] = {"DT", "NB"};
  j["output"] = {{"report", "r.json"}, {"table", "t.md"}, {"chart", "c.svg"}};
  std::ofstream(dir / "cfg.json") << j.dump();
  ASSERT_EQ(run_cli("run -q " + (dir / "cfg.json").string()), 0);
  ASSERT_EQ(run_cli("render " + (dir / "r.json").string() + " --table " + (dir / "t2.md").string() +
                    " --chart " + (dir / "c2.svg").string()),
            0);
  EXPECT_EQ(slurp(dir / "t.md"), slurp(dir / "t2.md"));
  EXPECT_EQ(slurp(dir / "c.svg"), slurp(dir / "c2.svg"));
  std::ofstream(dir / "broken.json") << "{\"families\": []}";
  EXPECT_EQ(run_cli("render " + (dir / "broken.json").string() + " --table " +
                    (dir / "t3.md").string()),
            4);
}
