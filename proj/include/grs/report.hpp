#pragma once

// Comparison artifacts rendered from a JSON report: a Markdown accuracy table
// (Baseline | GS | RS, plus optional reference columns) and a grouped SVG bar
// chart. Everything is derived from the JSON, which is the source of truth.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grs/serialize.hpp"

namespace grs {

struct ComparisonColumn {
  std::string label;
  std::vector<std::optional<double>> values;  // accuracy in [0, 1], per row
};

struct ComparisonTable {
  std::vector<std::string> rows;  // family names, in report order
  std::vector<ComparisonColumn> columns;
};

namespace detail {

inline std::optional<double> accuracy_at(const Json& node, std::initializer_list<const char*> path) {
  const Json* cur = &node;
  for (const char* key : path) {
    if (!cur->is_object() || !cur->contains(key)) return std::nullopt;
    cur = &(*cur)[key];
  }
  if (!cur->is_number()) return std::nullopt;
  return cur->get<double>();
}

// Reference maps may key families by alias (XGB for GBT).
inline std::optional<double> reference_value(const Json& column, const std::string& family) {
  if (!column.is_object()) return std::nullopt;
  const auto want = parse_family(family);
  for (const auto& [key, value] : column.items()) {
    if (!value.is_number()) continue;
    const auto have = parse_family(key);
    if ((want && have && *want == *have) || key == family) return value.get<double>();
  }
  return std::nullopt;
}

inline std::string percent(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", accuracy * 100.0);
  return buf;
}

// Hundredths of a percent, for comparisons on displayed precision.
inline long long percent_key(double accuracy) { return std::llround(accuracy * 10000.0); }

inline std::string fixed(double v, int decimals = 2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Baseline = cross-validated defaults, GS/RS = best mean CV accuracy of each
// search, then one column per entry of `references` (or of the report's own
// "references" object when `references` is null).
inline ComparisonTable comparison_from_report(const Json& report, const Json& references = nullptr) {
  ComparisonTable table;
  ComparisonColumn baseline{"Baseline", {}}, gs{"GS", {}}, rs{"RS", {}};
  for (const auto& f : report.at("families")) {
    table.rows.push_back(f.at("family").get<std::string>());
    baseline.values.push_back(detail::accuracy_at(f, {"baseline", "mean_accuracy"}));
    gs.values.push_back(detail::accuracy_at(f, {"gs", "best", "mean_accuracy"}));
    rs.values.push_back(detail::accuracy_at(f, {"rs", "best", "mean_accuracy"}));
  }
  table.columns = {std::move(baseline), std::move(gs), std::move(rs)};
  const Json& refs =
      references.is_null() ? report.value("references", Json::object()) : references;
  if (refs.is_object()) {
    for (const auto& [label, column] : refs.items()) {
      ComparisonColumn col{label, {}};
      for (const auto& family : table.rows) col.values.push_back(detail::reference_value(column, family));
      table.columns.push_back(std::move(col));
    }
  }
  return table;
}

// Accuracies as percentages with two decimals; every cell equal to its
// column's maximum (at displayed precision) is bold. Missing cells read "n/a".
inline std::string render_table(const ComparisonTable& table) {
  std::ostringstream out;
  out << "| Classifier |";
  for (const auto& c : table.columns) out << ' ' << c.label << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << "---|";
  out << '\n';

  std::vector<std::optional<long long>> column_max;
  for (const auto& c : table.columns) {
    std::optional<long long> best;
    for (const auto& v : c.values)
      if (v && (!best || detail::percent_key(*v) > *best)) best = detail::percent_key(*v);
    column_max.push_back(best);
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << "| " << table.rows[r] << " |";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& v = table.columns[c].values[r];
      if (!v) {
        out << " n/a |";
        continue;
      }
      const auto text = detail::percent(*v);
      if (column_max[c] && detail::percent_key(*v) == *column_max[c])
        out << " **" << text << "** |";
      else
        out << ' ' << text << " |";
    }
    out << '\n';
  }
  return out.str();
}

inline std::string render_table(const Json& report, const Json& references = nullptr) {
  return render_table(comparison_from_report(report, references));
}

// Grouped bars: one group per family, one bar per column, y axis 0-100%.
// Every bar is a <rect class="bar">, drawn even at zero height, and carries a
// value label.
inline std::string render_chart(const ComparisonTable& table) {
  static const char* kPalette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                   "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};
  const double bar_w = 18.0;
  const double group_gap = 24.0;
  const double left = 70.0, top = 40.0, plot_h = 300.0, bottom = 70.0;
  const std::size_t n_bars = table.columns.size();
  const double group_w = static_cast<double>(n_bars) * bar_w + group_gap;
  const double plot_w = std::max(1.0, static_cast<double>(table.rows.size()) * group_w);
  const double legend_w = 150.0;
  const double width = left + plot_w + 20.0 + legend_w;
  const double height = top + plot_h + bottom;
  const double base_y = top + plot_h;
  using detail::fixed;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "  <title>Accuracy by classifier and tuning method</title>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << fixed(width, 0) << "\" height=\"" << fixed(height, 0)
      << "\" fill=\"white\"/>\n";

  // y axis with gridlines every 20%
  out << "  <g class=\"y-axis\">\n";
  for (int tick = 0; tick <= 100; tick += 20) {
    const double y = base_y - plot_h * tick / 100.0;
    out << "    <line x1=\"" << fixed(left) << "\" y1=\"" << fixed(y) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(y) << "\" stroke=\"#dddddd\"/>\n";
    out << "    <text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(y + 4)
        << "\" text-anchor=\"end\">" << tick << "</text>\n";
  }
  out << "    <line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
      << "\" y2=\"" << fixed(base_y) << "\" stroke=\"black\"/>\n";
  out << "    <text class=\"axis-label\" transform=\"translate(20," << fixed(top + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">Accuracy (%)</text>\n";
  out << "  </g>\n";

  out << "  <g class=\"x-axis\">\n";
  out << "    <line x1=\"" << fixed(left) << "\" y1=\"" << fixed(base_y) << "\" x2=\""
      << fixed(left + plot_w) << "\" y2=\"" << fixed(base_y) << "\" stroke=\"black\"/>\n";
  out << "    <text class=\"axis-label\" x=\"" << fixed(left + plot_w / 2) << "\" y=\""
      << fixed(height - 12) << "\" text-anchor=\"middle\">Classifier</text>\n";
  out << "  </g>\n";

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double gx = left + group_gap / 2 + static_cast<double>(r) * group_w;
    out << "  <g class=\"group\" data-family=\"" << detail::xml_escape(table.rows[r]) << "\">\n";
    for (std::size_t c = 0; c < n_bars; ++c) {
      const auto& v = table.columns[c].values[r];
      const double acc = v ? std::clamp(*v, 0.0, 1.0) : 0.0;
      const double h = plot_h * acc;
      const double x = gx + static_cast<double>(c) * bar_w;
      out << "    <rect class=\"bar\" data-method=\"" << detail::xml_escape(table.columns[c].label)
          << "\" x=\"" << fixed(x) << "\" y=\"" << fixed(base_y - h) << "\" width=\""
          << fixed(bar_w - 2) << "\" height=\"" << fixed(h) << "\" fill=\""
          << kPalette[c % std::size(kPalette)] << "\"/>\n";
      out << "    <text class=\"bar-label\" x=\"" << fixed(x + (bar_w - 2) / 2) << "\" y=\""
          << fixed(base_y - h - 3) << "\" text-anchor=\"middle\" font-size=\"8\">"
          << (v ? detail::percent(*v) : std::string("n/a")) << "</text>\n";
    }
    out << "    <text x=\"" << fixed(gx + static_cast<double>(n_bars) * bar_w / 2) << "\" y=\""
        << fixed(base_y + 16) << "\" text-anchor=\"middle\">" << detail::xml_escape(table.rows[r])
        << "</text>\n";
    out << "  </g>\n";
  }

  out << "  <g class=\"legend\">\n";
  const double lx = left + plot_w + 20.0;
  for (std::size_t c = 0; c < n_bars; ++c) {
    const double ly = top + 18.0 * static_cast<double>(c);
    out << "    <rect class=\"legend-swatch\" x=\"" << fixed(lx) << "\" y=\"" << fixed(ly)
        << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[c % std::size(kPalette)] << "\"/>\n";
    out << "    <text x=\"" << fixed(lx + 18) << "\" y=\"" << fixed(ly + 10) << "\">"
        << detail::xml_escape(table.columns[c].label) << "</text>\n";
  }
  out << "  </g>\n";
  out << "</svg>\n";
  return out.str();
}

inline std::string render_chart(const Json& report, const Json& references = nullptr) {
  return render_chart(comparison_from_report(report, references));
}

}  // namespace grs
