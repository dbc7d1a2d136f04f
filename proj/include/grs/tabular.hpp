#pragma once

// Column-oriented tabular data: CSV ingestion and serialization, row
// filtering, seeded train/test splitting, and a synthetic student-records
// generator.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "grs/error.hpp"
#include "grs/random.hpp"

namespace grs {

enum class ColumnKind { numeric, categorical, target };

inline std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::target: return "target";
  }
  return "?";
}

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  // Sorted, duplicate-free levels (categorical and target only).
  std::vector<std::string> categories;

  bool is_categorical() const { return kind != ColumnKind::numeric; }
  bool operator==(const ColumnSchema&) const = default;

  std::optional<std::int32_t> level_of(std::string_view value) const {
    auto it = std::lower_bound(categories.begin(), categories.end(), value);
    if (it == categories.end() || *it != value) return std::nullopt;
    return static_cast<std::int32_t>(it - categories.begin());
  }
};

// Values of one column. Numeric columns use `numeric`, categorical and target
// columns use `codes` (level indices). Missing cells hold NaN / -1 and are
// flagged in `missing`.
struct Column {
  std::vector<double> numeric;
  std::vector<std::int32_t> codes;
  std::vector<std::uint8_t> missing;
};

inline constexpr std::int32_t kMissingCode = -1;

class Table {
 public:
  Table() = default;

  // Validates every Table invariant; throws SchemaError on violation.
  Table(std::vector<ColumnSchema> schema, std::vector<Column> columns)
      : schema_(std::move(schema)), columns_(std::move(columns)) {
    validate();
  }

  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const ColumnSchema& schema(std::size_t c) const { return schema_.at(c); }
  const Column& column(std::size_t c) const { return columns_.at(c); }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return schema_.size(); }
  std::size_t target_index() const { return target_; }

  std::optional<std::size_t> find_column(std::string_view name) const {
    for (std::size_t c = 0; c < schema_.size(); ++c)
      if (schema_[c].name == name) return c;
    return std::nullopt;
  }

  std::size_t column_index(std::string_view name) const {
    if (auto c = find_column(name)) return *c;
    throw SchemaError("unknown column '" + std::string(name) + "'");
  }

  bool is_missing(std::size_t c, std::size_t r) const {
    return columns_[c].missing[r] != 0;
  }
  double numeric(std::size_t c, std::size_t r) const {
    return columns_[c].numeric[r];
  }
  std::int32_t code(std::size_t c, std::size_t r) const {
    return columns_[c].codes[r];
  }
  // Label of row r as 0/1 (index into the target's category list).
  int label(std::size_t r) const { return columns_[target_].codes[r]; }

  double missing_fraction(std::size_t c) const {
    if (n_rows_ == 0) return 0.0;
    const auto& m = columns_[c].missing;
    return static_cast<double>(std::count(m.begin(), m.end(), 1)) /
           static_cast<double>(n_rows_);
  }

  // Rows in the given order (indices may repeat).
  Table take_rows(std::span<const std::size_t> rows) const {
    std::vector<Column> out(columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const auto& src = columns_[c];
      auto& dst = out[c];
      dst.missing.reserve(rows.size());
      if (schema_[c].is_categorical()) {
        dst.codes.reserve(rows.size());
        for (auto r : rows) dst.codes.push_back(src.codes.at(r));
      } else {
        dst.numeric.reserve(rows.size());
        for (auto r : rows) dst.numeric.push_back(src.numeric.at(r));
      }
      for (auto r : rows) dst.missing.push_back(src.missing.at(r));
    }
    return Table(schema_, std::move(out));
  }

  // Appends a numeric column; the caller supplies values and the mask.
  Table with_numeric_column(std::string name, std::vector<double> values,
                            std::vector<std::uint8_t> missing) const {
    auto schema = schema_;
    auto columns = columns_;
    schema.push_back({std::move(name), ColumnKind::numeric, {}});
    Column col;
    col.numeric = std::move(values);
    col.missing = std::move(missing);
    columns.push_back(std::move(col));
    return Table(std::move(schema), std::move(columns));
  }

  // Value equality; missing cells compare equal regardless of payload.
  friend bool operator==(const Table& a, const Table& b) {
    if (a.schema_ != b.schema_ || a.n_rows_ != b.n_rows_) return false;
    for (std::size_t c = 0; c < a.columns_.size(); ++c) {
      const auto& x = a.columns_[c];
      const auto& y = b.columns_[c];
      if (x.missing != y.missing) return false;
      for (std::size_t r = 0; r < a.n_rows_; ++r) {
        if (x.missing[r]) continue;
        if (a.schema_[c].is_categorical() ? x.codes[r] != y.codes[r]
                                          : x.numeric[r] != y.numeric[r])
          return false;
      }
    }
    return true;
  }

 private:
  void validate() {
    if (schema_.size() != columns_.size())
      throw SchemaError("schema/column count mismatch");
    std::size_t targets = 0;
    std::set<std::string> names;
    for (std::size_t c = 0; c < schema_.size(); ++c) {
      const auto& s = schema_[c];
      if (!names.insert(s.name).second)
        throw SchemaError("duplicate column name '" + s.name + "'");
      if (s.kind == ColumnKind::target) {
        ++targets;
        target_ = c;
        if (s.categories.size() != 2)
          throw SchemaError("target column '" + s.name +
                            "' must have exactly 2 categories");
      }
      if (s.is_categorical()) {
        if (!std::is_sorted(s.categories.begin(), s.categories.end()) ||
            std::adjacent_find(s.categories.begin(), s.categories.end()) !=
                s.categories.end())
          throw SchemaError("categories of '" + s.name +
                            "' must be sorted and unique");
      } else if (!s.categories.empty()) {
        throw SchemaError("numeric column '" + s.name + "' has categories");
      }
    }
    if (targets != 1)
      throw SchemaError("table must have exactly one target column");

    n_rows_ = columns_.empty() ? 0 : columns_[0].missing.size();
    for (std::size_t c = 0; c < schema_.size(); ++c) {
      auto& col = columns_[c];
      const bool cat = schema_[c].is_categorical();
      const auto len = cat ? col.codes.size() : col.numeric.size();
      if (col.missing.size() != n_rows_ || len != n_rows_)
        throw SchemaError("column '" + schema_[c].name + "' has wrong length");
      const auto levels = static_cast<std::int32_t>(schema_[c].categories.size());
      for (std::size_t r = 0; r < n_rows_; ++r) {
        if (cat) {
          if (col.missing[r]) {
            col.codes[r] = kMissingCode;
          } else if (col.codes[r] < 0 || col.codes[r] >= levels) {
            throw SchemaError("invalid level index in column '" +
                              schema_[c].name + "'");
          }
        } else if (col.missing[r]) {
          col.numeric[r] = std::numeric_limits<double>::quiet_NaN();
        }
      }
      if (schema_[c].kind == ColumnKind::target &&
          std::count(col.missing.begin(), col.missing.end(), 1) != 0)
        throw SchemaError("target column '" + schema_[c].name +
                          "' has missing values");
    }
  }

  std::vector<ColumnSchema> schema_;
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
  std::size_t target_ = 0;
};

struct SplitPair {
  Table train;
  Table test;
  std::uint64_t seed = 0;
  double train_fraction = 0.0;
  // Source row indices of each part, in part order.
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

// ---------------------------------------------------------------------------
// CSV

namespace csv {

// One parsed record plus the 1-based data row number (header is row 0).
struct Record {
  std::vector<std::string> fields;
  std::vector<bool> quoted;
};

// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line endings,
// embedded newlines inside quotes.
inline std::vector<Record> parse(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  bool any = false;  // current record has content
  std::size_t i = 0;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    current.quoted.push_back(field_quoted);
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = {};
    any = false;
  };

  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        field_quoted = true;
        any = true;
        break;
      case ',':
        end_field();
        any = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        if (any || !field.empty()) end_record();
        break;
      default:
        field.push_back(ch);
        any = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field at end of input");
  if (any || !field.empty()) end_record();
  return records;
}

inline bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos ||
         (!s.empty() && (s.front() == ' ' || s.back() == ' '));
}

inline void write_field(std::ostream& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char ch : s) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline bool is_missing_token(std::string_view s, bool quoted) {
  if (quoted) return s.empty();
  s = trim(s);
  return s.empty() || s == "NA";
}

// Decimal number: optional sign, digits with optional fraction, optional
// exponent. Rejects inf/nan/hex.
inline std::optional<double> parse_decimal(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.find_first_not_of("0123456789+-.eE") != std::string_view::npos)
    return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace csv

// Builds a Table from parsed CSV text. Rows with a missing target are dropped.
inline Table parse_csv(std::string_view text, std::string_view target_column) {
  auto records = csv::parse(text);
  if (records.empty()) throw ParseError("CSV input has no header row");
  const auto header = std::move(records.front().fields);
  const std::size_t width = header.size();

  std::optional<std::size_t> target;
  for (std::size_t c = 0; c < width; ++c)
    if (csv::trim(header[c]) == target_column) target = c;
  if (!target)
    throw SchemaError("target column '" + std::string(target_column) +
                      "' not found in header");

  for (std::size_t r = 1; r < records.size(); ++r)
    if (records[r].fields.size() != width)
      throw ParseError("row " + std::to_string(r) + ": expected " +
                       std::to_string(width) + " fields, found " +
                       std::to_string(records[r].fields.size()));

  std::vector<std::size_t> kept;
  for (std::size_t r = 1; r < records.size(); ++r)
    if (!csv::is_missing_token(records[r].fields[*target], records[r].quoted[*target]))
      kept.push_back(r);

  std::vector<ColumnSchema> schema(width);
  std::vector<Column> columns(width);
  for (std::size_t c = 0; c < width; ++c) {
    auto& s = schema[c];
    auto& col = columns[c];
    s.name = std::string(csv::trim(header[c]));

    bool numeric = c != *target;
    std::set<std::string> levels;
    for (auto r : kept) {
      const auto& f = records[r].fields[c];
      if (csv::is_missing_token(f, records[r].quoted[c])) continue;
      levels.insert(std::string(records[r].quoted[c] ? std::string_view(f)
                                                     : csv::trim(f)));
      if (numeric && !csv::parse_decimal(f)) numeric = false;
    }

    col.missing.reserve(kept.size());
    if (numeric) {
      s.kind = ColumnKind::numeric;
      for (auto r : kept) {
        const auto& f = records[r].fields[c];
        const bool miss = csv::is_missing_token(f, records[r].quoted[c]);
        col.missing.push_back(miss ? 1 : 0);
        col.numeric.push_back(miss ? std::numeric_limits<double>::quiet_NaN()
                                   : *csv::parse_decimal(f));
      }
      continue;
    }

    s.kind = c == *target ? ColumnKind::target : ColumnKind::categorical;
    s.categories.assign(levels.begin(), levels.end());
    if (s.kind == ColumnKind::target && s.categories.size() != 2)
      throw SchemaError("target column '" + s.name + "' has " +
                        std::to_string(s.categories.size()) +
                        " distinct values; binary classification needs 2");
    for (auto r : kept) {
      const auto& f = records[r].fields[c];
      const bool quoted = records[r].quoted[c];
      const bool miss = csv::is_missing_token(f, quoted);
      col.missing.push_back(miss ? 1 : 0);
      col.codes.push_back(
          miss ? kMissingCode
               : *s.level_of(quoted ? std::string_view(f) : csv::trim(f)));
    }
  }
  return Table(std::move(schema), std::move(columns));
}

inline Table load_csv(const std::string& path, std::string_view target_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open CSV file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), target_column);
}

// Serializes with a header row; missing cells become empty fields and numbers
// use the shortest round-trip representation.
inline std::string to_csv(const Table& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c) out << ',';
    csv::write_field(out, table.schema(c).name);
  }
  out << '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
      if (c) out << ',';
      if (table.is_missing(c, r)) continue;
      const auto& s = table.schema(c);
      if (s.is_categorical())
        csv::write_field(out, s.categories[static_cast<std::size_t>(table.code(c, r))]);
      else
        out << csv::format_number(table.numeric(c, r));
    }
    out << '\n';
  }
  return out.str();
}

inline void write_csv(const Table& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write CSV file '" + path + "'");
  out << to_csv(table);
}

// ---------------------------------------------------------------------------
// Row operations

// Keeps rows whose level in `column` is one of `allowed`; order preserved.
// Missing cells never match. Unknown level names simply match nothing.
inline Table filter_rows(const Table& table, std::string_view column,
                         const std::set<std::string>& allowed) {
  const auto c = table.column_index(column);
  const auto& s = table.schema(c);
  if (!s.is_categorical())
    throw SchemaError("filter column '" + s.name + "' is not categorical");
  std::vector<std::uint8_t> keep_level(s.categories.size(), 0);
  for (std::size_t l = 0; l < s.categories.size(); ++l)
    keep_level[l] = allowed.count(s.categories[l]) ? 1 : 0;
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < table.n_rows(); ++r)
    if (!table.is_missing(c, r) && keep_level[static_cast<std::size_t>(table.code(c, r))])
      rows.push_back(r);
  return table.take_rows(rows);
}

// Train size is round-half-up(train_fraction * n_rows); test gets the rest.
inline SplitPair split_train_test(const Table& table, double train_fraction,
                                  std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ValueError("train_fraction must lie strictly between 0 and 1");
  if (table.n_rows() < 2) throw ValueError("cannot split fewer than 2 rows");
  const auto perm = seeded_permutation(table.n_rows(), seed);
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(table.n_rows()) + 0.5));
  SplitPair split;
  split.seed = seed;
  split.train_fraction = train_fraction;
  split.train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  split.train = table.take_rows(split.train_rows);
  split.test = table.take_rows(split.test_rows);
  return split;
}

// ---------------------------------------------------------------------------
// Synthetic student records

// Generative rule (per row, independent draws from a seeded stream):
//   entry_gpa          ~ Normal(3.0, 0.5) clipped to [0, 4], 2 decimals
//   credits_attempted  ~ Uniform{60..160}
//   age                ~ 17 + Poisson-like integer in [0, 15] (geometric, p=0.35)
//   sex                ~ {F: 0.3, M: 0.7}
//   race_ethnicity     ~ {Asian .15, Black .12, Hispanic .18, Other .10, White .45}
//   first_major        ~ {CE .2, CS .35, CIS .1, IT .15, SE .2}
//   latent = 2.0*(gpa-3) + 0.025*(credits-110) - 0.12*(age-19)
//          + 1.2*[gpa > 3.2 and major in {CS, SE}]
//          - 1.4*[credits < 90 and gpa < 2.8]
//          + 0.8*[age <= 19 and credits >= 130]
//          + major offset {CE .2, CS .3, CIS -.2, IT -.1, SE .25}
//          + Logistic(0, 0.6) noise
//   graduated = 1 for the round(positive_rate * n) rows with the largest
//               latent score (ties by row order), else 0.
// Each feature cell is then independently marked missing with probability
// 0.02. Labels are drawn before masking, from the complete features.
inline Table generate_synthetic(std::size_t n_rows, std::uint64_t seed,
                                double positive_rate = 0.6) {
  if (!(positive_rate > 0.0 && positive_rate < 1.0))
    throw ValueError("positive_rate must lie strictly between 0 and 1");

  const std::vector<std::string> sexes{"F", "M"};
  const std::vector<std::string> races{"Asian", "Black", "Hispanic", "Other", "White"};
  const std::vector<std::string> majors{"CE", "CIS", "CS", "IT", "SE"};
  const double race_p[] = {0.15, 0.12, 0.18, 0.10, 0.45};
  const double major_p[] = {0.20, 0.10, 0.35, 0.15, 0.20};
  const double major_offset[] = {0.2, -0.2, 0.3, -0.1, 0.25};

  auto draw_categorical = [](Rng& rng, std::span<const double> probs) {
    double u = uniform01(rng);
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      if (u < probs[i]) return static_cast<std::int32_t>(i);
      u -= probs[i];
    }
    return static_cast<std::int32_t>(probs.size() - 1);
  };

  Rng rng(mix_seed(seed, 0x5EED));
  std::vector<double> gpa(n_rows), credits(n_rows), age(n_rows), latent(n_rows);
  std::vector<std::int32_t> sex(n_rows), race(n_rows), major(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) {
    // Box-Muller
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    gpa[r] = std::round(std::clamp(3.0 + 0.5 * z, 0.0, 4.0) * 100.0) / 100.0;
    credits[r] = static_cast<double>(uniform_int(rng, 60, 160));
    int extra = 0;
    while (extra < 15 && uniform01(rng) > 0.35) ++extra;
    age[r] = 17.0 + extra;
    sex[r] = uniform01(rng) < 0.3 ? 0 : 1;
    race[r] = draw_categorical(rng, race_p);
    major[r] = draw_categorical(rng, major_p);

    const bool strong_major = majors[static_cast<std::size_t>(major[r])] == "CS" ||
                              majors[static_cast<std::size_t>(major[r])] == "SE";
    double score = 2.0 * (gpa[r] - 3.0) + 0.025 * (credits[r] - 110.0) -
                   0.12 * (age[r] - 19.0);
    if (gpa[r] > 3.2 && strong_major) score += 1.2;
    if (credits[r] < 90.0 && gpa[r] < 2.8) score -= 1.4;
    if (age[r] <= 19.0 && credits[r] >= 130.0) score += 0.8;
    score += major_offset[major[r]];
    const double u = std::clamp(uniform01(rng), 1e-12, 1.0 - 1e-12);
    score += 0.6 * std::log(u / (1.0 - u));
    latent[r] = score;
  }

  std::vector<std::size_t> order(n_rows);
  for (std::size_t r = 0; r < n_rows; ++r) order[r] = r;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return latent[a] > latent[b]; });
  const auto n_pos = static_cast<std::size_t>(
      std::floor(positive_rate * static_cast<double>(n_rows) + 0.5));
  std::vector<std::int32_t> label(n_rows, 0);
  for (std::size_t i = 0; i < n_pos; ++i) label[order[i]] = 1;

  auto mask = [&](std::size_t n) {
    std::vector<std::uint8_t> m(n);
    for (auto& v : m) v = uniform01(rng) < 0.02 ? 1 : 0;
    return m;
  };

  std::vector<ColumnSchema> schema{
      {"entry_gpa", ColumnKind::numeric, {}},
      {"credits_attempted", ColumnKind::numeric, {}},
      {"age", ColumnKind::numeric, {}},
      {"sex", ColumnKind::categorical, sexes},
      {"race_ethnicity", ColumnKind::categorical, races},
      {"first_major", ColumnKind::categorical, majors},
      {"graduated", ColumnKind::target, {"0", "1"}},
  };
  std::vector<Column> columns(7);
  columns[0].numeric = std::move(gpa);
  columns[1].numeric = std::move(credits);
  columns[2].numeric = std::move(age);
  columns[3].codes = std::move(sex);
  columns[4].codes = std::move(race);
  columns[5].codes = std::move(major);
  columns[6].codes = std::move(label);
  for (std::size_t c = 0; c < 6; ++c) columns[c].missing = mask(n_rows);
  columns[6].missing.assign(n_rows, 0);
  return Table(std::move(schema), std::move(columns));
}

}  // namespace grs
