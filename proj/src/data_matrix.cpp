#include "regqa/data_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <set>
#include <sstream>
#include <string_view>

namespace regqa {

DataMatrix::DataMatrix(std::vector<std::string> column_names,
                       std::vector<std::vector<double>> columns)
    : names_(std::move(column_names)), columns_(std::move(columns)) {
  if (columns_.empty()) throw InputError("data matrix needs at least one column");
  if (names_.size() != columns_.size())
    throw InputError("column name count does not match column count");

  rows_ = columns_.front().size();
  if (rows_ < 2) throw InputError("data matrix needs at least 2 rows");

  std::set<std::string_view> seen;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (!seen.insert(names_[j]).second)
      throw InputError("duplicate column name '" + names_[j] + "'");
    if (columns_[j].size() != rows_)
      throw InputError("column '" + names_[j] + "' has a different length");
    for (double v : columns_[j])
      if (!std::isfinite(v))
        throw InputError("column '" + names_[j] + "' contains a non-finite value");
  }
}

std::span<const double> DataMatrix::column(std::size_t j) const {
  if (j >= columns_.size())
    throw std::out_of_range("column index " + std::to_string(j) + " out of range (p = " +
                            std::to_string(columns_.size()) + ")");
  return columns_[j];
}

bool NormalizedView::is_constant(std::size_t j) const {
  return std::find(constant_columns.begin(), constant_columns.end(), j) !=
         constant_columns.end();
}

NormalizedView normalize(const DataMatrix& data) {
  std::vector<std::vector<double>> scaled(data.cols());
  std::vector<std::size_t> constant;
  for (std::size_t j = 0; j < data.cols(); ++j) {
    const auto col = data.column(j);
    const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    auto& out = scaled[j];
    out.resize(col.size());
    if (lo == hi) {
      std::fill(out.begin(), out.end(), 0.5);
      constant.push_back(j);
      continue;
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < col.size(); ++i) out[i] = (col[i] - lo) / range;
    // Pin the extremes; (hi - lo) / range is 1 in exact arithmetic only.
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (col[i] == lo) out[i] = 0.0;
      if (col[i] == hi) out[i] = 1.0;
    }
  }
  return {DataMatrix(data.column_names(), std::move(scaled)), std::move(constant)};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool parse_number(std::string_view cell, double& value) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

IngestResult ingest_csv(std::istream& source, const CsvOptions& options) {
  const std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};

  std::vector<std::pair<std::size_t, std::string_view>> lines;  // (1-based line number, text)
  {
    std::string_view rest = text;
    std::size_t number = 0;
    while (!rest.empty()) {
      ++number;
      const auto nl = rest.find('\n');
      const auto line = rest.substr(0, nl);
      if (!is_blank(line)) lines.emplace_back(number, line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
  }
  if (lines.empty()) throw InputError("empty input");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  if (options.has_header) {
    for (auto field : split(lines.front().second, options.delimiter)) {
      if (field.empty()) throw InputError("empty column name in header");
      names.emplace_back(field);
    }
    first_data = 1;
  } else {
    const auto width = split(lines.front().second, options.delimiter).size();
    for (std::size_t j = 0; j < width; ++j) names.push_back("x" + std::to_string(j + 1));
  }
  {
    std::set<std::string_view> seen;
    for (const auto& name : names)
      if (!seen.insert(name).second) throw InputError("duplicate column name '" + name + "'");
  }

  std::vector<bool> keep(names.size(), true);
  for (const auto& ignored : options.ignore_columns) {
    const auto it = std::find(names.begin(), names.end(), ignored);
    if (it == names.end()) throw InputError("ignored column '" + ignored + "' not found");
    keep[static_cast<std::size_t>(it - names.begin())] = false;
  }

  const std::size_t width = names.size();
  std::vector<std::vector<double>> columns(width);
  std::vector<std::size_t> valid_cells(width, 0);
  std::size_t dropped = 0;
  std::string first_bad;
  auto note_bad = [&](std::size_t line_no, std::size_t j, std::string_view cell) {
    if (!first_bad.empty()) return;
    std::ostringstream msg;
    msg << "line " << line_no << ", column ";
    if (j < width)
      msg << "'" << names[j] << "'";
    else
      msg << j + 1;
    msg << ": '" << cell << "'";
    first_bad = msg.str();
  };

  std::vector<double> row(width);
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    const auto [line_no, line] = lines[r];
    const auto fields = split(line, options.delimiter);
    bool ok = true;
    for (std::size_t j = 0; j < width; ++j) {
      if (!keep[j]) continue;
      if (j >= fields.size()) {
        note_bad(line_no, j, "");
        ok = false;
        continue;
      }
      if (parse_number(fields[j], row[j])) {
        ++valid_cells[j];
      } else {
        note_bad(line_no, j, fields[j]);
        ok = false;
      }
    }
    if (fields.size() > width) {
      note_bad(line_no, width, fields[width]);
      ok = false;
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j < width; ++j)
      if (keep[j]) columns[j].push_back(row[j]);
  }

  for (std::size_t j = 0; j < width; ++j)
    if (keep[j] && valid_cells[j] == 0 && lines.size() > first_data)
      throw InputError("column '" + names[j] + "' is entirely missing or unparsable" +
                       (first_bad.empty() ? std::string{} : " (first bad cell at " + first_bad + ")"));

  std::vector<std::string> kept_names;
  std::vector<std::vector<double>> kept_columns;
  for (std::size_t j = 0; j < width; ++j) {
    if (!keep[j]) continue;
    kept_names.push_back(names[j]);
    kept_columns.push_back(std::move(columns[j]));
  }
  if (kept_columns.empty()) throw InputError("no feature columns left after ignoring columns");

  const std::size_t valid_rows = kept_columns.front().size();
  if (valid_rows < 2) {
    std::string msg = "fewer than 2 valid data rows (" + std::to_string(valid_rows) + " valid, " +
                      std::to_string(dropped) + " dropped)";
    if (!first_bad.empty()) msg += "; first bad cell at " + first_bad;
    throw InputError(msg);
  }

  return {DataMatrix(std::move(kept_names), std::move(kept_columns)), dropped, std::move(first_bad)};
}

void write_csv(std::ostream& out, const DataMatrix& data, char delimiter) {
  const auto& names = data.column_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? std::string(1, delimiter) : "") << names[j];
  out << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j) out << delimiter;
      out << data(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace regqa
