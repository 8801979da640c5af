#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace regqa {

// Raised for malformed or unusable input data. The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// N x p table of finite feature values with unique column names.
// Stored column-major; every criterion works on whole columns.
class DataMatrix {
 public:
  DataMatrix(std::vector<std::string> column_names,
             std::vector<std::vector<double>> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  // Zero-based column access; throws std::out_of_range for j >= cols().
  std::span<const double> column(std::size_t j) const;
  double operator()(std::size_t i, std::size_t j) const { return columns_[j][i]; }

  const std::vector<std::string>& column_names() const { return names_; }

  bool operator==(const DataMatrix&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
};

// Min-max scaled copy of a DataMatrix. Constant columns become all 0.5.
struct NormalizedView {
  DataMatrix values;
  std::vector<std::size_t> constant_columns;

  bool is_constant(std::size_t j) const;
  std::span<const double> column(std::size_t j) const { return values.column(j); }
};

NormalizedView normalize(const DataMatrix& data);

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
  // Columns dropped before validation, e.g. a target variable.
  std::vector<std::string> ignore_columns;
};

struct IngestResult {
  DataMatrix data;
  std::size_t dropped_rows = 0;
  // Human-readable location of the first unparsable or missing cell, empty if none.
  std::string first_bad_cell;
};

IngestResult ingest_csv(std::istream& source, const CsvOptions& options = {});

// Writes a header line and all rows with 17 significant digits.
void write_csv(std::ostream& out, const DataMatrix& data, char delimiter = ',');

}  // namespace regqa
