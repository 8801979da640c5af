#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "regqa/benchmark.hpp"
#include "regqa/criteria.hpp"
#include "regqa/data_matrix.hpp"

namespace regqa {

// `rounded` writes scores and diagnostics with at most 6 decimals.
enum class Precision { rounded, full };

nlohmann::json to_json(const CriterionConfig& cfg);
CriterionConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const QualityReport& report, Precision precision = Precision::rounded);
QualityReport report_from_json(const nlohmann::json& j);

std::string emit_json(const QualityReport& report, Precision precision = Precision::rounded);
// Throws std::invalid_argument on malformed input.
QualityReport parse_report(const std::string& text);

// One line per pair: x,y,q_corr,q_cluster,q_outlier,q_ortho plus the diagnostics.
void write_pair_csv(std::ostream& out, const QualityReport& report, Precision precision = Precision::rounded);

// scatter_<x>_<y>.txt per pair and hist_<x>.txt per feature, whitespace separated,
// normalised values. Returns the paths written.
std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir, const DataMatrix& data,
                                                   const QualityReport& report);

void print_bench(std::ostream& out, const std::vector<BenchRow>& rows, std::size_t reps);

}  // namespace regqa
