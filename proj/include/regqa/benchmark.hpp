#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "regqa/criteria.hpp"
#include "regqa/data_matrix.hpp"

namespace regqa {

// The six simulated pathologies, in table order a..f.
enum class BenchmarkKind { completeness, correlation, clusters, configuration, outliers, orthogonality };

inline constexpr std::array<BenchmarkKind, 6> kAllBenchmarkKinds = {
    BenchmarkKind::completeness,  BenchmarkKind::correlation, BenchmarkKind::clusters,
    BenchmarkKind::configuration, BenchmarkKind::outliers,    BenchmarkKind::orthogonality};

std::string_view to_string(BenchmarkKind kind);
std::optional<BenchmarkKind> parse_benchmark_kind(std::string_view name);

// Shape parameters on the raw (pre-normalisation) scale.
struct BenchmarkShape {
  double correlation_noise = 0.01;    // sd of the offset orthogonal to the line
  double cluster_sigma = 0.05;        // per-axis sd of each blob
  double cluster_low = 0.25;          // blob centres sit at {low, high}^2
  double cluster_high = 0.75;
  std::array<double, 3> configuration_levels = {0.0, 0.5, 1.0};
  double outlier_blob_side = 0.25;    // blob is uniform on [0, side]^2
  std::size_t outlier_count = 5;
  double outlier_displacement = 4.0;  // group centre coordinates, in blob diagonals
  std::array<double, 2> outlier_extent = {1.0, 1.0};  // group box size, in blob sides
  double ortho_arm_width = 0.05;      // thickness of each arm of the L
};

struct BenchmarkSpec {
  BenchmarkKind kind = BenchmarkKind::completeness;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  BenchmarkShape shape;
};

// N x 2 matrix with columns x1, x2. Throws std::invalid_argument when n < 50.
DataMatrix generate(const BenchmarkSpec& spec);

// One row of the reference score table, columns as in kTableColumns.
inline constexpr std::array<std::string_view, 5> kTableColumns = {"q_corr", "q_cluster", "q_config_min",
                                                                   "q_outlier", "q_ortho"};
struct ReferenceRow {
  BenchmarkKind kind;
  char label;
  std::array<double, 5> printed;
  int designated;                 // column the pathology is meant to drive low, -1 for none
  std::array<bool, 5> cross_low;  // columns expected to be low as a side effect
};

std::span<const ReferenceRow> reference_table();

// Cells printed at <= 0.03 or >= 0.94 are threshold-saturated: +-0.05.
// The remaining cells depend on unpublished geometry: +-0.25.
double reference_tolerance(double printed);

// Five table columns extracted from a two-feature report.
std::array<double, 5> table_scores(const QualityReport& report);

struct BenchCell {
  double mean = 0.0;
  double sd = 0.0;
  bool within_tolerance = false;
};

struct BenchRow {
  BenchmarkKind kind;
  char label;
  std::array<BenchCell, 5> cells;
};

// Generates every benchmark with seeds seed .. seed + reps - 1 and assesses
// each with `cfg`. Cell statistics are over the repetitions.
std::vector<BenchRow> run_bench(std::uint64_t seed, std::size_t reps, const CriterionConfig& cfg,
                                std::size_t n = 1000, std::size_t threads = 0);

}  // namespace regqa
