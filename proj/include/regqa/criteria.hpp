#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regqa/data_matrix.hpp"
#include "regqa/stats.hpp"

namespace regqa {

// Spread used for the in-band / out-of-band deviations of the orthogonality criterion.
enum class SpreadMeasure { standard_deviation, mean_absolute_deviation };

struct CriterionConfig {
  double tau_cluster_1 = 0.025;  // dip value at which the dip sigmoid crosses 0.5
  double tau_cluster_2 = 0.5;    // p-value at which the p-value sigmoid crosses 0.5
  double tau_outlier = 4.0;      // k-NN distance ratio at which the outlier score is 0.5
  double tau_ortho = 0.1;        // half-width of the band on the normalised scale
  std::size_t k_outlier = 5;
  std::size_t bootstrap_b = 1000;
  std::uint64_t seed = 0;
  double ortho_grid_step = 0.01;
  double distinct_tol = 0.0;
  std::size_t distance_cap = 2000;  // max points entering the pairwise distance sample
  std::size_t ortho_min_band = 5;   // min points inside and outside a band
  SpreadMeasure ortho_spread = SpreadMeasure::standard_deviation;

  // Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  bool operator==(const CriterionConfig&) const = default;
};

// A structured degeneracy notice attached to a feature, a pair, or the dataset.
struct Warning {
  std::string code;
  std::string message;
  std::vector<std::string> features;

  bool operator==(const Warning&) const = default;
};

double sigmoid_v(double v_dip, double tau1);
double sigmoid_p(double p_dip, double tau2);
double outlier_score(double nu, double tau_outlier);

struct CorrScore {
  double q = 1.0;
  std::optional<double> r;  // empty when a column has zero variance
  std::vector<Warning> warnings;
};

CorrScore q_corr(std::span<const double> a, std::span<const double> b);

struct ClusterScore {
  double q = 1.0;
  double v_dip = 0.0;
  double p_dip = 1.0;
  std::size_t points_used = 0;
  std::vector<Warning> warnings;
};

// Dip test on the pairwise distances of a normalised 2-D projection.
// `pair_seed` drives the point subsample when N exceeds cfg.distance_cap; the
// bootstrap null uses cfg.seed so that all pairs share one cached null.
ClusterScore q_cluster(Projection points, const CriterionConfig& cfg, std::uint64_t pair_seed);

std::vector<double> q_config(std::span<const std::size_t> counts);

struct OutlierScore {
  double q = 1.0;
  double nu = 1.0;  // max k-NN distance over its 0.9 quantile
  std::size_t k = 0;
  std::vector<Warning> warnings;
};

OutlierScore q_outlier(Projection points, const CriterionConfig& cfg);

struct OrthoScore {
  double q = 1.0;
  double band_center = 0.0;
  double e_in = 0.0;
  double e_out = 0.0;
  // 0: band on the projection's y column, spread of x; 1: the reverse.
  int band_axis = 0;
  std::vector<Warning> warnings;
};

// Band ratio e_out / e_in minimised over band centres and both orientations,
// each ratio clamped to 1.
OrthoScore q_ortho(Projection points, const CriterionConfig& cfg);

struct FeatureScores {
  std::size_t j = 0;
  std::string name;
  std::size_t distinct_count = 0;
  double q_config = 1.0;

  bool operator==(const FeatureScores&) const = default;
};

struct PairDiagnostics {
  std::optional<double> r;
  double v_dip = 0.0;
  double p_dip = 1.0;
  std::optional<double> nu_outlier;  // empty when the 0.9 quantile is zero
  double band_center = 0.0;
  double e_in = 0.0;
  double e_out = 0.0;
  int band_axis = 0;

  bool operator==(const PairDiagnostics&) const = default;
};

struct PairScores {
  std::size_t j = 0;
  std::size_t l = 0;
  std::string x;
  std::string y;
  double q_corr = 1.0;
  double q_cluster = 1.0;
  double q_outlier = 1.0;
  double q_ortho = 1.0;
  PairDiagnostics diagnostics;

  bool operator==(const PairScores&) const = default;
};

struct Aggregate {
  double min = 1.0;
  double mean = 1.0;

  bool operator==(const Aggregate&) const = default;
};

// Pair aggregates are empty when the report has no pairs.
struct Aggregates {
  std::optional<Aggregate> q_config;
  std::optional<Aggregate> q_corr;
  std::optional<Aggregate> q_cluster;
  std::optional<Aggregate> q_outlier;
  std::optional<Aggregate> q_ortho;

  bool operator==(const Aggregates&) const = default;
};

struct QualityReport {
  std::string dataset_name;
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t dropped_rows = 0;
  std::vector<FeatureScores> features;
  std::vector<PairScores> pairs;
  Aggregates aggregates;
  std::vector<Warning> warnings;
  CriterionConfig config;
  std::string version;

  bool operator==(const QualityReport&) const = default;
};

struct AssessOptions {
  std::string dataset_name = "data";
  std::size_t dropped_rows = 0;
  std::size_t threads = 0;  // 0: one per hardware thread
};

QualityReport assess(const DataMatrix& data, const CriterionConfig& cfg,
                     const AssessOptions& options = {});

inline constexpr const char* kVersion = "0.1.0";

}  // namespace regqa
