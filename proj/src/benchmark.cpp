#include "regqa/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace regqa {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Normal draw restricted to [lo, hi] by rejection.
double truncated_normal(Rng& rng, double mean, double sd, double lo, double hi) {
  std::normal_distribution<double> normal(mean, sd);
  for (;;) {
    const double v = normal(rng);
    if (v >= lo && v <= hi) return v;
  }
}

DataMatrix make_matrix(std::vector<double> x1, std::vector<double> x2) {
  return DataMatrix({"x1", "x2"}, {std::move(x1), std::move(x2)});
}

constexpr std::array<ReferenceRow, 6> kReference = {{
    {BenchmarkKind::completeness, 'a', {0.99, 0.99, 1.00, 0.98, 1.00}, -1, {false, false, false, false, false}},
    {BenchmarkKind::correlation, 'b', {0.00, 0.99, 1.00, 0.94, 1.00}, 0, {false, false, false, false, false}},
    {BenchmarkKind::clusters, 'c', {0.98, 0.01, 1.00, 0.63, 1.00}, 1, {false, false, false, true, false}},
    {BenchmarkKind::configuration, 'd', {0.94, 0.03, 0.00, 0.96, 1.00}, 2, {false, true, false, false, false}},
    {BenchmarkKind::outliers, 'e', {0.49, 0.98, 1.00, 0.00, 0.73}, 3, {true, false, false, false, false}},
    {BenchmarkKind::orthogonality, 'f', {0.39, 0.99, 1.00, 0.97, 0.01}, 4, {true, false, false, false, false}},
}};

}  // namespace

std::string_view to_string(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::completeness: return "completeness";
    case BenchmarkKind::correlation: return "correlation";
    case BenchmarkKind::clusters: return "clusters";
    case BenchmarkKind::configuration: return "configuration";
    case BenchmarkKind::outliers: return "outliers";
    case BenchmarkKind::orthogonality: return "orthogonality";
  }
  return "unknown";
}

std::optional<BenchmarkKind> parse_benchmark_kind(std::string_view name) {
  for (auto kind : kAllBenchmarkKinds)
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

DataMatrix generate(const BenchmarkSpec& spec) {
  if (spec.n < 50) throw std::invalid_argument("benchmark datasets need n >= 50");
  const auto& shape = spec.shape;
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  std::vector<double> x1(n), x2(n);

  switch (spec.kind) {
    case BenchmarkKind::completeness:
      for (std::size_t i = 0; i < n; ++i) {
        x1[i] = uniform(rng, 0.0, 1.0);
        x2[i] = uniform(rng, 0.0, 1.0);
      }
      break;

    case BenchmarkKind::correlation: {
      const double noise = shape.correlation_noise;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = uniform(rng, 0.05, 1.0);
        const double offset = truncated_normal(rng, 0.0, noise, -4.0 * noise, 4.0 * noise) / std::sqrt(2.0);
        x1[i] = t - offset;
        x2[i] = t + offset;
      }
      break;
    }

    case BenchmarkKind::clusters: {
      const std::array<double, 2> centre = {shape.cluster_low, shape.cluster_high};
      for (std::size_t i = 0; i < n; ++i) {
        const double cx = centre[i % 2];
        const double cy = centre[(i / 2) % 2];
        x1[i] = truncated_normal(rng, cx, shape.cluster_sigma, 0.0, 1.0);
        x2[i] = truncated_normal(rng, cy, shape.cluster_sigma, 0.0, 1.0);
      }
      break;
    }

    case BenchmarkKind::configuration: {
      std::uniform_int_distribution<std::size_t> level(0, shape.configuration_levels.size() - 1);
      for (std::size_t i = 0; i < n; ++i) {
        x1[i] = uniform(rng, 0.0, 1.0);
        x2[i] = shape.configuration_levels[level(rng)];
      }
      break;
    }

    case BenchmarkKind::outliers: {
      const double side = shape.outlier_blob_side;
      const std::size_t group = std::min(shape.outlier_count, n / 10);
      for (std::size_t i = 0; i + group < n; ++i) {
        x1[i] = uniform(rng, 0.0, side);
        x2[i] = uniform(rng, 0.0, side);
      }
      // The group sits at (4 d, 4 d) for blob diagonal d, far enough that one
      // band of the orthogonality criterion holds the whole blob.
      const double centre = shape.outlier_displacement * side * std::sqrt(2.0);
      const double half_x = shape.outlier_extent[0] * side / 2.0;
      const double half_y = shape.outlier_extent[1] * side / 2.0;
      for (std::size_t i = n - group; i < n; ++i) {
        x1[i] = centre + uniform(rng, -half_x, half_x);
        x2[i] = centre + uniform(rng, -half_y, half_y);
      }
      break;
    }

    case BenchmarkKind::orthogonality: {
      const double w = shape.ortho_arm_width;
      for (std::size_t i = 0; i < n; ++i) {
        if (i % 2 == 0) {
          x1[i] = uniform(rng, 0.0, 1.0);
          x2[i] = uniform(rng, 0.0, w);
        } else {
          x1[i] = uniform(rng, 0.0, w);
          x2[i] = uniform(rng, 0.0, 1.0);
        }
      }
      break;
    }
  }
  return make_matrix(std::move(x1), std::move(x2));
}

std::span<const ReferenceRow> reference_table() { return kReference; }

double reference_tolerance(double printed) {
  return (printed <= 0.03 || printed >= 0.94) ? 0.05 : 0.25;
}

std::array<double, 5> table_scores(const QualityReport& report) {
  if (report.pairs.size() != 1)
    throw std::invalid_argument("table_scores expects a report with exactly one feature pair");
  const auto& pair = report.pairs.front();
  double config_min = 1.0;
  for (const auto& f : report.features) config_min = std::min(config_min, f.q_config);
  return {pair.q_corr, pair.q_cluster, config_min, pair.q_outlier, pair.q_ortho};
}

std::vector<BenchRow> run_bench(std::uint64_t seed, std::size_t reps, const CriterionConfig& cfg, std::size_t n,
                                std::size_t threads) {
  if (reps < 1) throw std::invalid_argument("run_bench: reps must be positive");
  std::vector<BenchRow> rows;
  for (const auto& ref : reference_table()) {
    std::vector<std::array<double, 5>> scores;
    for (std::size_t r = 0; r < reps; ++r) {
      BenchmarkSpec spec;
      spec.kind = ref.kind;
      spec.n = n;
      spec.seed = seed + r;
      AssessOptions options;
      options.dataset_name = std::string(to_string(ref.kind));
      options.threads = threads;
      scores.push_back(table_scores(assess(generate(spec), cfg, options)));
    }
    BenchRow row{ref.kind, ref.label, {}};
    for (std::size_t c = 0; c < 5; ++c) {
      double sum = 0.0;
      for (const auto& s : scores) sum += s[c];
      const double mean = sum / static_cast<double>(reps);
      double ss = 0.0;
      for (const auto& s : scores) ss += (s[c] - mean) * (s[c] - mean);
      auto& cell = row.cells[c];
      cell.mean = mean;
      cell.sd = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1)) : 0.0;
      cell.within_tolerance = std::abs(mean - ref.printed[c]) <= reference_tolerance(ref.printed[c]) + 1e-12;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace regqa
