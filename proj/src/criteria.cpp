#include "regqa/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "parallel.hpp"
#include "regqa/dip.hpp"

namespace regqa {

namespace {

const double kLn99 = std::log(99.0);

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double spread(std::span<const double> values, SpreadMeasure measure) {
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double acc = 0.0;
  if (measure == SpreadMeasure::standard_deviation) {
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / n);
  }
  for (double v : values) acc += std::abs(v - mean);
  return acc / n;
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  a.min = *std::min_element(values.begin(), values.end());
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return a;
}

}  // namespace

void CriterionConfig::validate() const {
  require(std::isfinite(tau_cluster_1) && tau_cluster_1 > 0.0, "tau_cluster_1 must be > 0");
  require(tau_cluster_2 > 0.0 && tau_cluster_2 < 1.0, "tau_cluster_2 must lie in (0, 1)");
  require(std::isfinite(tau_outlier) && tau_outlier > 1.0, "tau_outlier must be > 1");
  require(tau_ortho > 0.0 && tau_ortho < 0.5, "tau_ortho must lie in (0, 0.5)");
  require(k_outlier >= 1, "k_outlier must be positive");
  require(bootstrap_b >= 1, "bootstrap_b must be positive");
  require(std::isfinite(ortho_grid_step) && ortho_grid_step > 0.0, "ortho_grid_step must be > 0");
  require(std::isfinite(distinct_tol) && distinct_tol >= 0.0, "distinct_tol must be >= 0");
  require(distance_cap >= 2, "distance_cap must be at least 2");
  require(ortho_min_band >= 1, "ortho_min_band must be positive");
}

// a1 = ln(99) / tau1, so the map is 0.99 at v = 0 and 0.01 at v = 2 tau1.
double sigmoid_v(double v_dip, double tau1) {
  return 1.0 - logistic(kLn99 / tau1 * (v_dip - tau1));
}

double sigmoid_p(double p_dip, double tau2) {
  return logistic(kLn99 / tau2 * (p_dip - tau2));
}

// a3 = -ln(99) / (1 - tau), so the map is 0.99 at nu = 1.
double outlier_score(double nu, double tau_outlier) {
  const double a3 = -kLn99 / (1.0 - tau_outlier);
  return 1.0 - logistic(a3 * (nu - tau_outlier));
}

CorrScore q_corr(std::span<const double> a, std::span<const double> b) {
  CorrScore s;
  s.r = pearson_r(a, b);
  if (!s.r) {
    s.q = 1.0;
    s.warnings.push_back({"zero_variance", "correlation undefined for a zero-variance column; q_corr set to 1", {}});
    return s;
  }
  s.q = 1.0 - std::abs(*s.r);
  return s;
}

ClusterScore q_cluster(Projection points, const CriterionConfig& cfg, std::uint64_t pair_seed) {
  ClusterScore s;
  if (points.size() < 3) {
    s.points_used = points.size();
    s.warnings.push_back({"degenerate_cluster_sample",
                          "a single pairwise distance carries no modality evidence; q_cluster set to 1", {}});
    return s;
  }

  auto distances = pairwise_distances(points, cfg.distance_cap, pair_seed);
  s.points_used = distances.points_used;
  if (distances.points_used < points.size())
    s.warnings.push_back({"distance_subsample",
                          "pairwise distances computed on a seeded subsample of " +
                              std::to_string(distances.points_used) + " points",
                          {}});

  auto& d = distances.d;
  std::sort(d.begin(), d.end());
  s.v_dip = dip_statistic_sorted(d).v_dip;
  s.p_dip = dip_pvalue(s.v_dip, d.size(), cfg.bootstrap_b, cfg.seed);
  s.q = std::max(sigmoid_v(s.v_dip, cfg.tau_cluster_1), sigmoid_p(s.p_dip, cfg.tau_cluster_2));
  return s;
}

std::vector<double> q_config(std::span<const std::size_t> counts) {
  std::vector<double> q;
  if (counts.empty()) return q;
  const auto max_count = *std::max_element(counts.begin(), counts.end());
  q.reserve(counts.size());
  for (auto c : counts) {
    if (c < 1) throw std::invalid_argument("q_config: distinct counts must be positive");
    q.push_back(static_cast<double>(c) / static_cast<double>(max_count));
  }
  return q;
}

OutlierScore q_outlier(Projection points, const CriterionConfig& cfg) {
  OutlierScore s;
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("q_outlier: need at least 2 points");
  s.k = cfg.k_outlier;
  if (s.k >= n) {
    s.k = n - 1;
    s.warnings.push_back({"outlier_k_clamped",
                          "k reduced to " + std::to_string(s.k) + " because only " + std::to_string(n) +
                              " points are available",
                          {}});
  }

  const auto knn = knn_distances(points, s.k);
  const double d_max = *std::max_element(knn.d.begin(), knn.d.end());
  const double d_q90 = quantile(knn.d, 0.9);
  if (d_q90 <= 0.0) {
    s.q = 0.0;
    s.nu = std::numeric_limits<double>::infinity();
    s.warnings.push_back({"duplicate_degeneracy",
                          "0.9 quantile of k-NN distances is zero (at least 90% duplicated points); "
                          "q_outlier set to 0",
                          {}});
    return s;
  }
  s.nu = d_max / d_q90;
  s.q = outlier_score(s.nu, cfg.tau_outlier);
  return s;
}

OrthoScore q_ortho(Projection points, const CriterionConfig& cfg) {
  OrthoScore s;
  const std::size_t n = points.size();
  const double tau = cfg.tau_ortho;
  const auto centers = static_cast<std::size_t>(std::floor((1.0 - 2.0 * tau) / cfg.ortho_grid_step + 1e-9)) + 1;

  bool found = false;
  std::vector<double> in, out;
  in.reserve(n);
  out.reserve(n);
  for (int axis = 0; axis < 2; ++axis) {
    const auto band_values = axis == 0 ? points.y : points.x;
    const auto spread_values = axis == 0 ? points.x : points.y;
    for (std::size_t i = 0; i < centers; ++i) {
      const double c = tau + static_cast<double>(i) * cfg.ortho_grid_step;
      in.clear();
      out.clear();
      for (std::size_t r = 0; r < n; ++r) {
        const double b = band_values[r];
        (b >= c - tau && b <= c + tau ? in : out).push_back(spread_values[r]);
      }
      if (in.size() < cfg.ortho_min_band || out.size() < cfg.ortho_min_band) continue;

      const double e_in = spread(in, cfg.ortho_spread);
      const double e_out = spread(out, cfg.ortho_spread);
      double ratio = 1.0;
      if (e_in > 0.0)
        ratio = std::min(1.0, e_out / e_in);
      if (!found || ratio < s.q) {
        found = true;
        s.q = ratio;
        s.band_center = c;
        s.e_in = e_in;
        s.e_out = e_out;
        s.band_axis = axis;
      }
    }
  }
  if (!found) {
    s.q = 1.0;
    s.warnings.push_back({"no_valid_band",
                          "no band centre leaves enough points inside and outside the band; q_ortho set to 1",
                          {}});
  }
  return s;
}

QualityReport assess(const DataMatrix& data, const CriterionConfig& cfg, const AssessOptions& options) {
  cfg.validate();

  QualityReport report;
  report.dataset_name = options.dataset_name;
  report.n = data.rows();
  report.p = data.cols();
  report.dropped_rows = options.dropped_rows;
  report.config = cfg;
  report.version = kVersion;
  const auto& names = data.column_names();

  if (options.dropped_rows > 0)
    report.warnings.push_back({"rows_dropped",
                               std::to_string(options.dropped_rows) +
                                   " rows with missing or unparsable cells were dropped",
                               {}});

  std::vector<std::size_t> counts(data.cols());
  for (std::size_t j = 0; j < data.cols(); ++j) counts[j] = distinct_count(data.column(j), cfg.distinct_tol);
  const auto config_scores = q_config(counts);
  for (std::size_t j = 0; j < data.cols(); ++j)
    report.features.push_back({j, names[j], counts[j], config_scores[j]});

  const auto normalized = normalize(data);
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (normalized.is_constant(j)) {
      report.warnings.push_back({"constant_column",
                                 "column '" + names[j] + "' is constant and excluded from pair criteria",
                                 {names[j]}});
    } else {
      active.push_back(j);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pair_index;
  for (std::size_t a = 0; a < active.size(); ++a)
    for (std::size_t b = a + 1; b < active.size(); ++b) pair_index.emplace_back(active[a], active[b]);

  // Fill the shared bootstrap null once instead of racing for it per pair.
  const std::size_t points_used = std::min(data.rows(), cfg.distance_cap);
  if (!pair_index.empty() && points_used >= 3)
    uniform_null_dips(points_used * (points_used - 1) / 2, cfg.bootstrap_b, cfg.seed);

  std::vector<PairScores> pairs(pair_index.size());
  std::vector<std::vector<Warning>> pair_warnings(pair_index.size());
  const std::size_t workers = options.threads ? options.threads : detail::default_workers();
  detail::parallel_chunks(pair_index.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto [j, l] = pair_index[k];
      const Projection projection{normalized.column(j), normalized.column(l)};
      const auto corr = q_corr(data.column(j), data.column(l));
      const auto cluster = q_cluster(projection, cfg, mix_seed(mix_seed(cfg.seed, j), l));
      const auto outlier = q_outlier(projection, cfg);
      const auto ortho = q_ortho(projection, cfg);

      auto& ps = pairs[k];
      ps.j = j;
      ps.l = l;
      ps.x = names[j];
      ps.y = names[l];
      ps.q_corr = corr.q;
      ps.q_cluster = cluster.q;
      ps.q_outlier = outlier.q;
      ps.q_ortho = ortho.q;
      ps.diagnostics.r = corr.r;
      ps.diagnostics.v_dip = cluster.v_dip;
      ps.diagnostics.p_dip = cluster.p_dip;
      if (std::isfinite(outlier.nu)) ps.diagnostics.nu_outlier = outlier.nu;
      ps.diagnostics.band_center = ortho.band_center;
      ps.diagnostics.e_in = ortho.e_in;
      ps.diagnostics.e_out = ortho.e_out;
      ps.diagnostics.band_axis = ortho.band_axis;

      auto& w = pair_warnings[k];
      for (const auto* list : {&corr.warnings, &cluster.warnings, &outlier.warnings, &ortho.warnings})
        for (auto warning : *list) {
          warning.features = {names[j], names[l]};
          w.push_back(std::move(warning));
        }
    }
  });
  report.pairs = std::move(pairs);
  for (auto& w : pair_warnings)
    for (auto& warning : w) report.warnings.push_back(std::move(warning));

  std::vector<double> values;
  for (const auto& f : report.features) values.push_back(f.q_config);
  report.aggregates.q_config = aggregate(values);
  if (!report.pairs.empty()) {
    auto collect = [&](double PairScores::*field) {
      values.clear();
      for (const auto& ps : report.pairs) values.push_back(ps.*field);
      return aggregate(values);
    };
    report.aggregates.q_corr = collect(&PairScores::q_corr);
    report.aggregates.q_cluster = collect(&PairScores::q_cluster);
    report.aggregates.q_outlier = collect(&PairScores::q_outlier);
    report.aggregates.q_ortho = collect(&PairScores::q_ortho);
  }
  return report;
}

}  // namespace regqa
