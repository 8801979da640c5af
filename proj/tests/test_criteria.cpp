#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "regqa/criteria.hpp"

using regqa::CriterionConfig;
using regqa::DataMatrix;
using regqa::Projection;

namespace {

CriterionConfig fast_config() {
  CriterionConfig cfg;
  cfg.bootstrap_b = 99;
  return cfg;
}

bool has_warning(const std::vector<regqa::Warning>& ws, const std::string& code) {
  return std::any_of(ws.begin(), ws.end(), [&](const auto& w) { return w.code == code; });
}

void expect_scores_in_range(const regqa::QualityReport& r) {
  for (const auto& f : r.features) {
    EXPECT_GE(f.q_config, 0.0);
    EXPECT_LE(f.q_config, 1.0);
  }
  for (const auto& p : r.pairs)
    for (double q : {p.q_corr, p.q_cluster, p.q_outlier, p.q_ortho}) {
      EXPECT_GE(q, 0.0);
      EXPECT_LE(q, 1.0);
      EXPECT_FALSE(std::isnan(q));
    }
}

}  // namespace

TEST(Sigmoids, BoundaryIdentities) {
  EXPECT_NEAR(regqa::sigmoid_v(0.0, 0.025), 0.99, 1e-12);
  EXPECT_NEAR(regqa::sigmoid_v(0.025, 0.025), 0.5, 1e-12);
  EXPECT_NEAR(regqa::sigmoid_v(0.05, 0.025), 0.01, 1e-12);
  EXPECT_NEAR(regqa::sigmoid_p(0.0, 0.5), 0.01, 1e-12);
  EXPECT_NEAR(regqa::sigmoid_p(0.5, 0.5), 0.5, 1e-12);
  EXPECT_NEAR(regqa::sigmoid_p(1.0, 0.5), 0.99, 1e-12);
  EXPECT_NEAR(regqa::outlier_score(1.0, 4.0), 0.99, 1e-12);
  EXPECT_NEAR(regqa::outlier_score(4.0, 4.0), 0.5, 1e-12);
  for (double tau : {0.01, 0.1, 0.3}) {
    EXPECT_NEAR(regqa::sigmoid_v(0.0, tau), 0.99, 1e-12);
    EXPECT_NEAR(regqa::sigmoid_v(tau, tau), 0.5, 1e-12);
    EXPECT_NEAR(regqa::sigmoid_p(tau, tau), 0.5, 1e-12);
  }
  EXPECT_NEAR(regqa::outlier_score(2.0, 2.0), 0.5, 1e-12);
  EXPECT_NEAR(regqa::outlier_score(1.0, 10.0), 0.99, 1e-12);
}

TEST(Sigmoids, Monotone) {
  double prev_v = 2, prev_p = -1, prev_o = 2;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const double v = regqa::sigmoid_v(t * 0.25, 0.025), p = regqa::sigmoid_p(t, 0.5),
                 o = regqa::outlier_score(1 + 20 * t, 4.0);
    EXPECT_LE(v, prev_v);
    EXPECT_GE(p, prev_p);
    EXPECT_LE(o, prev_o);
    prev_v = v;
    prev_p = p;
    prev_o = o;
  }
}

TEST(QCorr, Examples) {
  const std::vector<double> a{1, 2, 3, 4}, twice{2, 4, 6, 8}, orth{1, -1, -1, 1}, flat{3, 3, 3, 3};
  EXPECT_DOUBLE_EQ(regqa::q_corr(a, twice).q, 0.0);
  EXPECT_DOUBLE_EQ(regqa::q_corr(a, orth).q, 1.0);
  const auto z = regqa::q_corr(a, flat);
  EXPECT_EQ(z.q, 1.0);
  EXPECT_FALSE(z.r.has_value());
  EXPECT_TRUE(has_warning(z.warnings, "zero_variance"));
  EXPECT_THROW(regqa::q_corr(a, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(QCorrProperty, SymmetricAndAffineInvariant) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng() % 50;
    std::vector<double> a(n), b(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = g(rng);
      b[i] = 0.3 * a[i] + g(rng);
    }
    const double q = regqa::q_corr(a, b).q;
    EXPECT_NEAR(q, regqa::q_corr(b, a).q, 1e-12);
    for (double alpha : {-2.0, 0.1, 9.0}) {
      for (std::size_t i = 0; i < n; ++i) t[i] = alpha * a[i] - 4.0;
      EXPECT_NEAR(q, regqa::q_corr(t, b).q, 1e-12);
    }
  }
}

TEST(QConfig, Examples) {
  EXPECT_EQ(regqa::q_config(std::vector<std::size_t>{5, 100}), (std::vector<double>{0.05, 1.0}));
  EXPECT_EQ(regqa::q_config(std::vector<std::size_t>{7, 7, 7}), (std::vector<double>{1, 1, 1}));
  EXPECT_THROW(regqa::q_config(std::vector<std::size_t>{0, 3}), std::invalid_argument);
}

TEST(QConfigProperty, DuplicatingRowsChangesNothing) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng() % 30;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng() % 7);
      b[i] = static_cast<double>(rng() % 100);
    }
    auto cfg = fast_config();
    const auto r1 = regqa::assess(DataMatrix({"a", "b"}, {a, b}), cfg);
    auto a2 = a, b2 = b;
    a2.insert(a2.end(), a.begin(), a.end());
    b2.insert(b2.end(), b.begin(), b.end());
    const auto r2 = regqa::assess(DataMatrix({"a", "b"}, {a2, b2}), cfg);
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(r1.features[j].distinct_count, r2.features[j].distinct_count);
      EXPECT_EQ(r1.features[j].q_config, r2.features[j].q_config);
    }
  }
}

TEST(QCluster, TwoTightBlobsScoreLow) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0, 0.01);
  std::vector<double> x, y;
  for (int i = 0; i < 300; ++i) {
    const double c = i % 2 ? 0.9 : 0.1;
    x.push_back(c + g(rng));
    y.push_back(c + g(rng));
  }
  const auto s = regqa::q_cluster(Projection{x, y}, fast_config(), 1);
  EXPECT_GT(s.v_dip, 0.1);
  EXPECT_DOUBLE_EQ(s.p_dip, 1.0 / 100.0);
  EXPECT_LT(s.q, 0.02);
}

TEST(QCluster, UniformScoresHigh) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(400), y(400);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = u(rng);
    y[i] = u(rng);
  }
  EXPECT_GT(regqa::q_cluster(Projection{x, y}, fast_config(), 1).q, 0.9);
}

TEST(QCluster, TwoPointsAreDegenerate) {
  const std::vector<double> x{0, 1}, y{0, 1};
  const auto s = regqa::q_cluster(Projection{x, y}, fast_config(), 1);
  EXPECT_EQ(s.q, 1.0);
  EXPECT_TRUE(has_warning(s.warnings, "degenerate_cluster_sample"));
}

TEST(QCluster, SubsamplesAboveCap) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(300), y(300);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = u(rng);
    y[i] = u(rng);
  }
  auto cfg = fast_config();
  cfg.distance_cap = 100;
  const auto s = regqa::q_cluster(Projection{x, y}, cfg, 5);
  EXPECT_EQ(s.points_used, 100u);
  EXPECT_TRUE(has_warning(s.warnings, "distance_subsample"));
  EXPECT_EQ(s.v_dip, regqa::q_cluster(Projection{x, y}, cfg, 5).v_dip);
}

TEST(QOutlier, BlobPlusFarPoint) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 0.1);
  std::vector<double> x, y;
  for (int i = 0; i < 999; ++i) {
    x.push_back(u(rng));
    y.push_back(u(rng));
  }
  // About ten blob diameters away.
  x.push_back(1.5);
  y.push_back(1.5);
  const auto s = regqa::q_outlier(Projection{x, y}, CriterionConfig{});
  EXPECT_GT(s.nu, 10.0);
  EXPECT_LE(s.q, 0.01);
}

TEST(QOutlier, Degenerate) {
  const std::vector<double> same(20, 0.5);
  const auto dup = regqa::q_outlier(Projection{same, same}, CriterionConfig{});
  EXPECT_EQ(dup.q, 0.0);
  EXPECT_TRUE(has_warning(dup.warnings, "duplicate_degeneracy"));

  const std::vector<double> x{0, 1, 2}, y{0, 0, 1};
  const auto small = regqa::q_outlier(Projection{x, y}, CriterionConfig{});
  EXPECT_EQ(small.k, 2u);
  EXPECT_TRUE(has_warning(small.warnings, "outlier_k_clamped"));
  EXPECT_GE(small.q, 0.0);
  EXPECT_LE(small.q, 1.0);
}

TEST(QOrtho, LShapeScoresLow) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x, y;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = 0.05 * u(rng);
    x.push_back(i % 2 ? a : b);
    y.push_back(i % 2 ? b : a);
  }
  EXPECT_LT(regqa::q_ortho(Projection{x, y}, CriterionConfig{}).q, 0.1);
}

TEST(QOrtho, EqualSpreadEverywhereClampsToOne) {
  // A full lattice: every band holds whole lattice rows, so the in-band and
  // out-of-band spreads of the other coordinate coincide.
  std::vector<double> x, y;
  for (int i = 0; i < 25; ++i)
    for (int k = 0; k < 25; ++k) {
      x.push_back(i / 24.0);
      y.push_back(k / 24.0);
    }
  const auto s = regqa::q_ortho(Projection{x, y}, CriterionConfig{});
  EXPECT_NEAR(s.q, 1.0, 1e-12);
  EXPECT_NEAR(s.e_in, s.e_out, 1e-12);
}

TEST(QOrtho, RatioIsClampedAndMinimised) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(200), y(200);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = trial % 2 ? u(rng) * u(rng) : u(rng);
    }
    const auto s = regqa::q_ortho(Projection{x, y}, CriterionConfig{});
    EXPECT_LE(s.q, 1.0);
    EXPECT_GE(s.q, 0.0);
    if (s.q < 1.0) EXPECT_NEAR(s.q, s.e_out / s.e_in, 1e-12);
    // Swapping the columns only swaps the orientation.
    EXPECT_EQ(s.q, regqa::q_ortho(Projection{y, x}, CriterionConfig{}).q);
  }
}

TEST(QOrtho, NoValidBand) {
  const std::vector<double> x{0, 0.5, 1, 0.2, 0.7, 0.3}, y{0, 1, 0, 1, 0, 1};
  const auto s = regqa::q_ortho(Projection{x, y}, CriterionConfig{});
  EXPECT_EQ(s.q, 1.0);
  EXPECT_TRUE(has_warning(s.warnings, "no_valid_band"));
}

TEST(Config, Validation) {
  CriterionConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  auto bad = cfg;
  bad.tau_outlier = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.tau_cluster_2 = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.tau_ortho = 0.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.tau_cluster_1 = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.k_outlier = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.bootstrap_b = 0;
  EXPECT_THROW(regqa::assess(DataMatrix({"a"}, {{1, 2}}), bad), std::invalid_argument);
}

TEST(Assess, StructureAndAggregates) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> cols(4, std::vector<double>(60));
  for (auto& c : cols)
    for (auto& v : c) v = u(rng);
  const auto r = regqa::assess(DataMatrix({"a", "b", "c", "d"}, cols), fast_config());
  EXPECT_EQ(r.n, 60u);
  EXPECT_EQ(r.p, 4u);
  EXPECT_EQ(r.features.size(), 4u);
  ASSERT_EQ(r.pairs.size(), 6u);
  EXPECT_EQ(r.pairs[0].x, "a");
  EXPECT_EQ(r.pairs[0].y, "b");
  EXPECT_EQ(r.pairs[5].x, "c");
  EXPECT_EQ(r.pairs[5].y, "d");
  double mn = 1, sum = 0;
  for (const auto& p : r.pairs) {
    mn = std::min(mn, p.q_ortho);
    sum += p.q_ortho;
  }
  ASSERT_TRUE(r.aggregates.q_ortho.has_value());
  EXPECT_DOUBLE_EQ(r.aggregates.q_ortho->min, mn);
  EXPECT_NEAR(r.aggregates.q_ortho->mean, sum / 6, 1e-15);
  EXPECT_EQ(r.config, fast_config());
  EXPECT_EQ(r.version, regqa::kVersion);
  expect_scores_in_range(r);
}

TEST(Degenerate, ConstantColumn) {
  const auto r = regqa::assess(DataMatrix({"a", "k", "b"}, {{1, 2, 3, 4}, {5, 5, 5, 5}, {4, 1, 3, 2}}), fast_config());
  EXPECT_TRUE(has_warning(r.warnings, "constant_column"));
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].x, "a");
  EXPECT_EQ(r.pairs[0].y, "b");
  EXPECT_EQ(r.features[1].distinct_count, 1u);
  EXPECT_DOUBLE_EQ(r.features[1].q_config, 0.25);
  expect_scores_in_range(r);
}

TEST(Degenerate, AllDuplicateRows) {
  const std::vector<double> a(30, 1.0), b(30, 2.0);
  const auto r = regqa::assess(DataMatrix({"a", "b"}, {a, b}), fast_config());
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_FALSE(r.aggregates.q_corr.has_value());
  EXPECT_TRUE(has_warning(r.warnings, "constant_column"));
  expect_scores_in_range(r);

  // Duplicated but not constant: 90% of the rows are one point.
  std::vector<double> x(30, 0.5), y(30, 0.5);
  x[0] = 0;
  y[1] = 1;
  const auto d = regqa::assess(DataMatrix({"x", "y"}, {x, y}), fast_config());
  ASSERT_EQ(d.pairs.size(), 1u);
  EXPECT_EQ(d.pairs[0].q_outlier, 0.0);
  EXPECT_FALSE(d.pairs[0].diagnostics.nu_outlier.has_value());
  EXPECT_TRUE(has_warning(d.warnings, "duplicate_degeneracy"));
  expect_scores_in_range(d);
}

TEST(Degenerate, TwoRows) {
  const auto r = regqa::assess(DataMatrix({"a", "b"}, {{0, 1}, {1, 0}}), fast_config());
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].q_cluster, 1.0);
  EXPECT_TRUE(has_warning(r.warnings, "degenerate_cluster_sample"));
  EXPECT_TRUE(has_warning(r.warnings, "outlier_k_clamped"));
  EXPECT_TRUE(has_warning(r.warnings, "no_valid_band"));
  EXPECT_DOUBLE_EQ(r.pairs[0].q_corr, 0.0);
  for (const auto& w : r.warnings)
    if (w.code == "degenerate_cluster_sample") EXPECT_EQ(w.features, (std::vector<std::string>{"a", "b"}));
  expect_scores_in_range(r);
}

TEST(Degenerate, SingleColumn) {
  const auto r = regqa::assess(DataMatrix({"only"}, {{3, 1, 2, 2}}), fast_config());
  ASSERT_EQ(r.features.size(), 1u);
  EXPECT_EQ(r.features[0].distinct_count, 3u);
  EXPECT_EQ(r.features[0].q_config, 1.0);
  EXPECT_TRUE(r.pairs.empty());
  ASSERT_TRUE(r.aggregates.q_config.has_value());
  EXPECT_FALSE(r.aggregates.q_ortho.has_value());
  expect_scores_in_range(r);
}

TEST(Degenerate, DroppedRowsWarn) {
  regqa::AssessOptions opt;
  opt.dropped_rows = 3;
  const auto r = regqa::assess(DataMatrix({"a"}, {{1, 2}}), fast_config(), opt);
  EXPECT_EQ(r.dropped_rows, 3u);
  EXPECT_TRUE(has_warning(r.warnings, "rows_dropped"));
}

TEST(AssessProperty, ScoresInRangeUnderFuzzing) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng() % 40, p = 1 + rng() % 4;
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols(p, std::vector<double>(n));
    for (std::size_t j = 0; j < p; ++j) {
      names.push_back("f" + std::to_string(j));
      const int style = static_cast<int>(rng() % 4);
      for (auto& v : cols[j]) {
        switch (style) {
          case 0: v = u(rng); break;
          case 1: v = static_cast<double>(rng() % 3); break;   // coarse levels
          case 2: v = 7.0; break;                              // constant
          default: v = std::pow(u(rng), 8) * 1e6 - 3; break;   // heavy skew
        }
      }
    }
    auto cfg = fast_config();
    cfg.bootstrap_b = 19;
    expect_scores_in_range(regqa::assess(DataMatrix(names, cols), cfg));
  }
}

TEST(AssessProperty, DeterministicAcrossThreadCounts) {
  std::mt19937_64 rng(18);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> cols(5, std::vector<double>(150));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (auto& v : cols[j]) v = j == 3 ? std::round(g(rng)) : g(rng);
  const DataMatrix data({"a", "b", "c", "d", "e"}, cols);
  auto cfg = fast_config();
  cfg.distance_cap = 100;  // exercises the seeded subsample too
  regqa::AssessOptions opt;
  opt.threads = 1;
  const auto base = regqa::assess(data, cfg, opt);
  for (std::size_t t : {2u, 3u, 8u}) {
    opt.threads = t;
    EXPECT_EQ(base, regqa::assess(data, cfg, opt)) << "threads=" << t;
  }
}
