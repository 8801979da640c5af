#include "regqa/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace regqa {

using nlohmann::json;

namespace {

double round6(double v, Precision precision) {
  if (precision == Precision::full || !std::isfinite(v)) return v;
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

json optional_number(const std::optional<double>& v, Precision precision) {
  return v ? json(round6(*v, precision)) : json(nullptr);
}

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json warning_json(const Warning& w) {
  return {{"code", w.code}, {"message", w.message}, {"features", w.features}};
}

Warning warning_from(const json& j) {
  return {j.at("code").get<std::string>(), j.at("message").get<std::string>(),
          j.at("features").get<std::vector<std::string>>()};
}

const char* spread_name(SpreadMeasure s) {
  return s == SpreadMeasure::standard_deviation ? "standard_deviation" : "mean_absolute_deviation";
}

std::string safe_name(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

}  // namespace

json to_json(const CriterionConfig& cfg) {
  return {{"tau_cluster_1", cfg.tau_cluster_1},
          {"tau_cluster_2", cfg.tau_cluster_2},
          {"tau_outlier", cfg.tau_outlier},
          {"tau_ortho", cfg.tau_ortho},
          {"k_outlier", cfg.k_outlier},
          {"bootstrap_b", cfg.bootstrap_b},
          {"seed", cfg.seed},
          {"ortho_grid_step", cfg.ortho_grid_step},
          {"distinct_tol", cfg.distinct_tol},
          {"distance_cap", cfg.distance_cap},
          {"ortho_min_band", cfg.ortho_min_band},
          {"ortho_spread", spread_name(cfg.ortho_spread)}};
}

CriterionConfig config_from_json(const json& j) {
  CriterionConfig cfg;
  cfg.tau_cluster_1 = j.at("tau_cluster_1").get<double>();
  cfg.tau_cluster_2 = j.at("tau_cluster_2").get<double>();
  cfg.tau_outlier = j.at("tau_outlier").get<double>();
  cfg.tau_ortho = j.at("tau_ortho").get<double>();
  cfg.k_outlier = j.at("k_outlier").get<std::size_t>();
  cfg.bootstrap_b = j.at("bootstrap_b").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.ortho_grid_step = j.at("ortho_grid_step").get<double>();
  cfg.distinct_tol = j.at("distinct_tol").get<double>();
  cfg.distance_cap = j.at("distance_cap").get<std::size_t>();
  cfg.ortho_min_band = j.at("ortho_min_band").get<std::size_t>();
  const auto spread = j.at("ortho_spread").get<std::string>();
  if (spread == "standard_deviation")
    cfg.ortho_spread = SpreadMeasure::standard_deviation;
  else if (spread == "mean_absolute_deviation")
    cfg.ortho_spread = SpreadMeasure::mean_absolute_deviation;
  else
    throw std::invalid_argument("unknown ortho_spread '" + spread + "'");
  return cfg;
}

json to_json(const QualityReport& report, Precision precision) {
  auto num = [&](double v) { return round6(v, precision); };

  json features = json::array();
  for (const auto& f : report.features)
    features.push_back({{"j", f.j}, {"name", f.name}, {"distinct_count", f.distinct_count}, {"q_config", num(f.q_config)}});

  json pairs = json::array();
  for (const auto& p : report.pairs) {
    const auto& d = p.diagnostics;
    json diag = {{"r", optional_number(d.r, precision)},
                 {"v_dip", num(d.v_dip)},
                 {"p_dip", num(d.p_dip)},
                 {"nu_outlier", optional_number(d.nu_outlier, precision)},
                 {"band_center", num(d.band_center)},
                 {"e_in", num(d.e_in)},
                 {"e_out", num(d.e_out)},
                 {"band_axis", d.band_axis}};
    pairs.push_back({{"j", p.j},
                     {"l", p.l},
                     {"x", p.x},
                     {"y", p.y},
                     {"q_corr", num(p.q_corr)},
                     {"q_cluster", num(p.q_cluster)},
                     {"q_outlier", num(p.q_outlier)},
                     {"q_ortho", num(p.q_ortho)},
                     {"diagnostics", std::move(diag)}});
  }

  auto agg = [&](const std::optional<Aggregate>& a) {
    return a ? json{{"min", num(a->min)}, {"mean", num(a->mean)}} : json(nullptr);
  };
  const auto& a = report.aggregates;
  json aggregates = {{"q_config", agg(a.q_config)},
                     {"q_corr", agg(a.q_corr)},
                     {"q_cluster", agg(a.q_cluster)},
                     {"q_outlier", agg(a.q_outlier)},
                     {"q_ortho", agg(a.q_ortho)}};

  json warnings = json::array();
  for (const auto& w : report.warnings) warnings.push_back(warning_json(w));

  return {{"dataset", {{"name", report.dataset_name}, {"n", report.n}, {"p", report.p}, {"dropped_rows", report.dropped_rows}}},
          {"config", to_json(report.config)},
          {"features", std::move(features)},
          {"pairs", std::move(pairs)},
          {"aggregates", std::move(aggregates)},
          {"warnings", std::move(warnings)},
          {"version", report.version}};
}

QualityReport report_from_json(const json& j) {
  QualityReport r;
  const auto& ds = j.at("dataset");
  r.dataset_name = ds.at("name").get<std::string>();
  r.n = ds.at("n").get<std::size_t>();
  r.p = ds.at("p").get<std::size_t>();
  r.dropped_rows = ds.at("dropped_rows").get<std::size_t>();
  r.config = config_from_json(j.at("config"));

  for (const auto& f : j.at("features"))
    r.features.push_back({f.at("j").get<std::size_t>(), f.at("name").get<std::string>(),
                          f.at("distinct_count").get<std::size_t>(), f.at("q_config").get<double>()});

  for (const auto& p : j.at("pairs")) {
    PairScores s;
    s.j = p.at("j").get<std::size_t>();
    s.l = p.at("l").get<std::size_t>();
    s.x = p.at("x").get<std::string>();
    s.y = p.at("y").get<std::string>();
    s.q_corr = p.at("q_corr").get<double>();
    s.q_cluster = p.at("q_cluster").get<double>();
    s.q_outlier = p.at("q_outlier").get<double>();
    s.q_ortho = p.at("q_ortho").get<double>();
    const auto& d = p.at("diagnostics");
    s.diagnostics.r = optional_from(d.at("r"));
    s.diagnostics.v_dip = d.at("v_dip").get<double>();
    s.diagnostics.p_dip = d.at("p_dip").get<double>();
    s.diagnostics.nu_outlier = optional_from(d.at("nu_outlier"));
    s.diagnostics.band_center = d.at("band_center").get<double>();
    s.diagnostics.e_in = d.at("e_in").get<double>();
    s.diagnostics.e_out = d.at("e_out").get<double>();
    s.diagnostics.band_axis = d.at("band_axis").get<int>();
    r.pairs.push_back(std::move(s));
  }

  auto agg = [](const json& a) -> std::optional<Aggregate> {
    if (a.is_null()) return std::nullopt;
    return Aggregate{a.at("min").get<double>(), a.at("mean").get<double>()};
  };
  const auto& a = j.at("aggregates");
  r.aggregates.q_config = agg(a.at("q_config"));
  r.aggregates.q_corr = agg(a.at("q_corr"));
  r.aggregates.q_cluster = agg(a.at("q_cluster"));
  r.aggregates.q_outlier = agg(a.at("q_outlier"));
  r.aggregates.q_ortho = agg(a.at("q_ortho"));

  for (const auto& w : j.at("warnings")) r.warnings.push_back(warning_from(w));
  r.version = j.at("version").get<std::string>();
  return r;
}

std::string emit_json(const QualityReport& report, Precision precision) {
  return to_json(report, precision).dump(2) + "\n";
}

QualityReport parse_report(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

void write_pair_csv(std::ostream& out, const QualityReport& report, Precision precision) {
  std::ostringstream s;
  s << std::setprecision(precision == Precision::full ? 17 : 15);
  auto num = [&](double v) -> std::ostringstream& {
    s << round6(v, precision);
    return s;
  };
  auto opt = [&](const std::optional<double>& v) {
    if (v) num(*v);
  };
  s << "x,y,q_corr,q_cluster,q_outlier,q_ortho,r,v_dip,p_dip,nu_outlier,band_center,e_in,e_out,band_axis\n";
  for (const auto& p : report.pairs) {
    const auto& d = p.diagnostics;
    s << p.x << ',' << p.y << ',';
    num(p.q_corr) << ',';
    num(p.q_cluster) << ',';
    num(p.q_outlier) << ',';
    num(p.q_ortho) << ',';
    opt(d.r);
    s << ',';
    num(d.v_dip) << ',';
    num(d.p_dip) << ',';
    opt(d.nu_outlier);
    s << ',';
    num(d.band_center) << ',';
    num(d.e_in) << ',';
    num(d.e_out) << ',' << d.band_axis << '\n';
  }
  out << s.str();
}

std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir, const DataMatrix& data,
                                                   const QualityReport& report) {
  std::filesystem::create_directories(dir);
  const auto norm = normalize(data);
  std::vector<std::filesystem::path> written;

  auto open = [&](const std::string& file) {
    written.push_back(dir / file);
    std::ofstream out(written.back());
    if (!out) throw std::runtime_error("cannot write " + written.back().string());
    out << std::setprecision(17);
    return out;
  };

  for (const auto& f : report.features) {
    auto out = open("hist_" + safe_name(f.name) + ".txt");
    for (double v : norm.column(f.j)) out << v << '\n';
  }
  for (const auto& p : report.pairs) {
    auto out = open("scatter_" + safe_name(p.x) + "_" + safe_name(p.y) + ".txt");
    const auto x = norm.column(p.j);
    const auto y = norm.column(p.l);
    for (std::size_t i = 0; i < x.size(); ++i) out << x[i] << ' ' << y[i] << '\n';
  }
  return written;
}

void print_bench(std::ostream& out, const std::vector<BenchRow>& rows, std::size_t reps) {
  std::ostringstream s;
  s << std::fixed;
  s << "row  " << std::left;
  for (auto name : kTableColumns) s << std::setw(reps > 1 ? 20 : 14) << name;
  s << "status\n";
  const auto refs = reference_table();
  std::size_t failed = 0;
  for (const auto& row : rows) {
    s << row.label << "    ";
    bool ok = true;
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      const auto& cell = row.cells[c];
      std::ostringstream v;
      v << std::fixed << std::setprecision(2) << cell.mean;
      if (reps > 1) v << " +- " << cell.sd;
      v << (cell.within_tolerance ? "" : " !");
      s << std::setw(reps > 1 ? 20 : 14) << v.str();
      ok = ok && cell.within_tolerance;
    }
    s << (ok ? "PASS" : "FAIL") << '\n';
    if (!ok) ++failed;
  }
  s << "reference:\n";
  for (const auto& ref : refs) {
    s << ref.label << "    ";
    for (double v : ref.printed) {
      std::ostringstream t;
      t << std::fixed << std::setprecision(2) << v << " +- " << reference_tolerance(v);
      s << std::setw(reps > 1 ? 20 : 14) << t.str();
    }
    s << '\n';
  }
  s << (failed == 0 ? "all rows within tolerance" : std::to_string(failed) + " row(s) outside tolerance") << '\n';
  out << s.str();
}

}  // namespace regqa
