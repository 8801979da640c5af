#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "regqa/benchmark.hpp"
#include "regqa/criteria.hpp"
#include "regqa/data_matrix.hpp"
#include "regqa/report.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

void add_criterion_flags(CLI::App& cmd, regqa::CriterionConfig& cfg) {
  cmd.add_option("--seed", cfg.seed, "Seed for the bootstrap and subsampling")->envname("REGQA_SEED");
  cmd.add_option("--k", cfg.k_outlier, "Neighbour rank for the outlier criterion")->capture_default_str();
  cmd.add_option("--tau-cluster1", cfg.tau_cluster_1, "Dip value threshold")->capture_default_str();
  cmd.add_option("--tau-cluster2", cfg.tau_cluster_2, "Dip p-value threshold")->capture_default_str();
  cmd.add_option("--tau-outlier", cfg.tau_outlier, "k-NN distance ratio threshold")->capture_default_str();
  cmd.add_option("--tau-ortho", cfg.tau_ortho, "Band half-width on the normalised scale")->capture_default_str();
  cmd.add_option("--bootstrap", cfg.bootstrap_b, "Bootstrap replicates for the dip p-value")->capture_default_str();
  cmd.add_option("--distance-cap", cfg.distance_cap, "Max points entering the pairwise distances")
      ->capture_default_str();
}

// Writes to `path`, or stdout when it is empty.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw regqa::InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw regqa::InputError("write failed for '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data quality assessment for regression input data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", regqa::kVersion);

  std::size_t threads = 0;
  regqa::CriterionConfig cfg;

  // assess
  auto* assess = app.add_subcommand("assess", "Score a CSV dataset");
  std::string input, output, format = "json", precision = "6", plots, delimiter = ",";
  std::vector<std::string> ignore;
  bool no_header = false;
  auto* input_opt = assess->add_option("-i,--input", input, "CSV file ('-' for stdin)");
  assess->add_option("input_file", input, "CSV file")->excludes(input_opt);
  assess->add_option("-o,--output", output, "Report destination (default stdout)");
  assess->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  assess->add_option("--plots", plots, "Directory for scatter/histogram data files");
  assess->add_option("--precision", precision, "Decimals in the report: 6 or full")
      ->check(CLI::IsMember({"6", "full"}))
      ->capture_default_str();
  assess->add_option("--delimiter", delimiter, "Field separator")->capture_default_str();
  assess->add_option("--ignore", ignore, "Columns to drop, e.g. the target");
  assess->add_flag("--no-header", no_header, "Input has no header line");
  assess->add_option("--threads", threads, "Worker threads (0: all cores)");
  add_criterion_flags(*assess, cfg);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a simulated benchmark dataset");
  std::string kind_name;
  regqa::BenchmarkSpec spec;
  std::string gen_output;
  std::vector<std::string> kind_names;
  for (auto k : regqa::kAllBenchmarkKinds) kind_names.emplace_back(regqa::to_string(k));
  generate->add_option("--kind", kind_name, "Benchmark kind")->required()->check(CLI::IsMember(kind_names));
  generate->add_option("--n", spec.n, "Number of rows")->capture_default_str();
  generate->add_option("--seed", spec.seed, "Generator seed")->envname("REGQA_SEED");
  generate->add_option("-o,--output", gen_output, "CSV destination (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "Assess all six benchmarks and compare to the reference table");
  std::size_t reps = 1;
  std::size_t bench_n = 1000;
  bench->add_option("--reps", reps, "Generator seeds to average over")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--n", bench_n, "Rows per benchmark")->capture_default_str();
  bench->add_option("--threads", threads, "Worker threads (0: all cores)");
  add_criterion_flags(*bench, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*assess) {
      if (input.empty()) throw regqa::InputError("no input file given");
      if (delimiter.size() != 1) throw regqa::InputError("delimiter must be a single character");
      regqa::CsvOptions options;
      options.delimiter = delimiter[0];
      options.has_header = !no_header;
      options.ignore_columns = ignore;

      std::ifstream file;
      std::istream* in = &std::cin;
      if (input != "-") {
        file.open(input, std::ios::binary);
        if (!file) throw regqa::InputError("cannot read '" + input + "'");
        in = &file;
      }
      const auto ingested = regqa::ingest_csv(*in, options);
      if (ingested.dropped_rows > 0)
        std::cerr << "regqa: dropped " << ingested.dropped_rows << " row(s); first bad cell at "
                  << ingested.first_bad_cell << "\n";

      regqa::AssessOptions aopt;
      aopt.dataset_name = input == "-" ? "stdin" : std::filesystem::path(input).filename().string();
      aopt.dropped_rows = ingested.dropped_rows;
      aopt.threads = threads;
      const auto report = regqa::assess(ingested.data, cfg, aopt);

      const auto prec = precision == "full" ? regqa::Precision::full : regqa::Precision::rounded;
      std::string text;
      if (format == "csv") {
        std::ostringstream s;
        regqa::write_pair_csv(s, report, prec);
        text = s.str();
      } else {
        text = regqa::emit_json(report, prec);
      }
      write_output(output, text);
      if (!plots.empty()) {
        try {
          regqa::write_plot_data(plots, ingested.data, report);
        } catch (const std::filesystem::filesystem_error& e) {
          throw regqa::InputError(std::string("cannot write plot data: ") + e.what());
        } catch (const std::runtime_error& e) {
          throw regqa::InputError(e.what());
        }
      }
    } else if (*generate) {
      spec.kind = *regqa::parse_benchmark_kind(kind_name);
      if (spec.n < 50) throw regqa::InputError("--n must be at least 50");
      const auto data = regqa::generate(spec);
      std::ostringstream s;
      regqa::write_csv(s, data);
      write_output(gen_output, s.str());
      std::ostream& echo = gen_output.empty() || gen_output == "-" ? std::cerr : std::cout;
      echo << (gen_output.empty() ? std::string("-") : gen_output) << ": kind=" << kind_name << " n=" << spec.n
           << " seed=" << spec.seed << "\n";
    } else if (*bench) {
      if (bench_n < 50) throw regqa::InputError("--n must be at least 50");
      cfg.validate();
      const auto rows = regqa::run_bench(cfg.seed, reps, cfg, bench_n, threads);
      std::ostringstream s;
      regqa::print_bench(s, rows, reps);
      std::cout << s.str();
    }
  } catch (const std::invalid_argument& e) {
    // InputError and precondition failures from bad flags or data.
    std::cerr << "regqa: error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "regqa: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
