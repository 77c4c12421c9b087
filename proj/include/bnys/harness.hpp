#pragma once

#include "bnys/kernels.hpp"
#include "bnys/methods.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bnys {

/// n i.i.d. standard normal points in R^d, drawn row by row from `rng`.
Dataset generate_gaussian_points(Eigen::Index n, Eigen::Index d, Rng& rng);

/// Comma-separated numeric rows.  A first row containing any non-numeric
/// cell is treated as a header.  With `subsample`, a uniform subset of that
/// many distinct rows is returned in file order.
Dataset load_csv(const std::filesystem::path& path, std::optional<Eigen::Index> subsample, Rng& rng);

/// Writes `x0,...,x{d-1}` header plus rows with round-trip precision.
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 0.0;  // one-sided, alternative mean(a) < mean(b)
};

WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

enum class DataSource { Synthetic, Csv };

struct ExperimentSpec {
  DataSource source = DataSource::Synthetic;
  Eigen::Index n = 1000;
  Eigen::Index d = 2;
  std::filesystem::path csv_path;
  std::optional<Eigen::Index> subsample;
  bool standardize = false;
  KernelSpec kernel = KernelSpec::gaussian(1.0);
  std::vector<std::string> methods;
  Eigen::Index m = 10;
  Eigen::Index k = 10;
  Eigen::Index p_max = 10;
  Eigen::Index s = 100;
  Eigen::Index v1 = 20;
  Eigen::Index v2 = 20;
  double eta = 0.01;
  std::vector<double> lambda_grid = WeightScheme::default_lambda_grid();
  std::size_t replicates = 1;
  std::uint64_t seed = 0;
  bool timing = true;
  std::size_t cluster_max_iter = 100;

  void validate() const;
};

/// Parses the flat `key = value` experiment format ('#' starts a comment).
/// A relative csv_path is resolved against `base_dir`.
ExperimentSpec parse_experiment(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment(const std::filesystem::path& path);

inline constexpr const char* kBaselineMethod = "ensemble-R";

/// Runs one named method ("standard", "ensemble-U/E/R" or a boosting name).
RunResult run_method(const std::string& name, const ExperimentSpec& spec, const KernelAccess& kernel,
                     std::uint64_t seed, const DenseMatrix* reference);

/// Seed for `method` in replicate `replicate`; methods share data but not draws.
std::uint64_t method_seed(std::uint64_t base_seed, std::size_t replicate, const std::string& method);

struct SummaryRow {
  std::string method;
  std::size_t learners = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  double mean_seconds = 0.0;
};

struct PValueRow {
  std::string method;
  std::size_t learners = 0;
  double mean_error = 0.0;
  double baseline_mean_error = 0.0;
  double t = 0.0;
  double p_value = 0.0;
};

struct ExperimentResult {
  std::vector<ErrorTrace> traces;  // ordered by (method, replicate)
  std::vector<SummaryRow> summary;
  std::vector<PValueRow> pvalues;
};

/// Runs every method on every replicate.  Replicates are spread over
/// `workers` threads (0 = read BNYS_WORKERS, default hardware concurrency).
ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers = 0);

/// run_experiment plus output files: trace.csv, summary.csv, pvalues.csv,
/// errors.svg, runtime.svg.  Nothing is left behind on failure.
ExperimentResult run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir,
                                std::size_t workers = 0);

std::vector<SummaryRow> summarize(const std::vector<ErrorTrace>& traces, const std::vector<std::string>& methods);

std::string format_trace_csv(const std::vector<ErrorTrace>& traces);
std::string format_summary_csv(const std::vector<SummaryRow>& rows);
std::string format_pvalue_csv(const std::vector<PValueRow>& rows);

std::vector<ErrorTrace> parse_trace_csv(const std::string& text);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

enum class PlotMetric { Error, Seconds };

/// Line chart (one polyline per method) of a summary table as SVG.
std::string emit_plot(const std::vector<SummaryRow>& rows, PlotMetric metric);
std::string emit_plot(const std::string& summary_csv, PlotMetric metric);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace bnys
