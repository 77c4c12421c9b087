#include "bnys/error.hpp"
#include "bnys/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Standard, ensemble and boosting Nystrom kernel approximation experiments"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Write n standard-normal points in d dimensions as CSV");
  Eigen::Index n = 1000;
  Eigen::Index d = 2;
  std::uint64_t seed = 0;
  std::string synth_out;
  synth->add_option("--n", n, "Number of points")->check(CLI::PositiveNumber);
  synth->add_option("--d", d, "Dimension")->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--out", synth_out, "Output CSV path")->required();

  auto* run = app.add_subcommand("run", "Run a replicated experiment described by a key = value file");
  std::string config;
  std::string out_dir;
  std::size_t workers = 0;
  run->add_option("--config", config, "Experiment file")->required()->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "Directory for CSV and SVG outputs")->required();
  run->add_option("--workers", workers, "Worker threads (default: BNYS_WORKERS or all cores)");

  auto* plot = app.add_subcommand("plot", "Render a summary CSV as an SVG line chart");
  std::string summary;
  std::string plot_out;
  std::string metric = "error";
  plot->add_option("--summary", summary, "summary.csv written by run")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output SVG path")->required();
  plot->add_option("--metric", metric, "error or seconds")->check(CLI::IsMember({"error", "seconds"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      bnys::Rng rng(seed);
      bnys::write_dataset_csv(bnys::generate_gaussian_points(n, d, rng), synth_out);
    } else if (*run) {
      const auto spec = bnys::load_experiment(config);
      const auto result = bnys::run_experiment(spec, std::filesystem::path(out_dir), workers);
      for (const auto& row : result.pvalues) {
        std::cout << row.method << " vs " << bnys::kBaselineMethod << " at " << row.learners
                  << " learners: mean " << row.mean_error << " vs " << row.baseline_mean_error
                  << ", p = " << row.p_value << '\n';
      }
      std::cout << "wrote outputs to " << out_dir << '\n';
    } else if (*plot) {
      const auto svg = bnys::emit_plot(bnys::read_text_file(summary),
                                       metric == "error" ? bnys::PlotMetric::Error : bnys::PlotMetric::Seconds);
      bnys::write_text_file(plot_out, svg);
    }
  } catch (const bnys::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
