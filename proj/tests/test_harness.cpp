#include "bnys/error.hpp"
#include "bnys/harness.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

using namespace bnys;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bnys_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidConfig;
}

const char* kSmallSpec = R"(# small synthetic run
source = synthetic
n = 120
d = 2
kernel = gaussian
sigma = 1.0
methods = standard, ensemble-R, URB-mean, UUB-SF
m = 6
k = 4
p_max = 4
s = 30
v1 = 10
v2 = 10
replicates = 3
seed = 5
timing = false
)";

}  // namespace

TEST_CASE("generate_gaussian_points") {
  Rng a(3), b(3);
  CHECK(generate_gaussian_points(50, 3, a).points == generate_gaussian_points(50, 3, b).points);
  Rng rng(11);
  const Dataset big = generate_gaussian_points(100000, 1, rng);
  const double n = 100000.0;
  const double mean = big.points.col(0).mean();
  const double var = (big.points.col(0).array() - mean).square().sum() / (n - 1.0);
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(n));
  CHECK(std::abs(var - 1.0) <= 0.05);
  Rng r2(1);
  const Dataset plane = generate_gaussian_points(1000, 2, r2);
  CHECK(plane.points.rows() == 1000);
  CHECK(plane.points.cols() == 2);
}

TEST_CASE("load_csv") {
  const fs::path dir = scratch_dir("csv");
  Rng rng(0);
  SUBCASE("plain numeric rows") {
    const Dataset d = load_csv(write_file(dir / "a.csv", "1,2\n3,4\n5,6\n"), std::nullopt, rng);
    DenseMatrix expect(3, 2);
    expect << 1, 2, 3, 4, 5, 6;
    CHECK(d.points == expect);
  }
  SUBCASE("header is skipped") {
    const Dataset d = load_csv(write_file(dir / "b.csv", "x,y\n1,2\n3,4\n"), std::nullopt, rng);
    CHECK(d.points.rows() == 2);
    CHECK(d.points(1, 1) == 4.0);
  }
  SUBCASE("errors carry their location") {
    CHECK(code_of([&] { load_csv(dir / "missing.csv", std::nullopt, rng); }) == ErrorCode::IoError);
    CHECK(code_of([&] { load_csv(write_file(dir / "c.csv", "1,2\n3\n"), std::nullopt, rng); }) ==
          ErrorCode::RaggedRows);
    try {
      load_csv(write_file(dir / "d.csv", "1,2\n3,abc\n"), std::nullopt, rng);
      FAIL("expected NonNumericCell");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonNumericCell);
      const std::string msg = e.what();
      CHECK(msg.find("row 2") != std::string::npos);
      CHECK(msg.find("column 2") != std::string::npos);
    }
  }
  SUBCASE("subsample gives distinct rows, reproducibly") {
    std::ostringstream text;
    text << "a,b\n";
    for (int i = 0; i < 7000; ++i) text << i << ',' << 2 * i << '\n';
    const fs::path path = write_file(dir / "big.csv", text.str());
    Rng r1(9), r2(9);
    const Dataset s1 = load_csv(path, 400, r1);
    const Dataset s2 = load_csv(path, 400, r2);
    CHECK(s1.points == s2.points);
    std::set<double> rows;
    for (Eigen::Index i = 0; i < 400; ++i) {
      rows.insert(s1.points(i, 0));
      CHECK(s1.points(i, 1) == 2.0 * s1.points(i, 0));
    }
    CHECK(rows.size() == 400);
  }
  SUBCASE("write and read back") {
    Rng g(4);
    const Dataset d = generate_gaussian_points(20, 3, g);
    write_dataset_csv(d, dir / "round.csv");
    CHECK(load_csv(dir / "round.csv", std::nullopt, rng).points == d.points);
  }
  fs::remove_all(dir);
}

TEST_CASE("relative_error cases") {
  const DenseMatrix g = DenseMatrix::Identity(3, 3) * 2.0;
  CHECK(relative_error(g, g) == 0.0);
  CHECK(relative_error(DenseMatrix::Zero(3, 3), g) == 1.0);
  CHECK(relative_error(2.0 * g, g) == 1.0);
  CHECK(code_of([&] { relative_error(g, DenseMatrix::Zero(3, 3)); }) == ErrorCode::ZeroTarget);
}

TEST_CASE("welch_t_test") {
  SUBCASE("identical samples") {
    const std::vector<double> a{1.0, 2.0, 4.0, 7.0};
    const WelchResult r = welch_t_test(a, a);
    CHECK(r.t == 0.0);
    CHECK(r.p_value == 0.5);
  }
  SUBCASE("far apart") {
    const std::vector<double> a{0.0, 0.001, -0.001, 0.0005};
    const std::vector<double> b{10.0, 10.001, 9.999, 10.0005};
    CHECK(welch_t_test(a, b).p_value < 1e-6);
    CHECK(welch_t_test(b, a).p_value > 1.0 - 1e-6);
  }
  SUBCASE("ten against ten") {
    const std::vector<double> a{0.081, 0.074, 0.069, 0.088, 0.077, 0.071, 0.083, 0.079, 0.066, 0.075};
    const std::vector<double> b{0.092, 0.085, 0.097, 0.081, 0.090, 0.099, 0.087, 0.084, 0.094, 0.089};
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      ma += a[i] / 10.0;
      mb += b[i] / 10.0;
    }
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      sa += (a[i] - ma) * (a[i] - ma) / 9.0;
      sb += (b[i] - mb) * (b[i] - mb) / 9.0;
    }
    const double se2 = sa / 10.0 + sb / 10.0;
    const double t = (ma - mb) / std::sqrt(se2);
    const double df = se2 * se2 / ((sa / 10.0) * (sa / 10.0) / 9.0 + (sb / 10.0) * (sb / 10.0) / 9.0);
    const WelchResult r = welch_t_test(a, b);
    CHECK(r.t == doctest::Approx(t).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(df).epsilon(1e-12));
    CHECK(std::abs(r.p_value - oracle::t_cdf(t, df)) <= 1e-6);
  }
  SUBCASE("degenerate") {
    CHECK(code_of([] { welch_t_test({1.0, 1.0}, {2.0, 2.0}); }) == ErrorCode::DegenerateSamples);
    CHECK(code_of([] { welch_t_test({1.0}, {2.0, 3.0}); }) == ErrorCode::DegenerateSamples);
  }
}

TEST_CASE("experiment file parsing") {
  const ExperimentSpec spec = parse_experiment(kSmallSpec);
  CHECK(spec.source == DataSource::Synthetic);
  CHECK(spec.n == 120);
  CHECK(spec.methods == std::vector<std::string>{"standard", "ensemble-R", "URB-mean", "UUB-SF"});
  CHECK(spec.m == 6);
  CHECK(spec.p_max == 4);
  CHECK(spec.replicates == 3);
  CHECK_FALSE(spec.timing);
  CHECK(spec.kernel.kind == KernelKind::Gaussian);
  CHECK(spec.lambda_grid == WeightScheme::default_lambda_grid());

  const ExperimentSpec csv = parse_experiment("source = csv\ncsv_path = data/x.csv\nsubsample = 4000\nstandardize = true\n"
                                              "methods = URB-mean\nkernel = linear\nlambda_grid = 0.1, 1, 10\n",
                                              "/base");
  CHECK(csv.csv_path == fs::path("/base/data/x.csv"));
  CHECK(csv.subsample == 4000);
  CHECK(csv.standardize);
  CHECK(csv.kernel.kind == KernelKind::Linear);
  CHECK(csv.lambda_grid == std::vector<double>{0.1, 1.0, 10.0});

  CHECK(code_of([] { parse_experiment("bogus = 1\nmethods = standard\n"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_experiment("n 10\n"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_experiment("n = ten\nmethods = standard\n").validate(); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { parse_experiment("methods = QQB-mean\n").validate(); }) == ErrorCode::MalformedName);
  CHECK(code_of([] { parse_experiment("methods = standard\nreplicates = 0\n").validate(); }) ==
        ErrorCode::InvalidConfig);
}

TEST_CASE("method seeds are independent across methods and replicates") {
  std::set<std::uint64_t> seeds;
  for (std::size_t r = 0; r < 10; ++r)
    for (const char* m : {"standard", "ensemble-R", "URB-mean", "RRB-mean"}) seeds.insert(method_seed(7, r, m));
  CHECK(seeds.size() == 40);
  CHECK(method_seed(7, 3, "URB-mean") == method_seed(7, 3, "URB-mean"));
}

TEST_CASE("run_experiment") {
  ExperimentSpec spec = parse_experiment(kSmallSpec);
  SUBCASE("single method, single replicate") {
    spec.methods = {"standard"};
    spec.replicates = 1;
    const ExperimentResult r = run_experiment(spec, 1);
    REQUIRE(r.traces.size() == 1);
    CHECK(r.traces[0].points.size() == 1);
    CHECK(r.pvalues.empty());
    CHECK(format_trace_csv(r.traces) ==
          "method,replicate,learners,rel_error,seconds\nstandard,0,1," +
              [&] {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", r.traces[0].points[0].rel_error);
                return std::string(buf);
              }() +
              ",0\n");
  }
  SUBCASE("traces, summary and p-values") {
    const ExperimentResult r = run_experiment(spec, 2);
    REQUIRE(r.traces.size() == 12);
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
      CHECK(r.traces[i].method == spec.methods[i / 3]);
      CHECK(r.traces[i].replicate == i % 3);
      for (std::size_t j = 0; j < r.traces[i].points.size(); ++j) {
        CHECK(r.traces[i].points[j].learners == j + 1);
        CHECK(r.traces[i].points[j].rel_error >= 0.0);
        CHECK(r.traces[i].points[j].seconds == 0.0);
      }
    }
    // Summary equals recomputation from the raw trace CSV.
    const std::vector<ErrorTrace> parsed = parse_trace_csv(format_trace_csv(r.traces));
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> groups;
    for (const auto& t : parsed)
      for (const auto& pt : t.points) groups[{t.method, pt.learners}].push_back(pt.rel_error);
    CHECK(r.summary.size() == groups.size());
    for (const auto& row : r.summary) {
      const auto& v = groups.at({row.method, row.learners});
      double mean = 0.0;
      for (double x : v) mean += x / static_cast<double>(v.size());
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean) / static_cast<double>(v.size() - 1);
      CHECK(row.mean_error == doctest::Approx(mean).epsilon(1e-12));
      CHECK(row.std_error == doctest::Approx(std::sqrt(var)).epsilon(1e-9));
    }
    const auto round = parse_summary_csv(format_summary_csv(r.summary));
    REQUIRE(round.size() == r.summary.size());
    for (std::size_t i = 0; i < round.size(); ++i) {
      CHECK(round[i].method == r.summary[i].method);
      CHECK(round[i].mean_error == r.summary[i].mean_error);
      CHECK(round[i].std_error == r.summary[i].std_error);
    }
    // One p-value row per non-baseline method at p_max, checked against the
    // test itself on the raw errors.
    REQUIRE(r.pvalues.size() == 3);
    std::vector<double> base;
    for (const auto& t : parsed)
      if (t.method == "ensemble-R") base.push_back(t.points.back().rel_error);
    for (const auto& row : r.pvalues) {
      std::vector<double> errs;
      for (const auto& t : parsed)
        if (t.method == row.method) errs.push_back(t.points.back().rel_error);
      CHECK(row.learners == (row.method == "standard" ? 1u : 4u));
      CHECK(row.p_value == doctest::Approx(welch_t_test(errs, base).p_value).epsilon(1e-12));
    }
  }
  SUBCASE("file outputs are deterministic and worker independent") {
    const fs::path a = scratch_dir("run_a"), b = scratch_dir("run_b");
    run_experiment(spec, a, 1);
    run_experiment(spec, b, 3);
    for (const char* f : {"trace.csv", "summary.csv", "pvalues.csv", "errors.svg", "runtime.svg"}) {
      REQUIRE(fs::exists(a / f));
      CHECK(read_text_file(a / f) == read_text_file(b / f));
    }
    fs::remove_all(a);
    fs::remove_all(b);
  }
  SUBCASE("failures leave no partial output") {
    const fs::path dir = scratch_dir("run_fail");
    spec.n = 30;  // too small for the column budget
    CHECK_THROWS_AS(run_experiment(spec, dir, 1), Error);
    CHECK(fs::is_empty(dir));
    fs::remove_all(dir);
  }
}

TEST_CASE("summary schema") {
  CHECK(code_of([] { parse_summary_csv("method,learners,mean\nx,1,2\n"); }) == ErrorCode::SchemaMismatch);
  CHECK(code_of([] { parse_summary_csv("method,learners,mean_error,std_error,mean_seconds\nx,one,2,0,0\n"); }) ==
        ErrorCode::SchemaMismatch);
  CHECK(code_of([] { parse_trace_csv("a,b\n"); }) == ErrorCode::SchemaMismatch);
}

TEST_CASE("emit_plot") {
  CHECK(code_of([] { emit_plot(std::vector<SummaryRow>{}, PlotMetric::Error); }) == ErrorCode::SchemaMismatch);
  CHECK(code_of([] { emit_plot(std::string("method,learners,mean_error,std_error,mean_seconds\n"), PlotMetric::Error); }) ==
        ErrorCode::SchemaMismatch);
  const std::string one = emit_plot(std::vector<SummaryRow>{{"standard", 1, 0.2, 0.0, 0.0}}, PlotMetric::Error);
  CHECK(one.find("<polyline") != std::string::npos);
  CHECK(one.find(">standard</text>") != std::string::npos);

  const fs::path data = BNYS_TEST_DATA_DIR;
  const std::string csv = read_text_file(data / "summary_fixture.csv");
  const std::string svg = emit_plot(csv, PlotMetric::Error);
  CHECK(svg == emit_plot(csv, PlotMetric::Error));
  CHECK(svg == read_text_file(data / "summary_fixture_errors.svg"));
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++lines;
  CHECK(lines == 3);
}
