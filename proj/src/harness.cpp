#include "bnys/harness.hpp"

#include "bnys/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace bnys {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <class Int>
Int parse_integer(std::string_view s, std::string_view what) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidConfig, std::string(what) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::string_view what) {
  const auto v = parse_double(s);
  if (!v) throw Error(ErrorCode::InvalidConfig, std::string(what) + ": expected a number, got '" + std::string(s) + "'");
  return *v;
}

bool parse_bool(std::string_view s, std::string_view what) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::InvalidConfig, std::string(what) + ": expected a boolean, got '" + std::string(s) + "'");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (const double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

std::size_t worker_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BNYS_WORKERS")) {
    const auto v = parse_integer<std::size_t>(trim(env), "BNYS_WORKERS");
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void check_method_name(const std::string& name) {
  if (name == "standard" || name == "ensemble-U" || name == "ensemble-E" || name == "ensemble-R") return;
  parse_method_name(name);
}

WeightScheme scheme_for(WeightKind kind, const ExperimentSpec& spec) {
  switch (kind) {
    case WeightKind::Uniform: return WeightScheme::uniform();
    case WeightKind::Exponential: return WeightScheme::exponential(spec.eta);
    case WeightKind::Ridge: return WeightScheme::ridge(spec.lambda_grid);
  }
  return WeightScheme::uniform();
}

}  // namespace

Dataset generate_gaussian_points(Eigen::Index n, Eigen::Index d, Rng& rng) {
  if (n < 1 || d < 1) throw Error(ErrorCode::InvalidConfig, "need n >= 1 and d >= 1");
  Dataset out{DenseMatrix(n, d)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out.points(i, j) = rng.normal();
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, std::optional<Eigen::Index> subsample, Rng& rng) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    std::vector<double> row;
    row.reserve(cells.size());
    std::optional<std::size_t> bad_col;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v || !std::isfinite(*v)) {
        if (!bad_col) bad_col = c;
        continue;
      }
      row.push_back(*v);
    }
    if (bad_col) {
      if (rows.empty() && width == 0) {
        width = cells.size();  // header
        continue;
      }
      throw Error(ErrorCode::NonNumericCell, path.string() + " row " + std::to_string(line_no) + " column " +
                                                 std::to_string(*bad_col + 1) + ": '" +
                                                 std::string(cells[*bad_col]) + "'");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw Error(ErrorCode::RaggedRows, path.string() + " row " + std::to_string(line_no) + " has " +
                                             std::to_string(row.size()) + " cells, expected " +
                                             std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure on " + path.string());
  if (rows.empty()) throw Error(ErrorCode::IoError, path.string() + " contains no data rows");

  IndexSet keep;
  if (subsample && *subsample < static_cast<Eigen::Index>(rows.size())) {
    keep = sample_uniform(static_cast<Eigen::Index>(rows.size()), *subsample, {}, rng);
    std::sort(keep.begin(), keep.end());
  } else {
    keep.resize(rows.size());
    std::iota(keep.begin(), keep.end(), Eigen::Index{0});
  }
  Dataset out{DenseMatrix(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(width))};
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const auto& row = rows[static_cast<std::size_t>(keep[i])];
    for (std::size_t j = 0; j < width; ++j) {
      out.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  return out;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::string text;
  for (Eigen::Index j = 0; j < data.d(); ++j) text += (j ? ",x" : "x") + std::to_string(j);
  text += '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      if (j) text += ',';
      text += fmt_num(data.points(i, j));
    }
    text += '\n';
  }
  write_text_file(path, text);
}

WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::DegenerateSamples, "each sample needs at least two values");
  }
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = sample_var(a, ma) / static_cast<double>(a.size());
  const double vb = sample_var(b, mb) / static_cast<double>(b.size());
  const double se2 = va + vb;
  if (!(se2 > 0.0)) throw Error(ErrorCode::DegenerateSamples, "both samples have zero variance");

  WelchResult out;
  out.t = (ma - mb) / std::sqrt(se2);
  // Welch-Satterthwaite
  out.df = se2 * se2 /
           (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  const boost::math::students_t_distribution<double> dist(out.df);
  out.p_value = boost::math::cdf(dist, out.t);
  return out;
}

void ExperimentSpec::validate() const {
  if (replicates < 1) throw Error(ErrorCode::InvalidConfig, "replicates must be at least 1");
  if (methods.empty()) throw Error(ErrorCode::InvalidConfig, "no methods listed");
  for (const auto& name : methods) check_method_name(name);
  if (source == DataSource::Synthetic && (n < 1 || d < 1)) {
    throw Error(ErrorCode::InvalidConfig, "synthetic data needs n >= 1 and d >= 1");
  }
  if (source == DataSource::Csv && csv_path.empty()) throw Error(ErrorCode::InvalidConfig, "csv_path missing");
  if (subsample && *subsample < 1) throw Error(ErrorCode::InvalidConfig, "subsample must be positive");
  if (k < 1 || m < k || p_max < 1) throw Error(ErrorCode::InvalidConfig, "need m >= k >= 1 and p_max >= 1");
  if (kernel.kind == KernelKind::Gaussian && !(kernel.sigma > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "sigma must be positive");
  }
  WeightScheme::exponential(eta).validate();
  WeightScheme::ridge(lambda_grid).validate();
}

ExperimentSpec parse_experiment(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentSpec spec;
  std::string kernel_kind = "gaussian";
  double sigma = 1.0;
  std::size_t line_no = 0;
  for (auto raw : lines_of(text)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "source") {
      if (value == "synthetic") spec.source = DataSource::Synthetic;
      else if (value == "csv") spec.source = DataSource::Csv;
      else throw Error(ErrorCode::InvalidConfig, "source must be synthetic or csv");
    } else if (key == "n") {
      spec.n = parse_integer<Eigen::Index>(value, key);
    } else if (key == "d") {
      spec.d = parse_integer<Eigen::Index>(value, key);
    } else if (key == "csv_path") {
      std::filesystem::path p{std::string(value)};
      spec.csv_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else if (key == "subsample") {
      const auto v = parse_integer<Eigen::Index>(value, key);
      spec.subsample = v > 0 ? std::optional<Eigen::Index>(v) : std::nullopt;
    } else if (key == "standardize") {
      spec.standardize = parse_bool(value, key);
    } else if (key == "kernel") {
      kernel_kind = std::string(value);
    } else if (key == "sigma") {
      sigma = parse_real(value, key);
    } else if (key == "methods") {
      spec.methods.clear();
      for (const auto name : split(value, ',')) {
        if (!name.empty()) spec.methods.emplace_back(name);
      }
    } else if (key == "m") {
      spec.m = parse_integer<Eigen::Index>(value, key);
    } else if (key == "k") {
      spec.k = parse_integer<Eigen::Index>(value, key);
    } else if (key == "p_max") {
      spec.p_max = parse_integer<Eigen::Index>(value, key);
    } else if (key == "s") {
      spec.s = parse_integer<Eigen::Index>(value, key);
    } else if (key == "v1") {
      spec.v1 = parse_integer<Eigen::Index>(value, key);
    } else if (key == "v2") {
      spec.v2 = parse_integer<Eigen::Index>(value, key);
    } else if (key == "eta") {
      spec.eta = parse_real(value, key);
    } else if (key == "lambda_grid") {
      spec.lambda_grid.clear();
      for (const auto v : split(value, ',')) spec.lambda_grid.push_back(parse_real(v, key));
    } else if (key == "replicates") {
      spec.replicates = parse_integer<std::size_t>(value, key);
    } else if (key == "seed") {
      spec.seed = parse_integer<std::uint64_t>(value, key);
    } else if (key == "timing") {
      spec.timing = parse_bool(value, key);
    } else if (key == "cluster_max_iter") {
      spec.cluster_max_iter = parse_integer<std::size_t>(value, key);
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + std::string(key) + "'");
    }
  }
  if (kernel_kind == "gaussian") spec.kernel = KernelSpec::gaussian(sigma);
  else if (kernel_kind == "linear") spec.kernel = KernelSpec::linear();
  else throw Error(ErrorCode::InvalidConfig, "kernel must be gaussian or linear");
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_text_file(path), path.parent_path());
}

std::uint64_t method_seed(std::uint64_t base_seed, std::size_t replicate, const std::string& method) {
  return mix_seed(mix_seed(base_seed + replicate) ^ fnv1a(method));
}

RunResult run_method(const std::string& name, const ExperimentSpec& spec, const KernelAccess& kernel,
                     std::uint64_t seed, const DenseMatrix* reference) {
  RunResult out;
  if (name == "standard") {
    out = standard_method(kernel, spec.m, spec.k, seed, reference);
  } else if (name.rfind("ensemble-", 0) == 0 && name.size() == 10) {
    EnsembleConfig cfg;
    cfg.m = spec.m;
    cfg.k = spec.k;
    cfg.p = spec.p_max;
    cfg.v1 = spec.v1;
    cfg.v2 = spec.v2;
    cfg.seed = seed;
    WeightKind kind{};
    switch (name.back()) {
      case 'U': kind = WeightKind::Uniform; break;
      case 'E': kind = WeightKind::Exponential; break;
      case 'R': kind = WeightKind::Ridge; break;
      default: throw Error(ErrorCode::MalformedName, "'" + name + "'");
    }
    cfg.scheme = scheme_for(kind, spec);
    out = ensemble_nystrom(kernel, cfg, reference);
  } else {
    const MethodName parsed = parse_method_name(name);
    BoostConfig cfg;
    cfg.m = spec.m;
    cfg.k = spec.k;
    cfg.p = spec.p_max;
    cfg.s = spec.s;
    cfg.v1 = spec.v1;
    cfg.v2 = spec.v2;
    cfg.boost_scheme = scheme_for(parsed.boost, spec);
    cfg.strong_scheme = scheme_for(parsed.strong, spec);
    cfg.clustering = parsed.clustering;
    cfg.cluster_max_iter = spec.cluster_max_iter;
    cfg.seed = seed;
    out = boosting_nystrom(kernel, cfg, reference);
  }
  out.trace.method = name;
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<ErrorTrace>& traces, const std::vector<std::string>& methods) {
  std::vector<SummaryRow> out;
  for (const auto& method : methods) {
    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_count;
    for (const auto& t : traces) {
      if (t.method != method) continue;
      for (const auto& pt : t.points) {
        by_count[pt.learners].first.push_back(pt.rel_error);
        by_count[pt.learners].second.push_back(pt.seconds);
      }
    }
    for (const auto& [count, vals] : by_count) {
      SummaryRow row;
      row.method = method;
      row.learners = count;
      row.mean_error = mean_of(vals.first);
      row.std_error = std::sqrt(sample_var(vals.first, row.mean_error));
      row.mean_seconds = mean_of(vals.second);
      out.push_back(row);
    }
  }
  return out;
}

namespace {

std::vector<PValueRow> pvalue_table(const std::vector<ErrorTrace>& traces, const ExperimentSpec& spec) {
  std::vector<PValueRow> out;
  if (std::find(spec.methods.begin(), spec.methods.end(), kBaselineMethod) == spec.methods.end()) return out;
  const auto target = static_cast<std::size_t>(spec.p_max);
  // Each method is compared at p_max learners, or at its largest count when it
  // stops earlier (the standard method has a single learner).
  auto errors_for = [&](const std::string& method) {
    std::vector<double> errs;
    for (const auto& t : traces) {
      if (t.method != method || t.points.empty()) continue;
      const TracePoint* pick = &t.points.back();
      for (const auto& pt : t.points) {
        if (pt.learners == target) pick = &pt;
      }
      errs.push_back(pick->rel_error);
    }
    return errs;
  };
  const auto baseline = errors_for(kBaselineMethod);
  for (const auto& method : spec.methods) {
    if (method == kBaselineMethod) continue;
    const auto errs = errors_for(method);
    PValueRow row;
    row.method = method;
    row.learners = method == "standard" ? 1 : target;
    row.mean_error = mean_of(errs);
    row.baseline_mean_error = mean_of(baseline);
    try {
      const auto w = welch_t_test(errs, baseline);
      row.t = w.t;
      row.p_value = w.p_value;
    } catch (const Error&) {
      row.t = std::numeric_limits<double>::quiet_NaN();
      row.p_value = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  spec.validate();
  std::optional<Dataset> csv_data;
  if (spec.source == DataSource::Csv) {
    Rng unused(0);
    csv_data = load_csv(spec.csv_path, std::nullopt, unused);
  }

  const std::size_t reps = spec.replicates;
  std::vector<std::vector<ErrorTrace>> per_rep(reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        Rng data_rng(mix_seed(spec.seed + r));
        Dataset data;
        if (spec.source == DataSource::Synthetic) {
          data = generate_gaussian_points(spec.n, spec.d, data_rng);
        } else if (spec.subsample && *spec.subsample < csv_data->n()) {
          IndexSet rows = sample_uniform(csv_data->n(), *spec.subsample, {}, data_rng);
          std::sort(rows.begin(), rows.end());
          data.points = csv_data->points(rows, Eigen::all);
        } else {
          data = *csv_data;
        }
        if (spec.standardize) data = standardize_columns(data);
        const MatrixKernel kernel(gram_full(spec.kernel, data));
        for (const auto& method : spec.methods) {
          RunResult res = run_method(method, spec, kernel, method_seed(spec.seed, r, method), &kernel.matrix());
          res.trace.replicate = r;
          if (!spec.timing) {
            for (auto& pt : res.trace.points) pt.seconds = 0.0;
          }
          per_rep[r].push_back(std::move(res.trace));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(reps);
        return;
      }
    }
  };

  const std::size_t threads = std::min(worker_count(workers), reps);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult out;
  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
    for (std::size_t r = 0; r < reps; ++r) out.traces.push_back(per_rep[r][mi]);
  }
  out.summary = summarize(out.traces, spec.methods);
  out.pvalues = pvalue_table(out.traces, spec);
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir,
                                std::size_t workers) {
  ExperimentResult result = run_experiment(spec, workers);
  const std::vector<std::pair<std::string, std::string>> files = {
      {"trace.csv", format_trace_csv(result.traces)},
      {"summary.csv", format_summary_csv(result.summary)},
      {"pvalues.csv", format_pvalue_csv(result.pvalues)},
      {"errors.svg", emit_plot(result.summary, PlotMetric::Error)},
      {"runtime.svg", emit_plot(result.summary, PlotMetric::Seconds)},
  };
  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, text] : files) {
      const auto path = out_dir / name;
      written.push_back(path);
      write_text_file(path, text);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return result;
}

std::string format_trace_csv(const std::vector<ErrorTrace>& traces) {
  std::string out = "method,replicate,learners,rel_error,seconds\n";
  for (const auto& t : traces) {
    for (const auto& pt : t.points) {
      out += t.method + ',' + std::to_string(t.replicate) + ',' + std::to_string(pt.learners) + ',' +
             fmt_num(pt.rel_error) + ',' + fmt_num(pt.seconds) + '\n';
    }
  }
  return out;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "method,learners,mean_error,std_error,mean_seconds\n";
  for (const auto& r : rows) {
    out += r.method + ',' + std::to_string(r.learners) + ',' + fmt_num(r.mean_error) + ',' + fmt_num(r.std_error) +
           ',' + fmt_num(r.mean_seconds) + '\n';
  }
  return out;
}

std::string format_pvalue_csv(const std::vector<PValueRow>& rows) {
  std::string out = "method,learners,mean_error,baseline_mean_error,t_statistic,p_value\n";
  for (const auto& r : rows) {
    out += r.method + ',' + std::to_string(r.learners) + ',' + fmt_num(r.mean_error) + ',' +
           fmt_num(r.baseline_mean_error) + ',' + fmt_num(r.t) + ',' + fmt_num(r.p_value) + '\n';
  }
  return out;
}

std::vector<ErrorTrace> parse_trace_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || trim(lines[0]) != "method,replicate,learners,rel_error,seconds") {
    throw Error(ErrorCode::SchemaMismatch, "unexpected trace header");
  }
  std::vector<ErrorTrace> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cells = split(lines[i], ',');
    if (cells.size() != 5) throw Error(ErrorCode::SchemaMismatch, "trace row " + std::to_string(i + 1));
    const std::string method(cells[0]);
    const auto rep = parse_integer<std::size_t>(cells[1], "replicate");
    if (out.empty() || out.back().method != method || out.back().replicate != rep) {
      out.push_back({method, rep, 0, {}});
    }
    const auto err = parse_double(cells[3]);
    const auto sec = parse_double(cells[4]);
    if (!err || !sec) throw Error(ErrorCode::SchemaMismatch, "trace row " + std::to_string(i + 1));
    out.back().points.push_back({parse_integer<std::size_t>(cells[2], "learners"), *err, *sec});
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || trim(lines[0]) != "method,learners,mean_error,std_error,mean_seconds") {
    throw Error(ErrorCode::SchemaMismatch, "unexpected summary header");
  }
  std::vector<SummaryRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cells = split(lines[i], ',');
    if (cells.size() != 5) throw Error(ErrorCode::SchemaMismatch, "summary row " + std::to_string(i + 1));
    SummaryRow row;
    row.method = std::string(cells[0]);
    std::size_t learners = 0;
    const auto [ptr, ec] = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), learners);
    const auto me = parse_double(cells[2]);
    const auto se = parse_double(cells[3]);
    const auto ms = parse_double(cells[4]);
    if (ec != std::errc{} || ptr != cells[1].data() + cells[1].size() || !me || !se || !ms) {
      throw Error(ErrorCode::SchemaMismatch, "summary row " + std::to_string(i + 1));
    }
    row.learners = learners;
    row.mean_error = *me;
    row.std_error = *se;
    row.mean_seconds = *ms;
    out.push_back(row);
  }
  return out;
}

std::string emit_plot(const std::vector<SummaryRow>& rows, PlotMetric metric) {
  if (rows.empty()) throw Error(ErrorCode::SchemaMismatch, "summary has no rows to plot");
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
  }
  auto value = [&](const SummaryRow& r) { return metric == PlotMetric::Error ? r.mean_error : r.mean_seconds; };

  double x_max = 1.0, y_max = 0.0;
  for (const auto& r : rows) {
    x_max = std::max(x_max, static_cast<double>(r.learners));
    if (std::isfinite(value(r))) y_max = std::max(y_max, value(r));
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  constexpr double width = 720, height = 440;
  constexpr double left = 80, right = 200, top = 30, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const double x_min = 1.0;
  auto px = [&](double x) { return left + (x_max > x_min ? (x - x_min) / (x_max - x_min) : 0.5) * plot_w; };
  auto py = [&](double y) { return top + plot_h - y / y_max * plot_h; };

  static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const char* y_label = metric == PlotMetric::Error ? "mean relative error" : "mean seconds";

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << fmt_fixed(left, 2) << "\" y1=\"" << fmt_fixed(top + plot_h, 2) << "\" x2=\""
      << fmt_fixed(left + plot_w, 2) << "\" y2=\"" << fmt_fixed(top + plot_h, 2) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << fmt_fixed(left, 2) << "\" y1=\"" << fmt_fixed(top, 2) << "\" x2=\"" << fmt_fixed(left, 2)
      << "\" y2=\"" << fmt_fixed(top + plot_h, 2) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = y_max * i / 5.0;
    svg << "<text x=\"" << fmt_fixed(left - 6, 2) << "\" y=\"" << fmt_fixed(py(yv) + 4, 2)
        << "\" text-anchor=\"end\">" << fmt_fixed(yv, metric == PlotMetric::Error ? 4 : 3) << "</text>\n";
  }
  const auto xticks = static_cast<long>(x_max);
  const long step = std::max(1L, xticks / 10);
  for (long x = 1; x <= xticks; x += step) {
    svg << "<text x=\"" << fmt_fixed(px(static_cast<double>(x)), 2) << "\" y=\"" << fmt_fixed(top + plot_h + 18, 2)
        << "\" text-anchor=\"middle\">" << x << "</text>\n";
  }
  svg << "<text x=\"" << fmt_fixed(left + plot_w / 2, 2) << "\" y=\"" << fmt_fixed(height - 15, 2)
      << "\" text-anchor=\"middle\">learners</text>\n";
  svg << "<text x=\"18\" y=\"" << fmt_fixed(top + plot_h / 2, 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt_fixed(top + plot_h / 2, 2) << ")\">" << y_label << "</text>\n";

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const char* color = palette[mi % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& r : rows) {
      if (r.method != methods[mi] || !std::isfinite(value(r))) continue;
      svg << (first ? "" : " ") << fmt_fixed(px(static_cast<double>(r.learners)), 2) << ','
          << fmt_fixed(py(value(r)), 2);
      first = false;
    }
    svg << "\"/>\n";
    for (const auto& r : rows) {
      if (r.method != methods[mi] || !std::isfinite(value(r))) continue;
      svg << "<circle cx=\"" << fmt_fixed(px(static_cast<double>(r.learners)), 2) << "\" cy=\""
          << fmt_fixed(py(value(r)), 2) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 10 + 20.0 * static_cast<double>(mi);
    svg << "<line x1=\"" << fmt_fixed(left + plot_w + 15, 2) << "\" y1=\"" << fmt_fixed(ly, 2) << "\" x2=\""
        << fmt_fixed(left + plot_w + 40, 2) << "\" y2=\"" << fmt_fixed(ly, 2) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt_fixed(left + plot_w + 46, 2) << "\" y=\"" << fmt_fixed(ly + 4, 2) << "\">"
        << methods[mi] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string emit_plot(const std::string& summary_csv, PlotMetric metric) {
  return emit_plot(parse_summary_csv(summary_csv), metric);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failure on " + path.string());
}

}  // namespace bnys
