#include "bnys/methods.hpp"

#include "bnys/error.hpp"

#include <chrono>
#include <limits>
#include <string>

namespace bnys {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  void start() { begin_ = Clock::now(); }
  void stop() { total_ += std::chrono::duration<double>(Clock::now() - begin_).count(); }
  double total() const noexcept { return total_; }

 private:
  Clock::time_point begin_{};
  double total_ = 0.0;
};

WeightKind weight_letter(char c) {
  switch (c) {
    case 'U': return WeightKind::Uniform;
    case 'E': return WeightKind::Exponential;
    case 'R': return WeightKind::Ridge;
    default: break;
  }
  throw Error(ErrorCode::MalformedName, std::string("unknown weight letter '") + c + "'");
}

char weight_char(WeightKind k) {
  switch (k) {
    case WeightKind::Uniform: return 'U';
    case WeightKind::Exponential: return 'E';
    case WeightKind::Ridge: return 'R';
  }
  return '?';
}

IndexSet draw(Eigen::Index n, Eigen::Index count, const IndexSet& exclusions, Rng& rng) {
  try {
    return sample_uniform(n, count, exclusions, rng);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotEnoughCandidates) throw Error(ErrorCode::NotEnoughColumns, e.what());
    throw;
  }
}

NystromFactor build_learner(const KernelAccess& kernel, IndexSet cols, Eigen::Index k) {
  DenseMatrix c = kernel.columns(cols);
  return standard_nystrom(std::move(c), std::move(cols), k);
}

double score(const MixtureModel& model, const DenseMatrix* reference) {
  if (reference == nullptr) return std::numeric_limits<double>::quiet_NaN();
  return relative_error(mixture_full(model, reference->rows()), *reference);
}

template <class T>
std::vector<T> head(const std::vector<T>& v, std::size_t count) {
  return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(count)};
}

// Learner predictions on the fixed validation blocks.
struct ValidationBlocks {
  IndexSet v1, v2;
  DenseMatrix target1, target2;
  std::vector<DenseMatrix> fit, tune;

  void add(const NystromFactor& f) {
    fit.push_back(evaluate_block(f, v1, v1));
    tune.push_back(evaluate_block(f, v2, v2));
  }

  std::vector<double> weights(const WeightScheme& scheme, std::size_t count) const {
    if (scheme.kind == WeightKind::Uniform) return uniform_weights(count);
    return fit_weights(scheme, head(fit, count), target1, head(tune, count), target2);
  }
};

IndexSet cluster_columns(const DenseMatrix& residual, Eigen::Index m, ClusteringKind kind, std::size_t max_iter,
                         Rng& rng) {
  switch (kind) {
    case ClusteringKind::KMeans: {
      const Clustering cl = kmeans(residual, m, rng, max_iter);
      return nearest_columns(cl.centers, residual, {});
    }
    case ClusteringKind::PAM:
      return kmedoids_pam(residual, m, rng, max_iter).medoids;
    case ClusteringKind::SF:
      return kmedoids_sf(residual, m, max_iter).medoids;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown clustering kind");
}

}  // namespace

MethodName parse_method_name(std::string_view name) {
  const auto bad = [&] { return Error(ErrorCode::MalformedName, "'" + std::string(name) + "'"); };
  if (name.size() < 5 || name[2] != 'B' || name[3] != '-') throw bad();
  MethodName out;
  try {
    out.boost = weight_letter(name[0]);
    out.strong = weight_letter(name[1]);
  } catch (const Error&) {
    throw bad();
  }
  const auto suffix = name.substr(4);
  if (suffix == "mean") {
    out.clustering = ClusteringKind::KMeans;
  } else if (suffix == "med") {
    out.clustering = ClusteringKind::PAM;
  } else if (suffix == "SF") {
    out.clustering = ClusteringKind::SF;
  } else {
    throw bad();
  }
  return out;
}

std::string format_method_name(const MethodName& name) {
  std::string out{weight_char(name.boost), weight_char(name.strong), 'B', '-'};
  switch (name.clustering) {
    case ClusteringKind::KMeans: return out + "mean";
    case ClusteringKind::PAM: return out + "med";
    case ClusteringKind::SF: return out + "SF";
  }
  return out;
}

void EnsembleConfig::validate() const {
  if (k < 1 || m < k) throw Error(ErrorCode::InvalidConfig, "need m >= k >= 1");
  if (p < 1) throw Error(ErrorCode::InvalidConfig, "need p >= 1");
  if (scheme.kind != WeightKind::Uniform && (v1 < 1 || v2 < 1)) {
    throw Error(ErrorCode::InvalidConfig, "validation sets must be nonempty");
  }
  scheme.validate();
}

void BoostConfig::validate() const {
  if (k < 1 || m < k) throw Error(ErrorCode::InvalidConfig, "need m >= k >= 1");
  if (p < 1) throw Error(ErrorCode::InvalidConfig, "need p >= 1");
  if (s < m) throw Error(ErrorCode::InvalidConfig, "need s >= m to cluster s columns into m groups");
  if (v1 < 1 || v2 < 1) throw Error(ErrorCode::InvalidConfig, "validation sets must be nonempty");
  boost_scheme.validate();
  strong_scheme.validate();
}

RunResult standard_method(const KernelAccess& kernel, Eigen::Index m, Eigen::Index k, std::uint64_t seed,
                          const DenseMatrix* reference) {
  if (k < 1 || m < k) throw Error(ErrorCode::InvalidConfig, "need m >= k >= 1");
  Rng rng(seed);
  Stopwatch watch;
  watch.start();
  RunResult out;
  out.model.learners.push_back(build_learner(kernel, draw(kernel.size(), m, {}, rng), k));
  out.model.weights = {1.0};
  watch.stop();
  out.trace.seed = seed;
  out.trace.points.push_back({1, score(out.model, reference), watch.total()});
  return out;
}

RunResult ensemble_nystrom(const KernelAccess& kernel, const EnsembleConfig& cfg, const DenseMatrix* reference) {
  cfg.validate();
  const Eigen::Index n = kernel.size();
  Rng rng(cfg.seed);
  Stopwatch core;
  RunResult out;
  out.trace.seed = cfg.seed;

  core.start();
  ValidationBlocks val;
  IndexSet both;
  const bool weighted = cfg.scheme.kind != WeightKind::Uniform;
  if (weighted) {
    both = draw(n, cfg.v1 + cfg.v2, {}, rng);
    val.v1.assign(both.begin(), both.begin() + cfg.v1);
    val.v2.assign(both.begin() + cfg.v1, both.end());
    val.target1 = kernel.block(val.v1, val.v1);
    val.target2 = kernel.block(val.v2, val.v2);
  }
  const IndexSet columns = draw(n, cfg.m * cfg.p, both, rng);
  core.stop();

  for (Eigen::Index j = 0; j < cfg.p; ++j) {
    core.start();
    IndexSet part(columns.begin() + j * cfg.m, columns.begin() + (j + 1) * cfg.m);
    out.model.learners.push_back(build_learner(kernel, std::move(part), cfg.k));
    if (weighted) val.add(out.model.learners.back());
    core.stop();

    Stopwatch fit;
    fit.start();
    const auto count = static_cast<std::size_t>(j + 1);
    auto weights = val.weights(cfg.scheme, count);
    fit.stop();
    out.model.weights = weights;
    out.trace.points.push_back(
        {count, score(out.model.prefix(count, std::move(weights)), reference), core.total() + fit.total()});
  }
  out.v1 = std::move(val.v1);
  out.v2 = std::move(val.v2);
  return out;
}

RunResult boosting_nystrom(const KernelAccess& kernel, const BoostConfig& cfg, const DenseMatrix* reference) {
  cfg.validate();
  const Eigen::Index n = kernel.size();
  Rng rng(cfg.seed);
  Stopwatch core;
  RunResult out;
  out.trace.seed = cfg.seed;

  // Initial uniform learner, then the fixed validation sets.
  core.start();
  IndexSet used = draw(n, cfg.m, {}, rng);
  ValidationBlocks val;
  {
    const IndexSet both = draw(n, cfg.v1 + cfg.v2, used, rng);
    val.v1.assign(both.begin(), both.begin() + cfg.v1);
    val.v2.assign(both.begin() + cfg.v1, both.end());
  }
  val.target1 = kernel.block(val.v1, val.v1);
  val.target2 = kernel.block(val.v2, val.v2);
  out.model.learners.push_back(build_learner(kernel, used, cfg.k));
  val.add(out.model.learners.back());
  core.stop();

  auto strong_point = [&](std::size_t count) {
    Stopwatch fit;
    fit.start();
    auto weights = val.weights(cfg.strong_scheme, count);
    fit.stop();
    out.model.weights = weights;
    out.trace.points.push_back(
        {count, score(out.model.prefix(count, std::move(weights)), reference), core.total() + fit.total()});
  };
  strong_point(1);

  IndexSet excluded = used;
  excluded.insert(excluded.end(), val.v1.begin(), val.v1.end());
  excluded.insert(excluded.end(), val.v2.begin(), val.v2.end());

  // Boosting loop.
  while (static_cast<Eigen::Index>(out.model.size()) < cfg.p) {
    core.start();
    const std::size_t current = out.model.size();
    // (a) intermediate mixture
    const MixtureModel intermediate = out.model.reweighted(val.weights(cfg.boost_scheme, current));
    // (b) fresh residual validation set
    IndexSet v = draw(n, cfg.s, excluded, rng);
    // (c) residual block
    const DenseMatrix residual = kernel.block(v, v) - mixture_block(intermediate, v, v);
    out.residual_norms.push_back(residual.norm());
    // (d) cluster its columns and map back to global indices
    const IndexSet local = cluster_columns(residual, cfg.m, cfg.clustering, cfg.cluster_max_iter, rng);
    IndexSet next;
    next.reserve(local.size());
    for (const auto idx : local) next.push_back(v[static_cast<std::size_t>(idx)]);
    out.residual_sets.push_back(std::move(v));
    // (e) next weak learner
    excluded.insert(excluded.end(), next.begin(), next.end());
    out.model.learners.push_back(build_learner(kernel, std::move(next), cfg.k));
    val.add(out.model.learners.back());
    core.stop();
    strong_point(out.model.size());
  }

  out.v1 = std::move(val.v1);
  out.v2 = std::move(val.v2);
  return out;
}

}  // namespace bnys
