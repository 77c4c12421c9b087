#pragma once

#include "bnys/kernels.hpp"
#include "bnys/nystrom.hpp"
#include "bnys/sampling.hpp"
#include "bnys/weighting.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bnys {

// Decoded "XYB-clustering" variant name, e.g. URB-mean.
struct MethodName {
  WeightKind boost = WeightKind::Uniform;
  WeightKind strong = WeightKind::Uniform;
  ClusteringKind clustering = ClusteringKind::KMeans;

  bool operator==(const MethodName&) const = default;
};

MethodName parse_method_name(std::string_view name);
std::string format_method_name(const MethodName& name);

struct EnsembleConfig {
  Eigen::Index m = 10;
  Eigen::Index k = 10;
  Eigen::Index p = 10;
  Eigen::Index v1 = 20;
  Eigen::Index v2 = 20;
  WeightScheme scheme = WeightScheme::ridge();
  std::uint64_t seed = 0;

  void validate() const;
};

struct BoostConfig {
  Eigen::Index m = 10;
  Eigen::Index k = 10;
  Eigen::Index p = 10;
  Eigen::Index s = 100;
  Eigen::Index v1 = 20;
  Eigen::Index v2 = 20;
  WeightScheme boost_scheme = WeightScheme::uniform();
  WeightScheme strong_scheme = WeightScheme::ridge();
  ClusteringKind clustering = ClusteringKind::KMeans;
  std::size_t cluster_max_iter = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TracePoint {
  std::size_t learners = 0;
  double rel_error = 0.0;  // NaN when no reference matrix was supplied
  double seconds = 0.0;    // wall clock of the driver up to this learner count
};

struct ErrorTrace {
  std::string method;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::vector<TracePoint> points;
};

struct RunResult {
  MixtureModel model;
  ErrorTrace trace;
  IndexSet v1;
  IndexSet v2;
  std::vector<IndexSet> residual_sets;   // boosting: V drawn at each iteration
  std::vector<double> residual_norms;    // boosting: |e_i|_F
};

/// One learner on m uniformly drawn columns.
RunResult standard_method(const KernelAccess& kernel, Eigen::Index m, Eigen::Index k, std::uint64_t seed,
                          const DenseMatrix* reference = nullptr);

/// Ensemble Nystrom.  The trace holds one point per prefix of learners,
/// each re-weighted with the configured scheme.
RunResult ensemble_nystrom(const KernelAccess& kernel, const EnsembleConfig& cfg,
                           const DenseMatrix* reference = nullptr);

/// Boosting Nystrom: an initial uniform learner followed by p-1 learners whose
/// columns are picked by clustering the residual of the current mixture on a
/// fresh validation block.  The trace point for j learners uses the strong
/// weights fitted over the first j learners.
RunResult boosting_nystrom(const KernelAccess& kernel, const BoostConfig& cfg,
                           const DenseMatrix* reference = nullptr);

}  // namespace bnys
