#pragma once

#include "bnys/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace bnys {

using IndexSet = std::vector<Eigen::Index>;

// Deterministic random stream.  Only the raw 64-bit engine output is used
// (never the implementation-defined std:: distributions), so a seed gives
// the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound), unbiased via rejection.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Standard normal draw (Box-Muller, cosine branch only).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// `count` distinct indices from {0..n-1} \ exclusions, uniformly without
/// replacement, returned in draw order.
IndexSet sample_uniform(Eigen::Index n, Eigen::Index count, const IndexSet& exclusions, Rng& rng);

enum class ClusteringKind { KMeans, PAM, SF };

struct Clustering {
  std::vector<Eigen::Index> assignments;  // label per column, in [0, m)
  DenseMatrix centers;                    // m x dim; for medoid methods the medoid columns
  IndexSet medoids;                       // local column indices; empty for k-means
  double objective = 0.0;                 // sum of squared distances to assigned center
  std::vector<double> history;            // objective after each completed iteration
  std::size_t iterations = 0;
};

/// Lloyd's k-means over the q columns of `columns` (dim x q).  Initial
/// centers are m distinct columns drawn from `rng`.
Clustering kmeans(const DenseMatrix& columns, Eigen::Index m, Rng& rng, std::size_t max_iter = 100);

/// k-medoids by Partitioning Around Medoids (BUILD then best-improvement SWAP).
/// Dissimilarity is squared Euclidean distance between columns.  `rng` is
/// accepted for interface symmetry; PAM itself is deterministic.
Clustering kmedoids_pam(const DenseMatrix& columns, Eigen::Index m, Rng& rng, std::size_t max_iter = 100);

/// Park and Jun's simple and fast k-medoids.
Clustering kmedoids_sf(const DenseMatrix& columns, Eigen::Index m, std::size_t max_iter = 100);

/// For each center (row of `centers`), the nearest column not already chosen
/// and not forbidden; greedy in center order, lowest index wins ties.
IndexSet nearest_columns(const DenseMatrix& centers, const DenseMatrix& columns, const IndexSet& forbidden);

/// Squared Euclidean distances between all pairs of columns.
DenseMatrix pairwise_sq_distances(const DenseMatrix& columns);

}  // namespace bnys
