#include "bnys/sampling.hpp"

#include "bnys/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace bnys {

std::uint64_t Rng::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidConfig, "uniform_index bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

IndexSet sample_uniform(Eigen::Index n, Eigen::Index count, const IndexSet& exclusions, Rng& rng) {
  if (n < 0 || count < 0) throw Error(ErrorCode::InvalidConfig, "negative size in sample_uniform");
  std::vector<bool> excluded(static_cast<std::size_t>(n), false);
  for (const auto idx : exclusions) {
    if (idx < 0 || idx >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "exclusion " + std::to_string(idx) +
                                                  " outside [0, " + std::to_string(n) + ")");
    }
    excluded[static_cast<std::size_t>(idx)] = true;
  }
  IndexSet candidates;
  candidates.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!excluded[static_cast<std::size_t>(i)]) candidates.push_back(i);
  }
  const auto available = static_cast<Eigen::Index>(candidates.size());
  if (count > available) {
    throw Error(ErrorCode::NotEnoughCandidates, "requested " + std::to_string(count) + " of " +
                                                    std::to_string(available) + " candidates");
  }
  // Partial Fisher-Yates.
  for (Eigen::Index i = 0; i < count; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(available - i)));
    std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
  }
  candidates.resize(static_cast<std::size_t>(count));
  return candidates;
}

DenseMatrix pairwise_sq_distances(const DenseMatrix& columns) {
  const Eigen::Index q = columns.cols();
  DenseMatrix d = DenseMatrix::Zero(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = j + 1; i < q; ++i) {
      const double v = (columns.col(i) - columns.col(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

namespace {

void check_cluster_count(const DenseMatrix& columns, Eigen::Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidConfig, "cluster count must be at least 1");
  if (m > columns.cols()) {
    throw Error(ErrorCode::TooManyClusters, std::to_string(m) + " clusters for " +
                                                std::to_string(columns.cols()) + " columns");
  }
}

std::vector<Eigen::Index> assign_to_centers(const DenseMatrix& columns, const DenseMatrix& centers) {
  const Eigen::Index q = columns.cols();
  const Eigen::Index m = centers.rows();
  std::vector<Eigen::Index> labels(static_cast<std::size_t>(q), 0);
  for (Eigen::Index j = 0; j < q; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < m; ++c) {
      const double dist = (columns.col(j) - centers.row(c).transpose()).squaredNorm();
      if (dist < best) {
        best = dist;
        labels[static_cast<std::size_t>(j)] = c;
      }
    }
  }
  return labels;
}

double kmeans_cost(const DenseMatrix& columns, const DenseMatrix& centers,
                   const std::vector<Eigen::Index>& labels) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    total += (columns.col(j) - centers.row(labels[static_cast<std::size_t>(j)]).transpose()).squaredNorm();
  }
  return total;
}

// Recomputes means; an empty cluster takes the column farthest from its own
// center among clusters that can spare one.
void update_means(const DenseMatrix& columns, DenseMatrix& centers, std::vector<Eigen::Index>& labels) {
  const Eigen::Index m = centers.rows();
  const Eigen::Index q = columns.cols();
  auto recompute = [&](std::vector<Eigen::Index>& sizes) {
    centers.setZero();
    sizes.assign(static_cast<std::size_t>(m), 0);
    for (Eigen::Index j = 0; j < q; ++j) {
      const auto c = labels[static_cast<std::size_t>(j)];
      centers.row(c) += columns.col(j).transpose();
      ++sizes[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < m; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
      }
    }
  };

  std::vector<Eigen::Index> sizes;
  recompute(sizes);
  for (Eigen::Index empty = 0; empty < m; ++empty) {
    if (sizes[static_cast<std::size_t>(empty)] > 0) continue;
    Eigen::Index donor = -1;
    double far = -1.0;
    for (Eigen::Index j = 0; j < q; ++j) {
      const auto c = labels[static_cast<std::size_t>(j)];
      if (sizes[static_cast<std::size_t>(c)] < 2) continue;
      const double dist = (columns.col(j) - centers.row(c).transpose()).squaredNorm();
      if (dist > far) {
        far = dist;
        donor = j;
      }
    }
    labels[static_cast<std::size_t>(donor)] = empty;
    recompute(sizes);
  }
}

// Labels for a medoid set: a medoid always belongs to its own cluster,
// other columns go to the nearest medoid (lowest slot on ties).
std::vector<Eigen::Index> assign_to_medoids(const DenseMatrix& dist, const IndexSet& medoids, double& cost) {
  const Eigen::Index q = dist.rows();
  std::vector<Eigen::Index> labels(static_cast<std::size_t>(q), 0);
  cost = 0.0;
  for (Eigen::Index j = 0; j < q; ++j) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index slot = 0;
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      if (medoids[s] == j) {
        best = 0.0;
        slot = static_cast<Eigen::Index>(s);
        break;
      }
      if (dist(medoids[s], j) < best) {
        best = dist(medoids[s], j);
        slot = static_cast<Eigen::Index>(s);
      }
    }
    labels[static_cast<std::size_t>(j)] = slot;
    cost += best;
  }
  return labels;
}

Clustering medoid_result(const DenseMatrix& columns, const DenseMatrix& dist, IndexSet medoids) {
  Clustering out;
  out.assignments = assign_to_medoids(dist, medoids, out.objective);
  out.centers.resize(static_cast<Eigen::Index>(medoids.size()), columns.rows());
  for (std::size_t s = 0; s < medoids.size(); ++s) {
    out.centers.row(static_cast<Eigen::Index>(s)) = columns.col(medoids[s]).transpose();
  }
  out.medoids = std::move(medoids);
  return out;
}

}  // namespace

Clustering kmeans(const DenseMatrix& columns, Eigen::Index m, Rng& rng, std::size_t max_iter) {
  check_cluster_count(columns, m);
  const IndexSet init = sample_uniform(columns.cols(), m, {}, rng);

  DenseMatrix centers(m, columns.rows());
  for (Eigen::Index c = 0; c < m; ++c) centers.row(c) = columns.col(init[static_cast<std::size_t>(c)]).transpose();

  Clustering out;
  auto labels = assign_to_centers(columns, centers);
  out.history.push_back(kmeans_cost(columns, centers, labels));
  for (std::size_t it = 0; it < max_iter; ++it) {
    update_means(columns, centers, labels);
    auto next = assign_to_centers(columns, centers);
    out.history.push_back(kmeans_cost(columns, centers, next));
    ++out.iterations;
    const bool fixpoint = next == labels;
    labels = std::move(next);
    if (fixpoint) break;
  }
  out.assignments = std::move(labels);
  out.centers = std::move(centers);
  out.objective = out.history.back();
  return out;
}

Clustering kmedoids_pam(const DenseMatrix& columns, Eigen::Index m, Rng& /*rng*/, std::size_t max_iter) {
  check_cluster_count(columns, m);
  const Eigen::Index q = columns.cols();
  const DenseMatrix dist = pairwise_sq_distances(columns);
  constexpr double inf = std::numeric_limits<double>::infinity();

  // BUILD
  IndexSet medoids;
  std::vector<bool> is_medoid(static_cast<std::size_t>(q), false);
  Vector nearest = Vector::Constant(q, inf);
  {
    Eigen::Index first = 0;
    double best = inf;
    for (Eigen::Index i = 0; i < q; ++i) {
      const double total = dist.col(i).sum();
      if (total < best) {
        best = total;
        first = i;
      }
    }
    medoids.push_back(first);
    is_medoid[static_cast<std::size_t>(first)] = true;
    nearest = dist.col(first);
  }
  while (static_cast<Eigen::Index>(medoids.size()) < m) {
    Eigen::Index pick = -1;
    double best_gain = -1.0;
    for (Eigen::Index c = 0; c < q; ++c) {
      if (is_medoid[static_cast<std::size_t>(c)]) continue;
      double gain = 0.0;
      for (Eigen::Index j = 0; j < q; ++j) gain += std::max(nearest[j] - dist(c, j), 0.0);
      if (gain > best_gain) {
        best_gain = gain;
        pick = c;
      }
    }
    medoids.push_back(pick);
    is_medoid[static_cast<std::size_t>(pick)] = true;
    nearest = nearest.cwiseMin(dist.col(pick));
  }

  // SWAP, best improvement per pass.
  Clustering out;
  std::size_t swaps = 0;
  std::vector<double> history;
  for (;;) {
    Vector d1(q), d2(q);
    std::vector<std::size_t> slot1(static_cast<std::size_t>(q), 0);
    double cost = 0.0;
    for (Eigen::Index j = 0; j < q; ++j) {
      double a = inf, b = inf;
      std::size_t sa = 0;
      for (std::size_t s = 0; s < medoids.size(); ++s) {
        const double v = dist(medoids[s], j);
        if (v < a) {
          b = a;
          a = v;
          sa = s;
        } else if (v < b) {
          b = v;
        }
      }
      d1[j] = a;
      d2[j] = b;
      slot1[static_cast<std::size_t>(j)] = sa;
      cost += a;
    }
    history.push_back(cost);
    if (swaps >= max_iter) break;

    double best_delta = 0.0;
    std::size_t best_slot = 0;
    Eigen::Index best_h = -1;
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      for (Eigen::Index h = 0; h < q; ++h) {
        if (is_medoid[static_cast<std::size_t>(h)]) continue;
        double delta = 0.0;
        for (Eigen::Index j = 0; j < q; ++j) {
          const double dh = dist(h, j);
          if (slot1[static_cast<std::size_t>(j)] == s) {
            delta += std::min(d2[j], dh) - d1[j];
          } else if (dh < d1[j]) {
            delta += dh - d1[j];
          }
        }
        if (delta < best_delta) {
          best_delta = delta;
          best_slot = s;
          best_h = h;
        }
      }
    }
    // Rounding noise must not count as an improvement.
    if (best_h < 0 || best_delta >= -1e-12 * (1.0 + cost)) break;
    is_medoid[static_cast<std::size_t>(medoids[best_slot])] = false;
    medoids[best_slot] = best_h;
    is_medoid[static_cast<std::size_t>(best_h)] = true;
    ++swaps;
  }

  out = medoid_result(columns, dist, std::move(medoids));
  out.history = std::move(history);
  out.iterations = swaps;
  return out;
}

Clustering kmedoids_sf(const DenseMatrix& columns, Eigen::Index m, std::size_t max_iter) {
  check_cluster_count(columns, m);
  const Eigen::Index q = columns.cols();
  const DenseMatrix dist = pairwise_sq_distances(columns);

  // v_j = sum_i d_ij / sum_l d_il
  const Vector row_sums = dist.rowwise().sum();
  Vector score = Vector::Zero(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    for (Eigen::Index i = 0; i < q; ++i) {
      if (row_sums[i] > 0.0) score[j] += dist(i, j) / row_sums[i];
    }
  }
  IndexSet order(static_cast<std::size_t>(q));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return score[a] < score[b]; });
  IndexSet medoids(order.begin(), order.begin() + m);

  double cost = 0.0;
  auto labels = assign_to_medoids(dist, medoids, cost);
  std::vector<double> history{cost};
  std::size_t iterations = 0;
  while (iterations < max_iter) {
    IndexSet next = medoids;
    for (Eigen::Index s = 0; s < m; ++s) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index cand = 0; cand < q; ++cand) {
        if (labels[static_cast<std::size_t>(cand)] != s) continue;
        double total = 0.0;
        for (Eigen::Index j = 0; j < q; ++j) {
          if (labels[static_cast<std::size_t>(j)] == s) total += dist(cand, j);
        }
        if (total < best) {
          best = total;
          next[static_cast<std::size_t>(s)] = cand;
        }
      }
    }
    double next_cost = 0.0;
    auto next_labels = assign_to_medoids(dist, next, next_cost);
    ++iterations;
    history.push_back(next_cost);
    const bool settled = next_cost >= cost;
    if (next_cost <= cost) {
      medoids = std::move(next);
      labels = std::move(next_labels);
      cost = next_cost;
    }
    if (settled) break;
  }

  Clustering out = medoid_result(columns, dist, std::move(medoids));
  out.history = std::move(history);
  out.iterations = iterations;
  return out;
}

IndexSet nearest_columns(const DenseMatrix& centers, const DenseMatrix& columns, const IndexSet& forbidden) {
  if (centers.cols() != columns.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "center dimension differs from column dimension");
  }
  const Eigen::Index q = columns.cols();
  std::vector<bool> taken(static_cast<std::size_t>(q), false);
  Eigen::Index blocked = 0;
  for (const auto f : forbidden) {
    if (f < 0 || f >= q) throw Error(ErrorCode::IndexOutOfRange, "forbidden index " + std::to_string(f));
    if (!taken[static_cast<std::size_t>(f)]) ++blocked;
    taken[static_cast<std::size_t>(f)] = true;
  }
  if (centers.rows() > q - blocked) {
    throw Error(ErrorCode::NotEnoughCandidates, std::to_string(centers.rows()) + " centers for " +
                                                    std::to_string(q - blocked) + " free columns");
  }
  IndexSet out;
  out.reserve(static_cast<std::size_t>(centers.rows()));
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    Eigen::Index pick = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < q; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      const double dist = (columns.col(j) - centers.row(c).transpose()).squaredNorm();
      if (pick < 0 || dist < best) {
        best = dist;
        pick = j;
      }
    }
    taken[static_cast<std::size_t>(pick)] = true;
    out.push_back(pick);
  }
  return out;
}

}  // namespace bnys
