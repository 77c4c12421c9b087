#pragma once

#include "bnys/kernels.hpp"
#include "bnys/linalg.hpp"
#include "bnys/sampling.hpp"

#include <vector>

namespace bnys {

inline constexpr Eigen::Index kDefaultReconstructLimit = 10000;

// One standard Nystrom approximation G_nys = C W_k^+ C^T, kept in factored
// form.  `c` holds the sampled columns G[:, indices].
struct NystromFactor {
  IndexSet indices;
  DenseMatrix c;
  DenseMatrix wk_pinv;
  Eigen::Index k = 0;

  Eigen::Index n() const noexcept { return c.rows(); }
  Eigen::Index m() const noexcept { return c.cols(); }
};

struct MixtureModel {
  std::vector<NystromFactor> learners;
  std::vector<double> weights;

  std::size_t size() const noexcept { return learners.size(); }
  /// Same learners, different weights.
  MixtureModel reweighted(std::vector<double> new_weights) const;
  /// The first `count` learners with the supplied weights.
  MixtureModel prefix(std::size_t count, std::vector<double> new_weights) const;
};

/// Builds W = C[indices, :] and its rank-k pseudoinverse.  Only entries of G
/// already present in C are used.
NystromFactor standard_nystrom(DenseMatrix c, IndexSet indices, Eigen::Index k);

/// C[rows, :] W_k^+ C[cols, :]^T
DenseMatrix evaluate_block(const NystromFactor& f, const IndexSet& rows, const IndexSet& cols);

DenseMatrix reconstruct_full(const NystromFactor& f, Eigen::Index limit = kDefaultReconstructLimit);

/// sum_i weights[i] * evaluate_block(learners[i], rows, cols)
DenseMatrix mixture_block(const MixtureModel& model, const IndexSet& rows, const IndexSet& cols);

/// The full n x n mixture, formed as one stacked product.
DenseMatrix mixture_full(const MixtureModel& model, Eigen::Index limit = kDefaultReconstructLimit);

}  // namespace bnys
