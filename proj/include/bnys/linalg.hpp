#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace bnys {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Eigen-decomposition of a symmetric matrix, ordered by decreasing value.
// For SPSD input the values are the singular values; tiny negative
// eigenvalues produced by rounding are clamped to zero.
struct SymEig {
  DenseMatrix vectors;
  Vector values;

  Eigen::Index size() const noexcept { return values.size(); }
};

inline constexpr double kDefaultPinvTol = 1e-12;

double frobenius_norm(const DenseMatrix& m);

/// ||approx - target||_F / ||target||_F.  Throws ZeroTarget when the
/// target has zero norm.
double relative_error(const DenseMatrix& approx, const DenseMatrix& target);

SymEig sym_eig(const DenseMatrix& a);

/// A_k = U_k diag(values_k) U_k^T.
DenseMatrix best_rank_k(const SymEig& eig, Eigen::Index k);

/// Rank-k truncated Moore-Penrose pseudoinverse of a symmetric PSD matrix.
/// Modes with value <= tol * sigma_1 are dropped even when inside the top k.
DenseMatrix pinv_rank_k(const DenseMatrix& w, Eigen::Index k, double tol = kDefaultPinvTol);

/// Minimizer of |A w - b|^2 + lambda |w|^2, computed from the normal
/// equations.  With lambda == 0 the Gram matrix A^T A must be nonsingular.
Vector ridge_solve(const DenseMatrix& a, const Vector& b, double lambda);

}  // namespace bnys
