#include "bnys/linalg.hpp"

#include "bnys/error.hpp"

#include <cmath>
#include <string>

namespace bnys {

namespace {

void require_symmetric(const DenseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::NonSquare,
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " matrix");
  }
  const double scale = a.norm();
  const double asym = (a - a.transpose()).norm();
  if (asym > 1e-10 * scale) {
    throw Error(ErrorCode::NotSymmetric, "asymmetry " + std::to_string(asym) +
                                             " exceeds tolerance relative to norm " +
                                             std::to_string(scale));
  }
}

}  // namespace

double frobenius_norm(const DenseMatrix& m) { return m.norm(); }

double relative_error(const DenseMatrix& approx, const DenseMatrix& target) {
  if (approx.rows() != target.rows() || approx.cols() != target.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "approximation and target differ in shape");
  }
  const double denom = target.norm();
  if (denom == 0.0) throw Error(ErrorCode::ZeroTarget, "target matrix has zero norm");
  return (approx - target).norm() / denom;
}

SymEig sym_eig(const DenseMatrix& a) {
  require_symmetric(a);
  const Eigen::Index n = a.rows();
  // Symmetrize so the solver sees exactly symmetric data.
  const DenseMatrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(sym);

  // The solver returns ascending order; flip to descending.
  SymEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();

  const double clamp = 1e-10 * a.norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.values[i] < 0.0 && -out.values[i] < clamp) out.values[i] = 0.0;
  }
  return out;
}

DenseMatrix best_rank_k(const SymEig& eig, Eigen::Index k) {
  const Eigen::Index n = eig.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::RankOutOfRange,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const auto uk = eig.vectors.leftCols(k);
  return uk * eig.values.head(k).asDiagonal() * uk.transpose();
}

DenseMatrix pinv_rank_k(const DenseMatrix& w, Eigen::Index k, double tol) {
  const SymEig eig = sym_eig(w);
  const Eigen::Index n = eig.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::RankOutOfRange,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const double sigma1 = eig.values[0];
  Vector inv = Vector::Zero(n);
  if (sigma1 > 0.0) {
    for (Eigen::Index i = 0; i < k; ++i) {
      if (eig.values[i] > tol * sigma1) inv[i] = 1.0 / eig.values[i];
    }
  }
  DenseMatrix out = eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
  // Exact symmetry keeps C W_k^+ C^T symmetric downstream.
  return 0.5 * (out + out.transpose());
}

Vector ridge_solve(const DenseMatrix& a, const Vector& b, double lambda) {
  if (a.rows() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "design rows do not match target length");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidConfig, "lambda must be finite and non-negative");
  }
  const Eigen::Index p = a.cols();
  DenseMatrix normal = a.transpose() * a;
  const Vector rhs = a.transpose() * b;

  if (lambda == 0.0) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(normal, Eigen::EigenvaluesOnly);
    const double hi = solver.eigenvalues().maxCoeff();
    const double lo = solver.eigenvalues().minCoeff();
    if (!(hi > 0.0) || lo <= 1e-12 * hi) {
      throw Error(ErrorCode::SingularSystem,
                  "normal matrix is rank deficient (condition estimate " +
                      std::to_string(hi > 0.0 ? hi / std::max(lo, 0.0) : 0.0) + ")");
    }
  }
  normal.diagonal().array() += lambda;
  Eigen::LDLT<DenseMatrix> ldlt(normal);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularSystem, "factorization failed");
  }
  Vector w = ldlt.solve(rhs);
  if (p > 0 && !w.allFinite()) throw Error(ErrorCode::SingularSystem, "non-finite solution");
  return w;
}

}  // namespace bnys
