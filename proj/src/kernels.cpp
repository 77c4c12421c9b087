#include "bnys/kernels.hpp"

#include "bnys/error.hpp"

#include <cmath>
#include <string>

namespace bnys {

KernelSpec KernelSpec::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidConfig, "Gaussian bandwidth must be positive");
  }
  return {KernelKind::Gaussian, sigma};
}

KernelSpec KernelSpec::linear() { return {KernelKind::Linear, 1.0}; }

Dataset standardize_columns(const Dataset& data) {
  const Eigen::Index n = data.n();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "standardization needs at least 2 points");
  Dataset out{data.points};
  for (Eigen::Index j = 0; j < out.d(); ++j) {
    auto col = out.points.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
    if (sd > 0.0) col /= sd;
  }
  return out;
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "points of dimension " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  switch (spec.kind) {
    case KernelKind::Gaussian:
      return std::exp(-(x - y).squaredNorm() / (2.0 * spec.sigma * spec.sigma));
    case KernelKind::Linear:
      return x.dot(y);
  }
  return 0.0;
}

DenseMatrix gram_full(const KernelSpec& spec, const Dataset& data) {
  const Eigen::Index n = data.n();
  // Row-major points give contiguous per-point access.
  const DenseMatrix pts = data.points.transpose();
  DenseMatrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = kernel_eval(spec, pts.col(i), pts.col(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

void check_index_set(const IndexSet& indices, Eigen::Index n) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto idx : indices) {
    if (idx < 0 || idx >= n) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(idx) + " outside [0, " + std::to_string(n) + ")");
    }
    if (seen[static_cast<std::size_t>(idx)]) {
      throw Error(ErrorCode::DuplicateIndex, "index " + std::to_string(idx) + " repeated");
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
}

DenseMatrix gram_columns(const KernelSpec& spec, const Dataset& data, const IndexSet& cols) {
  check_index_set(cols, data.n());
  const DenseMatrix pts = data.points.transpose();
  DenseMatrix c(data.n(), static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    const auto src = cols[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < data.n(); ++i) c(i, j) = kernel_eval(spec, pts.col(i), pts.col(src));
  }
  return c;
}

MatrixKernel::MatrixKernel(DenseMatrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw Error(ErrorCode::NonSquare, "kernel matrix must be square");
}

DenseMatrix MatrixKernel::columns(const IndexSet& cols) const {
  check_index_set(cols, size());
  return gram_(Eigen::all, cols);
}

DenseMatrix MatrixKernel::block(const IndexSet& rows, const IndexSet& cols) const {
  check_index_set(rows, size());
  check_index_set(cols, size());
  return gram_(rows, cols);
}

DatasetKernel::DatasetKernel(KernelSpec spec, Dataset data) : spec_(spec), data_(std::move(data)) {}

DenseMatrix DatasetKernel::columns(const IndexSet& cols) const { return gram_columns(spec_, data_, cols); }

DenseMatrix DatasetKernel::block(const IndexSet& rows, const IndexSet& cols) const {
  check_index_set(rows, size());
  check_index_set(cols, size());
  DenseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = kernel_eval(spec_, data_.points.row(rows[static_cast<std::size_t>(i)]).transpose(),
                              data_.points.row(cols[static_cast<std::size_t>(j)]).transpose());
    }
  }
  return out;
}

}  // namespace bnys
