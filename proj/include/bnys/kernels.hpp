#pragma once

#include "bnys/linalg.hpp"
#include "bnys/sampling.hpp"

namespace bnys {

// n points in d dimensions, one point per row.
struct Dataset {
  DenseMatrix points;

  Eigen::Index n() const noexcept { return points.rows(); }
  Eigen::Index d() const noexcept { return points.cols(); }
};

enum class KernelKind { Gaussian, Linear };

struct KernelSpec {
  KernelKind kind = KernelKind::Gaussian;
  double sigma = 1.0;  // Gaussian bandwidth

  static KernelSpec gaussian(double sigma);
  static KernelSpec linear();
};

/// Centers every column and divides by its sample (n-1) standard deviation.
/// Constant columns are only centered.
Dataset standardize_columns(const Dataset& data);

/// Gaussian: exp(-|x-y|^2 / (2 sigma^2)).  Linear: <x, y>.
double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

/// Full n x n Gram matrix; the upper triangle is computed and mirrored so
/// the result is exactly symmetric.
DenseMatrix gram_full(const KernelSpec& spec, const Dataset& data);

/// Columns `cols` of the Gram matrix (n x |cols|) without forming the rest.
DenseMatrix gram_columns(const KernelSpec& spec, const Dataset& data, const IndexSet& cols);

/// Validates that `indices` are distinct and inside [0, n).
void check_index_set(const IndexSet& indices, Eigen::Index n);

// Access to an n x n SPSD kernel matrix by columns and sub-blocks.  The
// Nystrom drivers only see the matrix through this interface.
class KernelAccess {
 public:
  virtual ~KernelAccess() = default;

  virtual Eigen::Index size() const = 0;
  virtual DenseMatrix columns(const IndexSet& cols) const = 0;
  virtual DenseMatrix block(const IndexSet& rows, const IndexSet& cols) const = 0;
};

// Kernel matrix already held in memory.
class MatrixKernel final : public KernelAccess {
 public:
  explicit MatrixKernel(DenseMatrix gram);

  Eigen::Index size() const override { return gram_.rows(); }
  DenseMatrix columns(const IndexSet& cols) const override;
  DenseMatrix block(const IndexSet& rows, const IndexSet& cols) const override;

  const DenseMatrix& matrix() const noexcept { return gram_; }

 private:
  DenseMatrix gram_;
};

// Kernel entries evaluated on demand from the data.
class DatasetKernel final : public KernelAccess {
 public:
  DatasetKernel(KernelSpec spec, Dataset data);

  Eigen::Index size() const override { return data_.n(); }
  DenseMatrix columns(const IndexSet& cols) const override;
  DenseMatrix block(const IndexSet& rows, const IndexSet& cols) const override;

  DenseMatrix full() const { return gram_full(spec_, data_); }

 private:
  KernelSpec spec_;
  Dataset data_;
};

}  // namespace bnys
