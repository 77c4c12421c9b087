#pragma once

#include "bnys/linalg.hpp"

#include <vector>

namespace bnys {

enum class WeightKind { Uniform, Exponential, Ridge };

struct WeightScheme {
  WeightKind kind = WeightKind::Uniform;
  double eta = 0.01;
  std::vector<double> lambda_grid;

  static WeightScheme uniform();
  static WeightScheme exponential(double eta = 0.01);
  static WeightScheme ridge(std::vector<double> grid = default_lambda_grid());

  /// 1e-6, 1e-5, ..., 1e2
  static std::vector<double> default_lambda_grid();

  void validate() const;
};

std::vector<double> uniform_weights(std::size_t p);

/// w_i = exp(-eta * errors_i) / Z
std::vector<double> exponential_weights(const std::vector<double>& errors, double eta);

/// Ridge regression of the vectorized target block on the vectorized
/// learner blocks.  Weights are neither clipped nor normalized.
std::vector<double> ridge_weights(const std::vector<DenseMatrix>& learner_blocks, const DenseMatrix& target,
                                  double lambda);

/// Grid point whose V1-fitted weights give the smallest Frobenius error on
/// the tuning blocks; the earliest grid entry wins ties.
double tune_lambda(const std::vector<DenseMatrix>& fit_blocks, const DenseMatrix& fit_target,
                   const std::vector<DenseMatrix>& tune_blocks, const DenseMatrix& tune_target,
                   const std::vector<double>& grid);

/// Applies `scheme` given each learner's prediction on the fixed validation
/// block (V1) and on the tuning block (V2, used by ridge only).
std::vector<double> fit_weights(const WeightScheme& scheme, const std::vector<DenseMatrix>& fit_blocks,
                                const DenseMatrix& fit_target, const std::vector<DenseMatrix>& tune_blocks,
                                const DenseMatrix& tune_target);

}  // namespace bnys
