#include "bnys/weighting.hpp"

#include "bnys/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace bnys {

namespace {

DenseMatrix design_matrix(const std::vector<DenseMatrix>& blocks, const DenseMatrix& target) {
  const Eigen::Index q = target.size();
  DenseMatrix a(q, static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].rows() != target.rows() || blocks[i].cols() != target.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "learner block " + std::to_string(i) + " is not conformal");
    }
    a.col(static_cast<Eigen::Index>(i)) = blocks[i].reshaped();
  }
  return a;
}

double combined_error(const std::vector<DenseMatrix>& blocks, const std::vector<double>& w, const DenseMatrix& target) {
  DenseMatrix acc = -target;
  for (std::size_t i = 0; i < blocks.size(); ++i) acc += w[i] * blocks[i];
  return acc.norm();
}

}  // namespace

WeightScheme WeightScheme::uniform() { return {WeightKind::Uniform, 0.01, {}}; }

WeightScheme WeightScheme::exponential(double eta) { return {WeightKind::Exponential, eta, {}}; }

WeightScheme WeightScheme::ridge(std::vector<double> grid) { return {WeightKind::Ridge, 0.01, std::move(grid)}; }

std::vector<double> WeightScheme::default_lambda_grid() {
  std::vector<double> grid;
  for (int e = -6; e <= 2; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

void WeightScheme::validate() const {
  if (kind == WeightKind::Exponential && !(eta > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "eta must be positive");
  }
  if (kind == WeightKind::Ridge) {
    if (lambda_grid.empty()) throw Error(ErrorCode::InvalidConfig, "lambda grid is empty");
    if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()) || lambda_grid.front() < 0.0) {
      throw Error(ErrorCode::InvalidConfig, "lambda grid must be non-negative and ascending");
    }
  }
}

std::vector<double> uniform_weights(std::size_t p) {
  if (p == 0) throw Error(ErrorCode::ZeroLearners, "no learners to weight");
  return std::vector<double>(p, 1.0 / static_cast<double>(p));
}

std::vector<double> exponential_weights(const std::vector<double>& errors, double eta) {
  if (errors.empty()) throw Error(ErrorCode::ZeroLearners, "no learners to weight");
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidConfig, "eta must be positive");
  // Shifting by the minimum cancels in Z and keeps exp() in range.
  const double lo = *std::min_element(errors.begin(), errors.end());
  std::vector<double> w(errors.size());
  double z = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!std::isfinite(errors[i])) throw Error(ErrorCode::InvalidConfig, "non-finite learner error");
    w[i] = std::exp(-eta * (errors[i] - lo));
    z += w[i];
  }
  for (auto& v : w) v /= z;
  return w;
}

std::vector<double> ridge_weights(const std::vector<DenseMatrix>& learner_blocks, const DenseMatrix& target,
                                  double lambda) {
  if (learner_blocks.empty()) throw Error(ErrorCode::ZeroLearners, "no learners to weight");
  const DenseMatrix a = design_matrix(learner_blocks, target);
  const Vector b = target.reshaped();
  const Vector w = ridge_solve(a, b, lambda);
  return {w.data(), w.data() + w.size()};
}

double tune_lambda(const std::vector<DenseMatrix>& fit_blocks, const DenseMatrix& fit_target,
                   const std::vector<DenseMatrix>& tune_blocks, const DenseMatrix& tune_target,
                   const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "lambda grid is empty");
  if (fit_blocks.size() != tune_blocks.size()) {
    throw Error(ErrorCode::DimensionMismatch, "fit and tuning learner counts differ");
  }
  std::optional<double> best_lambda;
  double best_error = std::numeric_limits<double>::infinity();
  std::optional<Error> last_failure;
  for (const double lambda : grid) {
    std::vector<double> w;
    try {
      w = ridge_weights(fit_blocks, fit_target, lambda);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSystem) throw;
      last_failure = e;
      continue;
    }
    const double err = combined_error(tune_blocks, w, tune_target);
    if (!best_lambda || err < best_error) {
      best_error = err;
      best_lambda = lambda;
    }
  }
  if (!best_lambda) throw *last_failure;
  return *best_lambda;
}

std::vector<double> fit_weights(const WeightScheme& scheme, const std::vector<DenseMatrix>& fit_blocks,
                                const DenseMatrix& fit_target, const std::vector<DenseMatrix>& tune_blocks,
                                const DenseMatrix& tune_target) {
  switch (scheme.kind) {
    case WeightKind::Uniform:
      return uniform_weights(fit_blocks.size());
    case WeightKind::Exponential: {
      std::vector<double> errors;
      errors.reserve(fit_blocks.size());
      for (const auto& block : fit_blocks) errors.push_back((block - fit_target).norm());
      return exponential_weights(errors, scheme.eta);
    }
    case WeightKind::Ridge: {
      const double lambda = tune_lambda(fit_blocks, fit_target, tune_blocks, tune_target, scheme.lambda_grid);
      return ridge_weights(fit_blocks, fit_target, lambda);
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown weight scheme");
}

}  // namespace bnys
