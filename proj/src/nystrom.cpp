#include "bnys/nystrom.hpp"

#include "bnys/error.hpp"

#include <numeric>
#include <string>

namespace bnys {

namespace {

IndexSet all_indices(Eigen::Index n) {
  IndexSet out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), Eigen::Index{0});
  return out;
}

void check_model(const MixtureModel& model) {
  if (model.learners.empty()) throw Error(ErrorCode::EmptyModel, "mixture has no learners");
  if (model.learners.size() != model.weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, "learner and weight counts differ");
  }
}

}  // namespace

MixtureModel MixtureModel::reweighted(std::vector<double> new_weights) const {
  return prefix(learners.size(), std::move(new_weights));
}

MixtureModel MixtureModel::prefix(std::size_t count, std::vector<double> new_weights) const {
  if (count > learners.size() || new_weights.size() != count) {
    throw Error(ErrorCode::DimensionMismatch, "prefix size does not match weights");
  }
  MixtureModel out;
  out.learners.assign(learners.begin(), learners.begin() + static_cast<std::ptrdiff_t>(count));
  out.weights = std::move(new_weights);
  return out;
}

NystromFactor standard_nystrom(DenseMatrix c, IndexSet indices, Eigen::Index k) {
  const Eigen::Index m = c.cols();
  if (static_cast<Eigen::Index>(indices.size()) != m) {
    throw Error(ErrorCode::DimensionMismatch, "index count differs from column count");
  }
  if (k < 1 || k > m) {
    throw Error(ErrorCode::RankOutOfRange, "k=" + std::to_string(k) + " outside [1, " + std::to_string(m) + "]");
  }
  check_index_set(indices, c.rows());

  const DenseMatrix w = c(indices, Eigen::all);
  const double scale = w.norm();
  if ((w - w.transpose()).norm() > 1e-10 * scale) {
    throw Error(ErrorCode::InconsistentBlock, "W = C[I, :] is not symmetric");
  }
  NystromFactor f;
  f.wk_pinv = pinv_rank_k(w, k);
  f.c = std::move(c);
  f.indices = std::move(indices);
  f.k = k;
  return f;
}

DenseMatrix evaluate_block(const NystromFactor& f, const IndexSet& rows, const IndexSet& cols) {
  check_index_set(rows, f.n());
  check_index_set(cols, f.n());
  const DenseMatrix left = f.c(rows, Eigen::all) * f.wk_pinv;
  return left * f.c(cols, Eigen::all).transpose();
}

DenseMatrix reconstruct_full(const NystromFactor& f, Eigen::Index limit) {
  if (f.n() > limit) {
    throw Error(ErrorCode::TooLarge, "n=" + std::to_string(f.n()) + " exceeds limit " + std::to_string(limit));
  }
  const IndexSet all = all_indices(f.n());
  return evaluate_block(f, all, all);
}

DenseMatrix mixture_block(const MixtureModel& model, const IndexSet& rows, const IndexSet& cols) {
  check_model(model);
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < model.learners.size(); ++i) {
    out += model.weights[i] * evaluate_block(model.learners[i], rows, cols);
  }
  return out;
}

DenseMatrix mixture_full(const MixtureModel& model, Eigen::Index limit) {
  check_model(model);
  const Eigen::Index n = model.learners.front().n();
  if (n > limit) {
    throw Error(ErrorCode::TooLarge, "n=" + std::to_string(n) + " exceeds limit " + std::to_string(limit));
  }
  Eigen::Index total = 0;
  for (const auto& f : model.learners) {
    if (f.n() != n) throw Error(ErrorCode::DimensionMismatch, "learners disagree on n");
    total += f.m();
  }
  // [C_1 ... C_p] blockdiag(w_i P_i) [C_1 ... C_p]^T
  DenseMatrix stacked(n, total);
  DenseMatrix core = DenseMatrix::Zero(total, total);
  Eigen::Index offset = 0;
  for (std::size_t i = 0; i < model.learners.size(); ++i) {
    const auto& f = model.learners[i];
    stacked.middleCols(offset, f.m()) = f.c;
    core.block(offset, offset, f.m(), f.m()) = model.weights[i] * f.wk_pinv;
    offset += f.m();
  }
  const DenseMatrix left = stacked * core;
  DenseMatrix out = left * stacked.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace bnys
