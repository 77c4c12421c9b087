#pragma once

// Reference computations used only by the tests.  They deliberately avoid
// the library's numerical routines (and Eigen's decompositions) so they can
// check them independently.

#include "bnys/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using bnys::DenseMatrix;
using bnys::Vector;

struct Eig {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // columns match `values`
};

// Cyclic Jacobi rotations on a symmetric matrix.
inline Eig jacobi_eigen(DenseMatrix a) {
  const Eigen::Index n = a.rows();
  DenseMatrix v = DenseMatrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) off += a(i, j) * a(i, j);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) total += a(i, j) * a(i, j);
    if (off <= 1e-30 * std::max(total, 1e-300)) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  Eig out;
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values.push_back(a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]));
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Best rank-k approximation via the Jacobi oracle.
inline DenseMatrix truncate(const DenseMatrix& a, Eigen::Index k) {
  const Eig e = jacobi_eigen(a);
  DenseMatrix out = DenseMatrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < k; ++i) out += e.values[static_cast<std::size_t>(i)] * e.vectors.col(i) * e.vectors.col(i).transpose();
  return out;
}

// Eckart-Young error of the best rank-k approximation of a symmetric PSD matrix.
inline double tail_norm(const DenseMatrix& a, Eigen::Index k) {
  const Eig e = jacobi_eigen(a);
  double acc = 0.0;
  for (std::size_t i = static_cast<std::size_t>(k); i < e.values.size(); ++i) acc += e.values[i] * e.values[i];
  return std::sqrt(acc);
}

// Gauss-Jordan inverse with partial pivoting.
inline DenseMatrix explicit_inverse(DenseMatrix a) {
  const Eigen::Index n = a.rows();
  DenseMatrix inv = DenseMatrix::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    a.row(col).swap(a.row(piv));
    inv.row(col).swap(inv.row(piv));
    const double d = a(col, col);
    a.row(col) /= d;
    inv.row(col) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      a.row(r) -= f * a.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

// Student t density.
inline double t_pdf(double x, double df) {
  const double logc = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) - 0.5 * std::log(df * M_PI);
  return std::exp(logc - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

// P(T <= t) by composite Simpson integration of the density from 0 to |t|.
inline double t_cdf(double t, double df, int panels = 200000) {
  const double x = std::abs(t);
  const double h = x / panels;
  double acc = t_pdf(0.0, df) + t_pdf(x, df);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * t_pdf(i * h, df);
  const double half = acc * h / 3.0;
  return t >= 0 ? 0.5 + half : 0.5 - half;
}

inline double sq_dist(const DenseMatrix& cols, Eigen::Index a, Eigen::Index b) {
  double acc = 0.0;
  for (Eigen::Index r = 0; r < cols.rows(); ++r) acc += (cols(r, a) - cols(r, b)) * (cols(r, a) - cols(r, b));
  return acc;
}

// Total squared distance of every column to its nearest medoid.
inline double medoid_cost(const DenseMatrix& cols, const std::vector<Eigen::Index>& medoids) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    double best = INFINITY;
    for (auto m : medoids) best = std::min(best, sq_dist(cols, m, j));
    total += best;
  }
  return total;
}

// Minimum medoid cost over all pairs.
inline double best_pair_cost(const DenseMatrix& cols) {
  double best = INFINITY;
  for (Eigen::Index a = 0; a < cols.cols(); ++a)
    for (Eigen::Index b = a + 1; b < cols.cols(); ++b) best = std::min(best, medoid_cost(cols, {a, b}));
  return best;
}

inline DenseMatrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  DenseMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = nd(gen);
  return out;
}

inline DenseMatrix random_spsd(std::mt19937_64& gen, Eigen::Index n, Eigen::Index rank) {
  const DenseMatrix x = random_matrix(gen, n, rank);
  return x * x.transpose();
}

}  // namespace oracle
