#ifndef RREX_TESTS_ORACLES_HPP
#define RREX_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "rrex/linalg.hpp"

// Independent test oracles: deliberately avoid the library's SVD path so the
// values they produce stand on their own arithmetic.
namespace oracles {

using rrex::linalg::Matrix;
using rrex::linalg::Vector;

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index m,
                            Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Matrix a(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = unif(rng);
  }
  return a;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = unif(rng);
  return v;
}

/// Rank-r matrix as a product of two full-rank factors.
inline Matrix random_rank_matrix(std::mt19937_64& rng, Eigen::Index m,
                                 Eigen::Index n, Eigen::Index r) {
  return random_matrix(rng, m, r) * random_matrix(rng, r, n);
}

inline double det3(const Matrix& b) {
  return b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
         b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
         b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
}

/// Eigenvalues of a symmetric 3x3 matrix from the trigonometric closed form
/// of its characteristic polynomial, sorted descending.
inline std::array<double, 3> symmetric3_eigenvalues(const Matrix& a) {
  const double p1 =
      a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  std::array<double, 3> eig;
  if (p1 == 0.0) {
    eig = {a(0, 0), a(1, 1), a(2, 2)};
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
  }
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) +
                    (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Matrix b = (a - q * Matrix::Identity(3, 3)) / p;
  const double r = std::clamp(det3(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  eig = {e1, 3.0 * q - e1 - e3, e3};
  return eig;
}

/// Explicit Gaussian elimination with partial pivoting; small dense systems.
inline Vector solve_gauss(Matrix a, Vector b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index row = col + 1; row < n; ++row) {
      if (std::abs(a(row, col)) > std::abs(a(pivot, col))) pivot = row;
    }
    a.row(col).swap(a.row(pivot));
    std::swap(b(col), b(pivot));
    for (Eigen::Index row = col + 1; row < n; ++row) {
      const double factor = a(row, col) / a(col, col);
      a.row(row) -= factor * a.row(col);
      b(row) -= factor * b(col);
    }
  }
  Vector x(n);
  for (Eigen::Index row = n - 1; row >= 0; --row) {
    double acc = b(row);
    for (Eigen::Index col = row + 1; col < n; ++col) {
      acc -= a(row, col) * x(col);
    }
    x(row) = acc / a(row, row);
  }
  return x;
}

inline Matrix inverse2(const Matrix& a) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Matrix inv(2, 2);
  inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return inv / det;
}

/// Power-iteration estimate of the largest singular value.
inline double spectral_norm_power(const Matrix& a, int iters = 2000) {
  Vector v = Vector::Ones(a.cols());
  v.normalize();
  double sigma2 = 0.0;
  for (int i = 0; i < iters; ++i) {
    Vector w = a.transpose() * (a * v);
    sigma2 = w.norm();
    if (sigma2 == 0.0) return 0.0;
    v = w / sigma2;
  }
  return std::sqrt(sigma2);
}

/// Chebyshev polynomial of the first kind at x >= 1.
inline double chebyshev_t(int k, double x) {
  return std::cosh(k * std::acosh(x));
}

}  // namespace oracles

#endif
