#ifndef RREX_LINALG_HPP
#define RREX_LINALG_HPP

#include <Eigen/Dense>

#include "rrex/errors.hpp"

namespace rrex::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thin SVD  A = U * diag(sigma) * V^T  with sigma sorted non-increasing.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
  Index rank = 0;  ///< numerical rank under the default tolerance
};

/// Default relative rank cutoff: max(rows, cols) * machine epsilon.
/// Singular values <= tol * sigma_max count as zero.
double default_rank_tol(const Matrix& a);

/// Deterministic thin SVD. Throws NumericalError on non-finite input or
/// kernel failure.
SvdFactors svd(const Matrix& a);

/// Numerical rank of already-computed factors under a relative tolerance.
Index rank_under(const SvdFactors& f, double rank_tol);

/// Moore-Penrose pseudoinverse with relative rank cutoff rank_tol
/// (rank_tol < 0 selects the default). The zero matrix maps to the zero
/// matrix of transposed shape.
Matrix pseudoinverse(const Matrix& a, double rank_tol = -1.0);

/// Minimum-norm least-squares solution x = A^+ b of min ||A x - b||.
Vector min_norm_lsq(const Matrix& a, const Vector& b, double rank_tol = -1.0);

/// Smallest singular value above the rank cutoff. Throws ZeroRankError when
/// the matrix is numerically zero-rank.
double smallest_nonzero_singular(const Matrix& a, double rank_tol = -1.0);

/// Largest singular value (the l2-induced operator norm).
double spectral_norm(const Matrix& a);

/// Spectral radius max|lambda_i| of a square matrix.
double spectral_radius(const Matrix& a);

}  // namespace rrex::linalg

#endif
