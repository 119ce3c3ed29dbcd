#include "rrex/linalg.hpp"

#include <algorithm>
#include <limits>

namespace rrex::linalg {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_nonempty_finite(const Matrix& a, const char* op) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DimensionError(std::string(op) + ": matrix must be at least 1x1");
  }
  if (!a.allFinite()) {
    throw NumericalError(std::string(op) + ": non-finite entries in input");
  }
}
}  // namespace

double default_rank_tol(const Matrix& a) {
  return static_cast<double>(std::max(a.rows(), a.cols())) * kEps;
}

SvdFactors svd(const Matrix& a) {
  require_nonempty_finite(a, "svd");
  Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: kernel failed to converge");
  }
  SvdFactors f;
  f.u = dec.matrixU();
  f.sigma = dec.singularValues();
  f.v = dec.matrixV();
  f.rank = rank_under(f, default_rank_tol(a));
  return f;
}

Index rank_under(const SvdFactors& f, double rank_tol) {
  if (f.sigma.size() == 0) return 0;
  const double cutoff = rank_tol * f.sigma(0);
  Index r = 0;
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > cutoff && f.sigma(i) > 0.0) ++r;
  }
  return r;
}

Matrix pseudoinverse(const Matrix& a, double rank_tol) {
  require_nonempty_finite(a, "pseudoinverse");
  if (rank_tol < 0.0) rank_tol = default_rank_tol(a);
  const SvdFactors f = svd(a);
  const double cutoff = f.sigma.size() ? rank_tol * f.sigma(0) : 0.0;
  Vector inv = Vector::Zero(f.sigma.size());
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > cutoff && f.sigma(i) > 0.0) inv(i) = 1.0 / f.sigma(i);
  }
  return f.v * inv.asDiagonal() * f.u.transpose();
}

Vector min_norm_lsq(const Matrix& a, const Vector& b, double rank_tol) {
  require_nonempty_finite(a, "min_norm_lsq");
  if (b.size() != a.rows()) {
    throw DimensionError("min_norm_lsq: rhs length does not match row count");
  }
  if (rank_tol < 0.0) rank_tol = default_rank_tol(a);
  const SvdFactors f = svd(a);
  const double cutoff = f.sigma.size() ? rank_tol * f.sigma(0) : 0.0;
  Vector c = f.u.transpose() * b;
  for (Index i = 0; i < f.sigma.size(); ++i) {
    c(i) = (f.sigma(i) > cutoff && f.sigma(i) > 0.0) ? c(i) / f.sigma(i) : 0.0;
  }
  return f.v * c;
}

double smallest_nonzero_singular(const Matrix& a, double rank_tol) {
  require_nonempty_finite(a, "smallest_nonzero_singular");
  if (rank_tol < 0.0) rank_tol = default_rank_tol(a);
  const SvdFactors f = svd(a);
  const double cutoff = f.sigma.size() ? rank_tol * f.sigma(0) : 0.0;
  // sigma is sorted non-increasing; walk from the tail.
  for (Index i = f.sigma.size() - 1; i >= 0; --i) {
    if (f.sigma(i) > cutoff && f.sigma(i) > 0.0) return f.sigma(i);
  }
  throw ZeroRankError("smallest_nonzero_singular: matrix is numerically zero");
}

double spectral_norm(const Matrix& a) {
  require_nonempty_finite(a, "spectral_norm");
  Eigen::JacobiSVD<Matrix> dec(a);
  return dec.singularValues()(0);
}

double spectral_radius(const Matrix& a) {
  require_nonempty_finite(a, "spectral_radius");
  if (a.rows() != a.cols()) {
    throw DimensionError("spectral_radius: matrix must be square");
  }
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_radius: eigenvalue iteration failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace rrex::linalg
