#include "rrex/rre.hpp"

#include <cmath>
#include <limits>

namespace rrex::rre {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate_window(const IterateWindow& w) {
  if (w.iterates.size() < 3) {
    throw DimensionError("window needs at least k+2 = 3 iterates");
  }
  const Index n = w.iterates.front().size();
  if (n < 1) throw DimensionError("window vectors must have dimension >= 1");
  for (const Vector& x : w.iterates) {
    if (x.size() != n) {
      throw DimensionError("window vectors have mismatched dimensions");
    }
    if (!x.allFinite()) {
      throw NumericalError("window contains non-finite iterates");
    }
  }
}

// Cancellation floor for difference entries, relative to the window scale.
double zero_threshold(const IterateWindow& w) {
  double scale = 0.0;
  for (const Vector& x : w.iterates) {
    scale = std::max(scale, x.cwiseAbs().maxCoeff());
  }
  return 32.0 * kEps * scale;
}
}  // namespace

DifferenceMatrices build_differences(const IterateWindow& w) {
  validate_window(w);
  const int k = w.k();
  const Index n = w.dim();
  DifferenceMatrices d;
  d.u.resize(n, k + 1);
  for (int i = 0; i <= k; ++i) {
    d.u.col(i) = w.iterates[i + 1] - w.iterates[i];
  }
  d.w.resize(n, k);
  for (int i = 0; i < k; ++i) {
    d.w.col(i) = d.u.col(i + 1) - d.u.col(i);
  }
  return d;
}

ExtrapolationResult extrapolate(const IterateWindow& w, double rank_tol) {
  const DifferenceMatrices d = build_differences(w);
  const int k = w.k();
  const Index dim = w.dim();
  if (rank_tol < 0.0) rank_tol = linalg::default_rank_tol(d.w);

  ExtrapolationResult r;
  r.n = w.base_index;
  r.k = k;
  r.dim = dim;

  const Vector& u_n = d.u.col(0);
  const double tiny = zero_threshold(w);
  const bool w_vanishes = d.w.cwiseAbs().maxCoeff() <= tiny;
  if (w_vanishes) {
    if (u_n.cwiseAbs().maxCoeff() <= tiny) {
      // Sequence already sits at the fixed point: s_{n,k} = x_n, gamma = e_0.
      r.s = w.iterates.front();
      r.gamma = Vector::Zero(k + 1);
      r.gamma(0) = 1.0;
      r.xi = Vector::Zero(k);
      r.residual_norm = 0.0;
      r.gamma_abs_sum = 1.0;
      r.converged_window = true;
      r.w_rank = 0;
      return r;
    }
    throw DegenerateWindowError(
        "second differences vanish while the first difference does not");
  }

  const linalg::SvdFactors f = linalg::svd(d.w);
  const double cutoff = rank_tol * f.sigma(0);
  Vector c = f.u.transpose() * u_n;
  for (Index i = 0; i < f.sigma.size(); ++i) {
    c(i) = (f.sigma(i) > cutoff) ? -c(i) / f.sigma(i) : 0.0;
  }
  r.xi = f.v * c;
  r.w_rank = linalg::rank_under(f, rank_tol);
  r.s = w.iterates.front() + d.u.leftCols(k) * r.xi;
  r.gamma = gamma_from_xi(r.xi);
  r.residual_norm = (u_n + d.w * r.xi).norm();
  r.gamma_abs_sum = r.gamma.cwiseAbs().sum();
  return r;
}

Vector gamma_direct(const Matrix& u_cols, double rank_tol) {
  if (u_cols.rows() < 1 || u_cols.cols() < 1) {
    throw DimensionError("gamma_direct: matrix must be at least 1x1");
  }
  const Index m = u_cols.cols();
  Vector e0 = Vector::Zero(m);
  e0(0) = 1.0;
  if (m == 1) return e0;  // the constraint forces gamma = (1)

  const double scale = u_cols.cwiseAbs().maxCoeff();
  if (scale == 0.0) return e0;

  // Stationarity of ||U g||^2 on the affine slice sum(g) = 1: there is a
  // multiplier t with (U^T U) g = t * ones. When ones has a component in the
  // null space of U^T U, that component alone reaches residual zero.
  const Matrix gram = u_cols.transpose() * u_cols;
  const Matrix gram_pinv = linalg::pseudoinverse(gram, rank_tol);
  const Vector ones = Vector::Ones(m);
  const Vector null_part = ones - gram_pinv * (gram * ones);
  if (null_part.norm() > 1e-10 * std::sqrt(static_cast<double>(m))) {
    return null_part / null_part.squaredNorm();
  }
  const Vector y = gram_pinv * ones;
  const double denom = ones.dot(y);
  if (denom <= 0.0) {
    throw NumericalError("gamma_direct: stationarity system is inconsistent");
  }
  return y / denom;
}

Vector gamma_from_xi(const Vector& xi) {
  const Index k = xi.size();
  if (k < 1) throw DimensionError("gamma_from_xi: xi must be nonempty");
  Vector g(k + 1);
  g(0) = 1.0 - xi(0);
  for (Index i = 1; i < k; ++i) g(i) = xi(i - 1) - xi(i);
  g(k) = xi(k - 1);
  return g;
}

Vector xi_from_gamma(const Vector& gamma) {
  const Index k = gamma.size() - 1;
  if (k < 1) throw DimensionError("xi_from_gamma: gamma must have length >= 2");
  Vector xi(k);
  double tail = 0.0;
  for (Index j = k; j >= 1; --j) {
    tail += gamma(j);
    xi(j - 1) = tail;
  }
  return xi;
}

}  // namespace rrex::rre
