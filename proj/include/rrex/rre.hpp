#ifndef RREX_RRE_HPP
#define RREX_RRE_HPP

#include <vector>

#include "rrex/linalg.hpp"

namespace rrex::rre {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

/// Window of k+2 consecutive iterates x_n .. x_{n+k+1} of a fixed-point
/// sequence, all of the same dimension.
struct IterateWindow {
  long base_index = 0;           ///< n
  std::vector<Vector> iterates;  ///< size k+2, each of length N

  int k() const { return static_cast<int>(iterates.size()) - 2; }
  Index dim() const { return iterates.empty() ? 0 : iterates.front().size(); }
};

/// First and second difference matrices of a window:
///   column i of u equals x_{n+i+1} - x_{n+i}           (N x (k+1))
///   column i of w equals u-column(i+1) - u-column(i)   (N x k)
struct DifferenceMatrices {
  Matrix u;
  Matrix w;
};

struct ExtrapolationResult {
  Vector s;                  ///< extrapolated approximation
  Vector gamma;              ///< affine combination weights, size k+1, sums to 1
  Vector xi;                 ///< unconstrained weights, size k
  double residual_norm = 0;  ///< ||u_n + W xi|| (equals ||U gamma||)
  double gamma_abs_sum = 0;  ///< sum_i |gamma_i|
  long n = 0;
  int k = 0;
  Index dim = 0;
  bool converged_window = false;  ///< window already sits at the fixed point
  Index w_rank = 0;               ///< numerical rank of W under rank_tol
};

/// Builds the difference matrices of a window. Throws DimensionError on
/// mismatched vector lengths.
DifferenceMatrices build_differences(const IterateWindow& w);

/// Extrapolates a window: xi solves the unconstrained least-squares problem
/// min ||u_n + W xi|| (xi = -W^+ u_n), s = x_n + [u_n|...|u_{n+k-1}] xi, and
/// gamma is recovered from xi. A window whose differences all vanish returns
/// s = x_n with converged_window set; vanishing W with nonzero u_n throws
/// DegenerateWindowError.
ExtrapolationResult extrapolate(const IterateWindow& w, double rank_tol = -1.0);

/// Solves min ||U gamma|| subject to sum_i gamma_i = 1 directly through the
/// Gram-matrix stationarity system; cross-check oracle for extrapolate's
/// gamma. An all-zero U returns the first unit vector.
Vector gamma_direct(const Matrix& u_cols, double rank_tol = -1.0);

/// gamma_0 = 1 - xi_0, gamma_i = xi_{i-1} - xi_i, gamma_k = xi_{k-1}.
Vector gamma_from_xi(const Vector& xi);

/// xi_j = sum_{i=j+1..k} gamma_i.
Vector xi_from_gamma(const Vector& gamma);

}  // namespace rrex::rre

#endif
