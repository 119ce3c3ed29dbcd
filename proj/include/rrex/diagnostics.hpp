#ifndef RREX_DIAGNOSTICS_HPP
#define RREX_DIAGNOSTICS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rrex/rre.hpp"

namespace rrex::diagnostics {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

/// Upper bounds on the one-shot linear contraction factor of a window of
/// size k, derived from the Jacobian at the solution. Bounds whose
/// hypotheses fail are absent rather than wrong.
struct ThetaBounds {
  int k = 1;
  double power = 1.0;  ///< ||F||^k, always available
  /// (1 - nu^2/sigma^2)^{k/2} when the symmetric part of I - F is positive
  /// definite (nu its smallest eigenvalue, sigma the largest singular value
  /// of I - F).
  std::optional<double> pd_hermitian;
  /// 2 ((sqrt(kappa)-1)/(sqrt(kappa)+1))^k with kappa = (1-alpha)/(1-beta)
  /// when F is symmetric with eigenvalues in [alpha, beta], beta < 1. A
  /// collapsed spectrum (alpha == beta) reports 0 and sets degree_one_exact.
  std::optional<double> chebyshev;
  bool degree_one_exact = false;
};

ThetaBounds theta_upper_bounds(const Matrix& f_jac, int k);

/// Central-difference Jacobian, column j = (f(x + h e_j) - f(x - h e_j))/2h.
Matrix jacobian_fd(const std::function<Vector(const Vector&)>& f,
                   const Vector& x, double h = 1e-5);

/// Krylov matrix [y | Fy | ... | F^{k-1} y], N x k. Rejects k > N.
Matrix krylov_matrix(const Matrix& f_jac, const Vector& y, int k);

/// sigma_k of the Krylov matrix spanned by each supplied error direction
/// (normalized internally), plus the running minimum. A direction whose
/// Krylov matrix has rank below k reports sigma_k = 0.
struct KrylovFloorReport {
  std::vector<double> sigma_k;
  std::optional<double> min_sigma;
};
KrylovFloorReport check_global_assumption(const Matrix& f_jac,
                                          const std::vector<Vector>& error_dirs,
                                          int k);

/// Second-difference perturbation quantities of a window against its
/// linearized companion orbit (needs the solution and the Jacobian there).
struct PerturbationQuantities {
  double delta = 0;  ///< ||companion W pinv|| * ||W - companion W||
  double pinv_perturbation_norm = 0;   ///< ||W^+ - companion W^+||
  double pinv_perturbation_bound = 0;  ///< sqrt(2) delta/(1-delta) * ||companion W^+||
  double companion_pinv_norm = 0;
  double remainder_norm = 0;  ///< ||W - companion W||
  bool delta_below_one = false;
  bool bound_holds = false;
  Index companion_rank = 0;  ///< numerical rank of the companion W
};

PerturbationQuantities perturbation_quantities(const rre::IterateWindow& window,
                                               const Matrix& f_jac_at_solution,
                                               const Vector& solution,
                                               double rank_tol = -1.0);

/// Orbit of the linearization y -> s + F(s)(y - s) started from the window's
/// first vector, same length as the window.
rre::IterateWindow companion_window(const rre::IterateWindow& window,
                                    const Matrix& f_jac_at_solution,
                                    const Vector& solution);

/// Splits the extrapolant into its companion-linear part and the
/// second-order part assembled from the pseudoinverse-perturbation identity;
/// the two routes must agree.
struct ErrorFormulaCheck {
  Vector direct_difference;  ///< extrapolant minus companion extrapolant
  Vector reconstructed;      ///< second-order part from the identity
  double relative_gap = 0;
};
ErrorFormulaCheck error_formula_check(const rre::IterateWindow& window,
                                      const Matrix& f_jac_at_solution,
                                      const Vector& solution,
                                      double rank_tol = -1.0);

/// sqrt(det(Y^T Y)) for Y the matrix of normalized columns; 1 for an
/// orthonormal set, 0 for a linearly dependent one. Throws ZeroRankError on a
/// zero column.
double jbilou_sadok_condition(const std::vector<Vector>& u_cols);

/// Per-cycle diagnostics derived from a retained window.
struct CycleDiagnostics {
  double jbilou_sadok = 0;
  std::optional<double> sigma_k_krylov;  ///< needs Jacobian and solution
};
CycleDiagnostics cycle_diagnostics(const rre::IterateWindow& window,
                                   const Matrix* f_jac_at_solution,
                                   const Vector* solution);

/// Problem-level report assembled by the CLI layer.
struct DiagnosticsReport {
  double l_estimate = 0;  ///< ||F(s)||, spectral norm at the solution
  double spectral_radius = 0;
  bool contraction = false;  ///< l_estimate < 1
  std::vector<ThetaBounds> theta;
  std::vector<double> krylov_sigma_trace;  ///< per cycle
  std::optional<double> krylov_sigma_min;
  std::vector<double> jbilou_sadok_trace;
  std::vector<double> gamma_abs_sums;
  std::optional<double> gamma_abs_max;  ///< empirical affine-weight bound
  std::optional<PerturbationQuantities> perturbation;
  std::vector<std::string> warnings;
};

}  // namespace rrex::diagnostics

#endif
