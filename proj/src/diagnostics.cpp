#include "rrex/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace rrex::diagnostics {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_symmetric(const Matrix& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}
}  // namespace

ThetaBounds theta_upper_bounds(const Matrix& f_jac, int k) {
  if (k < 1) throw InvalidParameterError("theta_upper_bounds: k must be >= 1");
  if (f_jac.rows() != f_jac.cols()) {
    throw DimensionError("theta_upper_bounds: Jacobian must be square");
  }
  ThetaBounds b;
  b.k = k;
  b.power = std::pow(linalg::spectral_norm(f_jac), k);

  const Matrix e = Matrix::Identity(f_jac.rows(), f_jac.cols()) - f_jac;
  const Matrix e_sym = 0.5 * (e + e.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(e_sym);
  const double nu = es.eigenvalues().minCoeff();
  if (nu > 0.0) {
    const double sigma = linalg::spectral_norm(e);
    const double base = 1.0 - (nu * nu) / (sigma * sigma);
    b.pd_hermitian = std::pow(std::max(base, 0.0), 0.5 * k);
  }

  if (is_symmetric(f_jac)) {
    Eigen::SelfAdjointEigenSolver<Matrix> fs(0.5 * (f_jac + f_jac.transpose()));
    const double alpha = fs.eigenvalues().minCoeff();
    const double beta = fs.eigenvalues().maxCoeff();
    if (beta < 1.0) {
      const double spread = beta - alpha;
      if (spread <= 1e-14 * std::max(1.0, std::abs(beta))) {
        // Single eigenvalue: a degree-1 polynomial annihilates it.
        b.chebyshev = 0.0;
        b.degree_one_exact = true;
      } else {
        const double kappa = (1.0 - alpha) / (1.0 - beta);
        const double rho = (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);
        b.chebyshev = 2.0 * std::pow(rho, k);
      }
    }
  }
  return b;
}

Matrix jacobian_fd(const std::function<Vector(const Vector&)>& f,
                   const Vector& x, double h) {
  if (!(h > 0.0)) throw InvalidParameterError("jacobian_fd: h must be > 0");
  const Index n = x.size();
  Matrix jac(n, n);
  Vector xp = x, xm = x;
  for (Index j = 0; j < n; ++j) {
    xp(j) = x(j) + h;
    xm(j) = x(j) - h;
    const Vector fp = f(xp);
    const Vector fm = f(xm);
    if (fp.size() != n || fm.size() != n) {
      throw DimensionError("jacobian_fd: map changed dimension");
    }
    if (!fp.allFinite() || !fm.allFinite()) {
      throw NumericalError("jacobian_fd: non-finite map evaluation");
    }
    jac.col(j) = (fp - fm) / (2.0 * h);
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return jac;
}

Matrix krylov_matrix(const Matrix& f_jac, const Vector& y, int k) {
  if (f_jac.rows() != f_jac.cols()) {
    throw DimensionError("krylov_matrix: matrix must be square");
  }
  if (y.size() != f_jac.rows()) {
    throw DimensionError("krylov_matrix: vector length mismatch");
  }
  if (k < 1) throw InvalidParameterError("krylov_matrix: k must be >= 1");
  if (k > f_jac.rows()) {
    throw InvalidParameterError("krylov_matrix: k must not exceed the dimension");
  }
  if (y.norm() == 0.0) throw ZeroRankError("krylov_matrix: zero start vector");
  Matrix s(y.size(), k);
  s.col(0) = y;
  for (int j = 1; j < k; ++j) s.col(j) = f_jac * s.col(j - 1);
  return s;
}

KrylovFloorReport check_global_assumption(const Matrix& f_jac,
                                          const std::vector<Vector>& error_dirs,
                                          int k) {
  KrylovFloorReport report;
  for (const Vector& e : error_dirs) {
    const double norm = e.norm();
    if (norm == 0.0) throw ZeroRankError("check_global_assumption: zero direction");
    const Matrix s = krylov_matrix(f_jac, e / norm, k);
    const linalg::SvdFactors f = linalg::svd(s);
    const double sigma_k = f.sigma(f.sigma.size() - 1);
    report.sigma_k.push_back(sigma_k);
    if (!report.min_sigma || sigma_k < *report.min_sigma) {
      report.min_sigma = sigma_k;
    }
  }
  return report;
}

rre::IterateWindow companion_window(const rre::IterateWindow& window,
                                    const Matrix& f_jac_at_solution,
                                    const Vector& solution) {
  if (window.iterates.empty()) {
    throw DimensionError("companion_window: empty window");
  }
  if (f_jac_at_solution.rows() != window.dim() ||
      f_jac_at_solution.cols() != window.dim() ||
      solution.size() != window.dim()) {
    throw DimensionError("companion_window: dimension mismatch");
  }
  rre::IterateWindow tilde;
  tilde.base_index = window.base_index;
  tilde.iterates.reserve(window.iterates.size());
  tilde.iterates.push_back(window.iterates.front());
  for (size_t m = 1; m < window.iterates.size(); ++m) {
    const Vector& prev = tilde.iterates.back();
    tilde.iterates.push_back(solution + f_jac_at_solution * (prev - solution));
  }
  return tilde;
}

PerturbationQuantities perturbation_quantities(const rre::IterateWindow& window,
                                               const Matrix& f_jac_at_solution,
                                               const Vector& solution,
                                               double rank_tol) {
  const rre::IterateWindow tilde =
      companion_window(window, f_jac_at_solution, solution);
  const rre::DifferenceMatrices d = rre::build_differences(window);
  const rre::DifferenceMatrices dt = rre::build_differences(tilde);
  if (rank_tol < 0.0) rank_tol = linalg::default_rank_tol(d.w);

  const Matrix w_pinv = linalg::pseudoinverse(d.w, rank_tol);
  const Matrix wt_pinv = linalg::pseudoinverse(dt.w, rank_tol);
  const Matrix remainder = d.w - dt.w;

  PerturbationQuantities q;
  q.companion_pinv_norm = linalg::spectral_norm(wt_pinv);
  q.remainder_norm = linalg::spectral_norm(remainder);
  q.delta = q.companion_pinv_norm * q.remainder_norm;
  q.pinv_perturbation_norm = linalg::spectral_norm(w_pinv - wt_pinv);
  q.delta_below_one = q.delta < 1.0;
  if (q.delta_below_one) {
    q.pinv_perturbation_bound =
        std::sqrt(2.0) * q.delta / (1.0 - q.delta) * q.companion_pinv_norm;
    q.bound_holds = q.pinv_perturbation_norm <=
                    q.pinv_perturbation_bound * (1.0 + 1e-10) + 1e-300;
  }
  q.companion_rank = linalg::rank_under(linalg::svd(dt.w), rank_tol);
  return q;
}

ErrorFormulaCheck error_formula_check(const rre::IterateWindow& window,
                                      const Matrix& f_jac_at_solution,
                                      const Vector& solution, double rank_tol) {
  const rre::IterateWindow tilde =
      companion_window(window, f_jac_at_solution, solution);
  const int k = window.k();

  const rre::ExtrapolationResult direct = rre::extrapolate(window, rank_tol);
  const rre::ExtrapolationResult comp = rre::extrapolate(tilde, rank_tol);

  const rre::DifferenceMatrices d = rre::build_differences(window);
  const rre::DifferenceMatrices dt = rre::build_differences(tilde);
  if (rank_tol < 0.0) rank_tol = linalg::default_rank_tol(d.w);

  // All second-order parts of the window relative to its companion orbit.
  const Matrix u = d.u.leftCols(k);
  const Matrix ut = dt.u.leftCols(k);
  const Matrix u_check = u - ut;
  const Vector u_n_check = d.u.col(0) - dt.u.col(0);

  const Matrix w_pinv = linalg::pseudoinverse(d.w, rank_tol);
  const Matrix wt_pinv = linalg::pseudoinverse(dt.w, rank_tol);
  const Matrix h = w_pinv - wt_pinv;

  ErrorFormulaCheck chk;
  chk.direct_difference = direct.s - comp.s;
  chk.reconstructed = -(ut * (wt_pinv * u_n_check)) -
                      (u * (h * d.u.col(0))) - (u_check * (wt_pinv * d.u.col(0)));
  const double scale =
      std::max(chk.direct_difference.norm(), chk.reconstructed.norm());
  chk.relative_gap =
      scale > 0.0
          ? (chk.direct_difference - chk.reconstructed).norm() / scale
          : 0.0;
  return chk;
}

double jbilou_sadok_condition(const std::vector<Vector>& u_cols) {
  if (u_cols.empty()) {
    throw DimensionError("jbilou_sadok_condition: no columns");
  }
  const Index n = u_cols.front().size();
  Matrix y(n, static_cast<Index>(u_cols.size()));
  for (size_t i = 0; i < u_cols.size(); ++i) {
    if (u_cols[i].size() != n) {
      throw DimensionError("jbilou_sadok_condition: mismatched column lengths");
    }
    const double norm = u_cols[i].norm();
    if (norm == 0.0) {
      throw ZeroRankError("jbilou_sadok_condition: zero column");
    }
    y.col(static_cast<Index>(i)) = u_cols[i] / norm;
  }
  // Gram determinant via eigenvalues; clamp tiny negatives from roundoff.
  Eigen::SelfAdjointEigenSolver<Matrix> es(y.transpose() * y);
  double det = 1.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    det *= std::max(es.eigenvalues()(i), 0.0);
  }
  return std::sqrt(det);
}

CycleDiagnostics cycle_diagnostics(const rre::IterateWindow& window,
                                   const Matrix* f_jac_at_solution,
                                   const Vector* solution) {
  const rre::DifferenceMatrices d = rre::build_differences(window);
  const int k = window.k();
  std::vector<Vector> u_cols;
  u_cols.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) u_cols.push_back(d.u.col(i));

  CycleDiagnostics cd;
  cd.jbilou_sadok = jbilou_sadok_condition(u_cols);
  if (f_jac_at_solution != nullptr && solution != nullptr &&
      k <= window.dim()) {
    const Vector err = window.iterates.front() - *solution;
    if (err.norm() > 0.0) {
      const KrylovFloorReport rep =
          check_global_assumption(*f_jac_at_solution, {err}, k);
      cd.sigma_k_krylov = rep.sigma_k.front();
    }
  }
  return cd;
}

}  // namespace rrex::diagnostics
