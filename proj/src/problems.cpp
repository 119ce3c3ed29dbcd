#include "rrex/problems.hpp"

#include <cmath>
#include <random>

namespace rrex::problems {

namespace {

void check_fixed_point(ProblemSpec& spec) {
  const Vector& s = *spec.problem.solution;
  const double res = (spec.problem.f(s) - s).norm();
  if (res > 1e-10 * (1.0 + s.norm())) {
    throw NumericalError("problem '" + spec.name +
                         "': stored solution fails the fixed-point check");
  }
}

Matrix seeded_similarity(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int attempt = 0; attempt < 32; ++attempt) {
    Matrix basis = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) basis(i, j) += 0.3 * unif(rng);
    }
    Eigen::JacobiSVD<Matrix> dec(basis);
    const double cond =
        dec.singularValues()(0) / dec.singularValues()(n - 1);
    if (cond < 50.0) return basis;
  }
  throw NumericalError("could not draw a well-conditioned similarity basis");
}

Matrix build_iteration_matrix(const std::vector<double>& spectrum,
                              unsigned seed, bool similarity) {
  if (spectrum.empty()) {
    throw InvalidParameterError("spectrum must be nonempty");
  }
  for (double lambda : spectrum) {
    if (!(std::abs(lambda) < 1.0)) {
      throw InvalidParameterError("eigenvalue with |lambda| >= 1 rejected");
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(spectrum.size());
  Matrix t = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) t(i, i) = spectrum[i];
  if (similarity) {
    std::mt19937_64 rng(seed);
    const Matrix basis = seeded_similarity(n, rng);
    t = basis * t * basis.partialPivLu().solve(Matrix::Identity(n, n));
  }
  return t;
}

int distinct_count(const std::vector<double>& spectrum) {
  std::vector<double> seen;
  for (double lambda : spectrum) {
    bool fresh = true;
    for (double other : seen) {
      if (std::abs(lambda - other) <= 1e-12) {
        fresh = false;
        break;
      }
    }
    if (fresh) seen.push_back(lambda);
  }
  return static_cast<int>(seen.size());
}

}  // namespace

ProblemSpec make_linear(const std::vector<double>& spectrum, const Vector& d,
                        unsigned seed, bool similarity) {
  const Matrix t = build_iteration_matrix(spectrum, seed, similarity);
  const Eigen::Index n = t.rows();
  if (d.size() != n) {
    throw DimensionError("offset vector length does not match spectrum size");
  }
  const Matrix identity = Matrix::Identity(n, n);
  const Vector s = (identity - t).partialPivLu().solve(d);

  ProblemSpec spec;
  spec.name = "linear";
  spec.problem.dim = n;
  spec.problem.f = [t, d](const Vector& x) -> Vector { return t * x + d; };
  spec.problem.jacobian = [t](const Vector&) -> Matrix { return t; };
  spec.problem.solution = s;
  spec.jacobian_at_solution = t;
  spec.expected_degree = distinct_count(spectrum);
  spec.solution_method = "direct-solve";
  check_fixed_point(spec);
  return spec;
}

ProblemSpec make_quadratic_perturbed(const std::vector<double>& spectrum,
                                     double q_strength, unsigned seed,
                                     bool similarity) {
  if (q_strength < 0.0) {
    throw InvalidParameterError("q_strength must be >= 0");
  }
  const Matrix t = build_iteration_matrix(spectrum, seed, similarity);
  const Eigen::Index n = t.rows();
  const double t_norm = linalg::spectral_norm(t);
  if (!(t_norm < 1.0)) {
    throw InvalidParameterError("||T|| >= 1: no contraction ball");
  }

  const double q = q_strength;
  ProblemSpec spec;
  spec.name = "quadratic";
  spec.problem.dim = n;
  spec.problem.f = [t, q](const Vector& x) -> Vector {
    return t * x + q * x.cwiseProduct(x);
  };
  spec.problem.jacobian = [t, q](const Vector& x) -> Matrix {
    Matrix jac = t;
    jac.diagonal() += 2.0 * q * x;
    return jac;
  };
  spec.problem.solution = Vector::Zero(n);
  spec.jacobian_at_solution = t;
  if (q == 0.0) spec.expected_degree = distinct_count(spectrum);
  spec.solution_method = "zero-by-construction";

  if (q > 0.0) {
    // Seeded starts default to the ||x|| <= 0.5 ball; require a verified
    // contraction there by sampling the Jacobian norm on its boundary.
    const double radius = 0.5;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < 32; ++i) {
      Vector x(n);
      for (Eigen::Index j = 0; j < n; ++j) x(j) = gauss(rng);
      x *= radius / x.norm();
      if (!(linalg::spectral_norm(spec.problem.jacobian(x)) < 1.0)) {
        throw InvalidParameterError(
            "quadratic perturbation too strong: contraction check failed");
      }
    }
  }
  check_fixed_point(spec);
  return spec;
}

namespace {

ProblemSpec make_cos_problem() {
  ProblemSpec spec;
  spec.name = "cos";
  spec.problem.dim = 1;
  spec.problem.f = [](const Vector& x) -> Vector {
    Vector y(1);
    y(0) = std::cos(x(0));
    return y;
  };
  spec.problem.jacobian = [](const Vector& x) -> Matrix {
    Matrix j(1, 1);
    j(0, 0) = -std::sin(x(0));
    return j;
  };

  double x = 1.0;
  for (int i = 0; i < 200; ++i) x = std::cos(x);
  // Bisection polish on cos(x) - x, which is decreasing through the root.
  double lo = x - 1e-4, hi = x + 1e-4;
  for (int i = 0; i < 80 && (hi - lo) > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((std::cos(mid) - mid) > 0.0 ? lo : hi) = mid;
  }
  Vector s(1);
  s(0) = 0.5 * (lo + hi);
  spec.problem.solution = s;
  spec.jacobian_at_solution = spec.problem.jacobian(s);
  spec.solution_method = "iterate200+bisection";
  return spec;
}

ProblemSpec make_coupled2d_problem() {
  ProblemSpec spec;
  spec.name = "coupled2d";
  spec.problem.dim = 2;
  spec.problem.f = [](const Vector& x) -> Vector {
    Vector y(2);
    y(0) = (x(1) * x(1) + 1.0) / 4.0;
    y(1) = (x(0) * x(0) + 1.0) / 4.0;
    return y;
  };
  spec.problem.jacobian = [](const Vector& x) -> Matrix {
    Matrix j = Matrix::Zero(2, 2);
    j(0, 1) = x(1) / 2.0;
    j(1, 0) = x(0) / 2.0;
    return j;
  };

  Vector s = Vector::Zero(2);
  for (int i = 0; i < 500; ++i) s = spec.problem.f(s);
  spec.problem.solution = s;
  spec.jacobian_at_solution = spec.problem.jacobian(s);
  spec.solution_method = "iterate500";
  return spec;
}

// Picard sweep for the discretized two-point boundary problem
//   -u'' = strength * exp(u) + 20 x (1 - x),  u(0) = u(1) = 0
// on N interior points:  u_i <- (u_{i-1} + u_{i+1} + h^2 rhs_i) / 2.
ProblemSpec make_bvp1d_problem(double strength) {
  constexpr int kPoints = 32;
  const double h = 1.0 / (kPoints + 1);
  Vector source(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double xi = (i + 1) * h;
    source(i) = 20.0 * xi * (1.0 - xi);
  }

  ProblemSpec spec;
  spec.name = strength == 0.0 ? "bvp1d-linear" : "bvp1d";
  spec.problem.dim = kPoints;
  spec.problem.f = [source, h, strength](const Vector& u) -> Vector {
    const Eigen::Index n = u.size();
    Vector next(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double left = i > 0 ? u(i - 1) : 0.0;
      const double right = i + 1 < n ? u(i + 1) : 0.0;
      next(i) =
          0.5 * (left + right + h * h * (strength * std::exp(u(i)) + source(i)));
    }
    return next;
  };
  spec.problem.jacobian = [h, strength](const Vector& u) -> Matrix {
    const Eigen::Index n = u.size();
    Matrix j = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i > 0) j(i, i - 1) = 0.5;
      if (i + 1 < n) j(i, i + 1) = 0.5;
      j(i, i) = 0.5 * h * h * strength * std::exp(u(i));
    }
    return j;
  };

  Vector u = Vector::Zero(kPoints);
  if (strength == 0.0) {
    // Linear case: direct tridiagonal solve of (2 I - shifts) u = h^2 source.
    Matrix a = Matrix::Zero(kPoints, kPoints);
    for (int i = 0; i < kPoints; ++i) {
      a(i, i) = 2.0;
      if (i > 0) a(i, i - 1) = -1.0;
      if (i + 1 < kPoints) a(i, i + 1) = -1.0;
    }
    u = a.partialPivLu().solve((h * h * source).eval());
    spec.solution_method = "direct-solve";
  } else {
    for (int i = 0; i < 500; ++i) u = spec.problem.f(u);
    // Newton polish on g(u) = u - f(u).
    const Matrix identity = Matrix::Identity(kPoints, kPoints);
    for (int step = 0; step < 30; ++step) {
      const Vector g = u - spec.problem.f(u);
      if (g.norm() <= 1e-14 * (1.0 + u.norm())) break;
      const Matrix jg = identity - spec.problem.jacobian(u);
      u -= jg.partialPivLu().solve(g);
    }
    spec.solution_method = "picard500+newton";
  }
  spec.problem.solution = u;
  spec.jacobian_at_solution = spec.problem.jacobian(u);
  return spec;
}

ProblemSpec make_identity_problem() {
  ProblemSpec spec;
  spec.name = "identity";
  spec.problem.dim = 2;
  spec.problem.f = [](const Vector& x) -> Vector { return x; };
  spec.problem.jacobian = [](const Vector& x) -> Matrix {
    return Matrix::Identity(x.size(), x.size());
  };
  spec.problem.solution = Vector::Zero(2);
  spec.jacobian_at_solution = Matrix::Identity(2, 2);
  spec.solution_method = "fixed-by-construction";
  return spec;
}

}  // namespace

ProblemSpec make_classic_nonlinear(const std::string& name) {
  ProblemSpec spec;
  if (name == "cos") {
    spec = make_cos_problem();
  } else if (name == "coupled2d") {
    spec = make_coupled2d_problem();
  } else if (name == "bvp1d") {
    spec = make_bvp1d_problem(1.0);
  } else if (name == "bvp1d-linear") {
    spec = make_bvp1d_problem(0.0);
  } else if (name == "identity") {
    spec = make_identity_problem();
  } else {
    throw InvalidParameterError("unknown classic problem '" + name + "'");
  }
  check_fixed_point(spec);
  return spec;
}

std::vector<std::string> classic_names() {
  return {"cos", "coupled2d", "bvp1d", "bvp1d-linear", "identity"};
}

Vector seeded_start(const ProblemSpec& spec, double radius, unsigned seed) {
  if (!spec.problem.solution) {
    throw InvalidParameterError("seeded_start needs a problem with a solution");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector dir(spec.problem.dim);
  do {
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = gauss(rng);
  } while (dir.norm() == 0.0);
  return *spec.problem.solution + (radius / dir.norm()) * dir;
}

}  // namespace rrex::problems
