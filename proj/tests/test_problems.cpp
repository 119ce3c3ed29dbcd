#include <doctest.h>

#include "oracles.hpp"
#include "rrex/problems.hpp"

using namespace rrex;
using linalg::Matrix;
using linalg::Vector;

namespace {

Vector ones(int n) { return Vector::Ones(n); }

int detected_degree(const problems::ProblemSpec& spec, const Vector& x0) {
  modes::IterateSequence seq(spec.problem, x0);
  return modes::detect_numerical_degree(seq, 0, 1e-10,
                                        static_cast<int>(spec.problem.dim));
}

}  // namespace

TEST_CASE("make_linear: degree metadata counts distinct eigenvalues") {
  CHECK(*problems::make_linear({0.5, 0.5, 0.5}, ones(3)).expected_degree == 1);
  CHECK(*problems::make_linear({0.5, 0.3, 0.3}, ones(3)).expected_degree == 2);
  CHECK_THROWS_AS(problems::make_linear({0.5, 1.0}, ones(2)),
                  InvalidParameterError);
  CHECK_THROWS_AS(problems::make_linear({-1.2}, ones(1)),
                  InvalidParameterError);
  CHECK_THROWS_AS(problems::make_linear({0.5, 0.3}, ones(3)), DimensionError);
}

TEST_CASE("make_linear: similarity transform preserves degree and solution") {
  const problems::ProblemSpec diag =
      problems::make_linear({0.5, 0.3, 0.3}, ones(3), 7, false);
  const problems::ProblemSpec conj =
      problems::make_linear({0.5, 0.3, 0.3}, ones(3), 7, true);

  // Same minimal polynomial under similarity: detection agrees.
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const Vector x0d = problems::seeded_start(diag, 0.5, seed);
    const Vector x0c = problems::seeded_start(conj, 0.5, seed);
    CHECK(detected_degree(diag, x0d) == 2);
    CHECK(detected_degree(conj, x0c) == 2);
  }

  // The conjugated matrix is genuinely non-diagonal but keeps the spectrum.
  CHECK(conj.jacobian_at_solution->cwiseAbs().maxCoeff() > 0.0);
  CHECK(linalg::spectral_radius(*conj.jacobian_at_solution) ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("make_quadratic_perturbed: zero strength reduces to linear") {
  const problems::ProblemSpec p =
      problems::make_quadratic_perturbed({0.5, 0.3}, 0.0);
  CHECK(*p.expected_degree == 2);
  CHECK(p.problem.solution->norm() == 0.0);

  Vector x(2);
  x << 0.2, -0.1;
  const Vector fx = p.problem.f(x);
  CHECK(fx(0) == doctest::Approx(0.1));
  CHECK(fx(1) == doctest::Approx(-0.03));
}

TEST_CASE("make_quadratic_perturbed: scalar case and contraction gate") {
  const problems::ProblemSpec p =
      problems::make_quadratic_perturbed({0.5}, 0.1);
  CHECK(p.problem.solution->norm() == 0.0);
  CHECK((*p.jacobian_at_solution)(0, 0) == doctest::Approx(0.5));

  // Orbit contraction ratio approaches the linear slope at the solution.
  Vector x = Vector::Constant(1, 0.1);
  double prev = x(0);
  double ratio = 0.0;
  for (int m = 0; m < 25; ++m) {
    x = p.problem.f(x);
    ratio = x(0) / prev;
    prev = x(0);
  }
  CHECK(ratio == doctest::Approx(0.5).epsilon(1e-4));

  CHECK_THROWS_AS(problems::make_quadratic_perturbed({0.5}, 10.0),
                  InvalidParameterError);
}

TEST_CASE("classic catalog: cosine fixed point matches a fresh bisection") {
  const problems::ProblemSpec p = problems::make_classic_nonlinear("cos");
  const double s = (*p.problem.solution)(0);

  // Independent oracle: bisection on cos(x) - x over [0, 1].
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((std::cos(mid) - mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(s - 0.5 * (lo + hi)) <= 1e-12);
  CHECK(std::abs(s - 0.739085) <= 1e-5);
  CHECK(p.solution_method == "iterate200+bisection");
}

TEST_CASE("classic catalog: coupled 2-D map matches its closed form") {
  const problems::ProblemSpec p = problems::make_classic_nonlinear("coupled2d");
  const Vector& s = *p.problem.solution;
  const double root = 2.0 - std::sqrt(3.0);  // x = (x^2 + 1)/4
  CHECK(std::abs(s(0) - root) <= 1e-12);
  CHECK(std::abs(s(1) - root) <= 1e-12);
  CHECK((p.problem.f(s) - s).norm() <= 1e-13);
}

TEST_CASE("classic catalog: discretized boundary problem") {
  const problems::ProblemSpec lin =
      problems::make_classic_nonlinear("bvp1d-linear");
  CHECK(lin.problem.dim == 32);

  // Hand-rolled tridiagonal solve as the oracle for the linear variant.
  const int n = 32;
  const double h = 1.0 / (n + 1);
  Matrix a = Matrix::Zero(n, n);
  Vector rhs(n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i > 0) a(i, i - 1) = -1.0;
    if (i + 1 < n) a(i, i + 1) = -1.0;
    const double xi = (i + 1) * h;
    rhs(i) = h * h * 20.0 * xi * (1.0 - xi);
  }
  const Vector expected = oracles::solve_gauss(a, rhs);
  CHECK((*lin.problem.solution - expected).norm() <= 1e-10);

  const problems::ProblemSpec nl = problems::make_classic_nonlinear("bvp1d");
  CHECK((nl.problem.f(*nl.problem.solution) - *nl.problem.solution).norm() <=
        1e-12);
  CHECK(linalg::spectral_radius(*nl.jacobian_at_solution) < 1.0);
  // The Picard sweep is a slow contraction: spectral radius just below one.
  CHECK(linalg::spectral_radius(*nl.jacobian_at_solution) > 0.9);

  CHECK_THROWS_AS(problems::make_classic_nonlinear("no-such-problem"),
                  InvalidParameterError);
}

TEST_CASE("every catalog problem satisfies the fixed-point residual gate") {
  for (const std::string& name : problems::classic_names()) {
    const problems::ProblemSpec p = problems::make_classic_nonlinear(name);
    const Vector& s = *p.problem.solution;
    CHECK((p.problem.f(s) - s).norm() <= 1e-10 * (1.0 + s.norm()));
    CHECK(p.jacobian_at_solution.has_value());
    if (name != "identity") {
      CHECK(linalg::spectral_radius(*p.jacobian_at_solution) < 1.0);
    }
  }
}

TEST_CASE("identity specimen reports a unit Jacobian norm") {
  const problems::ProblemSpec p = problems::make_classic_nonlinear("identity");
  CHECK(linalg::spectral_norm(*p.jacobian_at_solution) == doctest::Approx(1.0));
}

TEST_CASE("seeded starts are reproducible and honor the radius") {
  const problems::ProblemSpec p = problems::make_classic_nonlinear("coupled2d");
  const Vector a = problems::seeded_start(p, 0.25, 11);
  const Vector b = problems::seeded_start(p, 0.25, 11);
  const Vector c = problems::seeded_start(p, 0.25, 12);
  CHECK((a - b).norm() == 0.0);
  CHECK((a - c).norm() > 0.0);
  CHECK((a - *p.problem.solution).norm() == doctest::Approx(0.25).epsilon(1e-12));
}
