#include <doctest.h>

#include "oracles.hpp"
#include "rrex/rre.hpp"

using namespace rrex;
using linalg::Matrix;
using linalg::Vector;

namespace {

rre::IterateWindow window_of(std::initializer_list<Vector> xs, long n = 0) {
  rre::IterateWindow w;
  w.base_index = n;
  w.iterates.assign(xs);
  return w;
}

Vector scalar(double v) {
  Vector x(1);
  x(0) = v;
  return x;
}

/// Window of a linear iteration x_{m+1} = t x_m + d.
rre::IterateWindow linear_window(const Matrix& t, const Vector& d,
                                 const Vector& x0, int k, long n = 0) {
  rre::IterateWindow w;
  w.base_index = n;
  Vector x = x0;
  for (long m = 0; m < n; ++m) x = t * x + d;
  for (int i = 0; i < k + 2; ++i) {
    w.iterates.push_back(x);
    x = t * x + d;
  }
  return w;
}

rre::IterateWindow random_window(std::mt19937_64& rng, Eigen::Index dim,
                                 int k) {
  rre::IterateWindow w;
  w.base_index = 0;
  for (int i = 0; i < k + 2; ++i) {
    w.iterates.push_back(oracles::random_vector(rng, dim));
  }
  return w;
}

}  // namespace

TEST_CASE("build_differences: constant, ramp, and scalar windows") {
  const Vector c = Vector::Constant(3, 2.5);
  const rre::DifferenceMatrices dc =
      rre::build_differences(window_of({c, c, c}));
  CHECK(dc.u.norm() == 0.0);
  CHECK(dc.w.norm() == 0.0);

  Vector e1 = Vector::Zero(2);
  e1(0) = 1.0;
  const rre::DifferenceMatrices dr =
      rre::build_differences(window_of({0.0 * e1, 1.0 * e1, 2.0 * e1}));
  CHECK((dr.u.col(0) - e1).norm() == 0.0);
  CHECK((dr.u.col(1) - e1).norm() == 0.0);
  CHECK(dr.w.norm() == 0.0);

  const rre::DifferenceMatrices ds =
      rre::build_differences(window_of({scalar(1), scalar(2), scalar(4)}));
  CHECK(ds.u(0, 0) == 1.0);
  CHECK(ds.u(0, 1) == 2.0);
  CHECK(ds.w(0, 0) == 1.0);
}

TEST_CASE("build_differences: rejects mismatched dimensions") {
  rre::IterateWindow w;
  w.iterates = {Vector::Zero(2), Vector::Zero(3), Vector::Zero(2)};
  CHECK_THROWS_AS(rre::build_differences(w), DimensionError);
}

TEST_CASE("extrapolate: exact on a linear iteration at the minimal degree") {
  Matrix t = Matrix::Zero(2, 2);
  t.diagonal() << 0.5, -0.25;
  Vector d(2);
  d << 1.0, 2.0;
  const Vector s = (Matrix::Identity(2, 2) - t).partialPivLu().solve(d);

  Vector x0(2);
  x0 << 4.0, -3.0;
  const rre::IterateWindow w = linear_window(t, d, x0, /*k=*/2);
  const rre::ExtrapolationResult r = rre::extrapolate(w);
  CHECK((r.s - s).norm() <= 1e-10 * s.norm());
  CHECK(r.gamma.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.residual_norm <= 1e-12);
}

TEST_CASE("extrapolate: converged window returns x_n with unit weight") {
  const Vector s = Vector::Constant(3, 0.75);
  const rre::ExtrapolationResult r = rre::extrapolate(window_of({s, s, s}));
  CHECK(r.converged_window);
  CHECK((r.s - s).norm() == 0.0);
  CHECK(r.gamma(0) == 1.0);
  CHECK(r.residual_norm == 0.0);
}

TEST_CASE("extrapolate: scalar geometric window eliminates the mode exactly") {
  // x_m = 3 + 0.5^m starting at m = 0: (4, 3.5, 3.25).
  const rre::ExtrapolationResult r =
      rre::extrapolate(window_of({scalar(4.0), scalar(3.5), scalar(3.25)}));
  CHECK(r.xi(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.s(0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("extrapolate: vanishing W with nonzero u is degenerate") {
  CHECK_THROWS_AS(
      rre::extrapolate(window_of({scalar(0.0), scalar(1.0), scalar(2.0)})),
      DegenerateWindowError);
}

TEST_CASE("extrapolate: k above the minimal degree still resolves, flagged") {
  // Scalar geometric sequence, k = 2: W is 1x2 with rank 1.
  rre::IterateWindow w = window_of(
      {scalar(4.0), scalar(3.5), scalar(3.25), scalar(3.125)});
  const rre::ExtrapolationResult r = rre::extrapolate(w);
  CHECK(r.k == 2);
  CHECK(r.w_rank == 1);
  CHECK(r.s(0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("gamma_direct: degenerate and closed-form cases") {
  Vector u(3);
  u << 1.0, 2.0, -1.0;
  Matrix two_same(3, 2);
  two_same << u, u;
  const Vector g = rre::gamma_direct(two_same);
  CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((two_same * g).norm() == doctest::Approx(u.norm()).epsilon(1e-12));

  Matrix ortho = Matrix::Zero(2, 2);
  ortho(0, 0) = 1.0;
  ortho(1, 1) = 2.0;
  const Vector g2 = rre::gamma_direct(ortho);
  CHECK(g2(0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(g2(1) == doctest::Approx(0.2).epsilon(1e-12));

  Matrix single(4, 1);
  single << 1.0, 2.0, 3.0, 4.0;
  CHECK(rre::gamma_direct(single)(0) == 1.0);

  const Vector gz = rre::gamma_direct(Matrix::Zero(3, 4));
  CHECK(gz(0) == 1.0);
  CHECK(gz.tail(3).norm() == 0.0);
}

TEST_CASE("gamma_direct: a kernel direction reaches zero residual") {
  Vector u(2);
  u << 1.0, 1.0;
  Matrix cols(2, 2);
  cols << u, Vector::Zero(2);
  const Vector g = rre::gamma_direct(cols);
  CHECK(g.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((cols * g).norm() <= 1e-12);
}

TEST_CASE("formulation equivalence and optimality on random windows") {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  int tested = 0;
  while (tested < 100) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 9);
    const int k = 1 + static_cast<int>(rng() % std::min<Eigen::Index>(dim, 5));
    const rre::IterateWindow w = random_window(rng, dim, k);
    const rre::DifferenceMatrices d = rre::build_differences(w);
    if (linalg::smallest_nonzero_singular(d.w) < 1e-3) continue;
    ++tested;

    const rre::ExtrapolationResult r = rre::extrapolate(w);
    CHECK(std::abs(r.gamma.sum() - 1.0) <= 1e-12);

    // gamma and xi stay linked by the partial-sum relation.
    CHECK((rre::xi_from_gamma(r.gamma) - r.xi).cwiseAbs().maxCoeff() <= 1e-12);

    // The two representations of the extrapolant agree.
    Vector combo = Vector::Zero(dim);
    for (int i = 0; i <= k; ++i) combo += r.gamma(i) * w.iterates[i];
    CHECK((r.s - combo).norm() <=
          1e-10 * std::max(1.0, w.iterates.front().norm()));

    // ||U gamma|| equals the xi-path residual.
    const double res_gamma_of_xi = (d.u * r.gamma).norm();
    CHECK(std::abs(res_gamma_of_xi - r.residual_norm) <=
          1e-9 * std::max(1.0, r.residual_norm));

    // The direct constrained solve attains the same minimum.
    const Vector gd = rre::gamma_direct(d.u);
    const double res_direct = (d.u * gd).norm();
    CHECK(std::abs(res_direct - r.residual_norm) <=
          1e-9 * std::max(1.0, r.residual_norm));

    // Optimality against random affine combinations.
    for (int probe = 0; probe < 100; ++probe) {
      Vector c(k + 1);
      double sum = 0.0;
      do {
        for (int i = 0; i <= k; ++i) c(i) = unif(rng);
        sum = c.sum();
      } while (std::abs(sum) < 0.1);
      c /= sum;
      CHECK(r.residual_norm <= (d.u * c).norm() + 1e-9);
    }
  }
}

TEST_CASE("translation covariance of the extrapolant") {
  std::mt19937_64 rng(202);
  int tested = 0;
  while (tested < 20) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % 3);
    const rre::IterateWindow w = random_window(rng, dim, k);
    if (linalg::smallest_nonzero_singular(rre::build_differences(w).w) < 1e-2) {
      continue;
    }
    ++tested;
    const Vector shift = 10.0 * oracles::random_vector(rng, dim);

    rre::IterateWindow shifted = w;
    for (Vector& x : shifted.iterates) x += shift;

    const rre::ExtrapolationResult r0 = rre::extrapolate(w);
    const rre::ExtrapolationResult r1 = rre::extrapolate(shifted);
    const double scale = r0.s.norm() + shift.norm() + 1.0;
    CHECK((r1.s - (r0.s + shift)).norm() <= 1e-12 * scale);
    CHECK(std::abs(r1.gamma.sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("linear exactness at the minimal-polynomial degree, any n") {
  std::mt19937_64 rng(203);
  for (int trial = 0; trial < 10; ++trial) {
    // Diagonal T with 3 distinct eigenvalues inside the unit disk.
    Matrix t = Matrix::Zero(4, 4);
    t.diagonal() << 0.7, -0.4, 0.2, 0.2;
    const Vector d = oracles::random_vector(rng, 4);
    const Vector s = (Matrix::Identity(4, 4) - t).partialPivLu().solve(d);
    const Vector x0 = s + oracles::random_vector(rng, 4);
    const long n = static_cast<long>(rng() % 4);
    const rre::IterateWindow w = linear_window(t, d, x0, /*k=*/3, n);
    const rre::ExtrapolationResult r = rre::extrapolate(w);
    CHECK((r.s - s).norm() <= 1e-8 * std::max(1.0, s.norm()));
  }
}
