#ifndef RREX_PROBLEMS_HPP
#define RREX_PROBLEMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "rrex/modes.hpp"

namespace rrex::problems {

using linalg::Matrix;
using linalg::Vector;

/// A constructed benchmark problem with its solution and structure metadata.
/// Solutions are always computed by the recorded oracle recipe at
/// construction time, never hand-typed.
struct ProblemSpec {
  std::string name;
  modes::FixedPointProblem problem;
  std::optional<Matrix> jacobian_at_solution;
  std::optional<int> expected_degree;  ///< linear problems, generic start
  std::string solution_method;         ///< oracle recipe that produced s
};

/// Linear map f(x) = T x + d with T built from the given eigenvalues
/// (diagonal, or conjugated by a seeded well-conditioned similarity).
/// All |lambda| must be < 1. The stored solution solves (I - T) s = d.
ProblemSpec make_linear(const std::vector<double>& spectrum, const Vector& d,
                        unsigned seed = 0, bool similarity = false);

/// Quadratic perturbation f(x) = T x + q * (x .* x) with solution s = 0 and
/// Jacobian at the solution exactly T. Fails when no contraction ball can be
/// verified on a seeded sample sphere.
ProblemSpec make_quadratic_perturbed(const std::vector<double>& spectrum,
                                     double q_strength, unsigned seed = 0,
                                     bool similarity = false);

/// Catalog of desk-scale nonlinear fixed-point benchmarks:
///   cos          scalar x = cos(x)
///   coupled2d    x1 = (x2^2+1)/4, x2 = (x1^2+1)/4
///   bvp1d        Picard sweep of a discretized nonlinear two-point BVP, N=32
///   bvp1d-linear the same with the nonlinear source switched off
///   identity     f(x) = x, non-contraction diagnostic specimen
ProblemSpec make_classic_nonlinear(const std::string& name);

std::vector<std::string> classic_names();

/// Seeded start vector s + radius * (unit direction).
Vector seeded_start(const ProblemSpec& spec, double radius, unsigned seed);

}  // namespace rrex::problems

#endif
