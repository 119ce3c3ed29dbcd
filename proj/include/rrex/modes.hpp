#ifndef RREX_MODES_HPP
#define RREX_MODES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rrex/rre.hpp"

namespace rrex::modes {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

/// A fixed-point problem x = f(x). The stored solution, when present, is used
/// for error reporting only; no solver path reads it.
struct FixedPointProblem {
  Index dim = 0;
  std::function<Vector(const Vector&)> f;
  std::function<Matrix(const Vector&)> jacobian;  ///< may be empty
  std::optional<Vector> solution;
};

enum class Mode { N, C, MC };

struct ModeConfig {
  Mode mode = Mode::C;
  long n = 0;
  int k = 1;                   ///< ignored in MC mode
  int max_cycles = 50;         ///< cycle cap (C/MC) or n_max (N mode)
  double tol = 1e-12;          ///< stop when ||f(y) - y|| <= tol
  double rank_tol = -1.0;      ///< < 0 selects the linalg default
  double degree_tol = 1e-10;   ///< MC mode degree detection threshold
  double escape_factor = 1e6;  ///< divergence radius = factor * (1 + ||x0||)
  bool keep_windows = false;   ///< retain each cycle's window in the trace

  void validate() const;  // throws InvalidParameterError
};

enum class Termination {
  Converged,
  MaxCycles,
  DegenerateWindow,
  Diverged,
  DegreeDetectionFailed,
};

const char* to_string(Termination t);

struct CycleRecord {
  int cycle = 0;  ///< r; record 0 is the initial vector
  Vector s;       ///< s^{(r)}
  std::optional<double> residual;  ///< ||f(s) - s||, absent if f(s) blew up
  std::optional<double> error;     ///< ||s - s*|| when the solution is known
  int k_used = 0;                  ///< 0 for the initial record
  std::optional<rre::ExtrapolationResult> extrapolation;
  std::optional<rre::IterateWindow> window;  ///< kept when keep_windows
  long f_evals = 0;                          ///< cumulative f evaluations
};

struct CycleTrace {
  std::vector<CycleRecord> records;
  Termination reason = Termination::MaxCycles;
  std::string message;

  bool converged() const { return reason == Termination::Converged; }
  int cycles() const { return static_cast<int>(records.size()) - 1; }
};

/// Lazily extended orbit x_{m+1} = f(x_m) with divergence guards: any
/// non-finite iterate or ||x_m - x_0|| > escape_factor * (1 + ||x_0||)
/// throws DivergenceError carrying the offending index.
class IterateSequence {
public:
  IterateSequence(const FixedPointProblem& p, Vector x0,
                  double escape_factor = 1e6);

  /// Extends the orbit on demand. The returned reference is invalidated by
  /// any later at() call with a larger index; copy when holding across calls.
  const Vector& at(long m);
  long computed() const { return static_cast<long>(iterates_.size()) - 1; }

private:
  const FixedPointProblem* problem_;
  std::vector<Vector> iterates_;
  double escape_radius_;
};

/// Returns x_0 .. x_count.
std::vector<Vector> iterate(const FixedPointProblem& p, const Vector& x0,
                            long count, double escape_factor = 1e6);

struct NModeEntry {
  long n = 0;
  rre::ExtrapolationResult result;
  std::optional<double> error;          ///< ||s_{n,k} - s*||
  std::optional<double> iterate_error;  ///< ||x_n - s*||
  long f_evals = 0;                     ///< evaluations consumed up to this entry
};

struct NModeRun {
  std::vector<NModeEntry> entries;
  bool converged_early = false;  ///< the orbit itself reached the fixed point
  long f_evals = 0;
};

/// Extrapolates one long orbit at every n = 0..n_max with fixed k.
NModeRun run_n_mode(const FixedPointProblem& p, const Vector& x0, int k,
                    long n_max, double rank_tol = -1.0,
                    double escape_factor = 1e6);

/// Cycling with fixed n and k: each cycle generates n+k+1 fresh iterates from
/// the previous extrapolant, extrapolates the window at n, and restarts.
CycleTrace run_c_mode(const FixedPointProblem& p, const Vector& x0,
                      const ModeConfig& cfg);

/// Cycling with per-cycle window size k_r found by detect_numerical_degree.
CycleTrace run_mc_mode(const FixedPointProblem& p, const Vector& x0,
                       const ModeConfig& cfg);

/// Smallest k <= k_max whose window at n gives a relative least-squares
/// residual ||u_n + W xi|| / ||u_n|| below degree_tol; for an exactly linear
/// map this is the degree of the minimal polynomial of the iteration matrix
/// with respect to the error at n. Throws DegreeDetectionError when no k
/// qualifies.
int detect_numerical_degree(IterateSequence& seq, long n, double degree_tol,
                            int k_max, double rank_tol = -1.0);

/// Convenience: the window x_n .. x_{n+k+1} of an orbit.
rre::IterateWindow window_at(IterateSequence& seq, long n, int k);

}  // namespace rrex::modes

#endif
