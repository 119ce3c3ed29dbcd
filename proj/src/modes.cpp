#include "rrex/modes.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace rrex::modes {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

void validate_problem_and_start(const FixedPointProblem& p, const Vector& x0) {
  if (p.dim < 1) throw InvalidParameterError("problem dimension must be >= 1");
  if (!p.f) throw InvalidParameterError("problem has no map f");
  if (x0.size() != p.dim) {
    throw DimensionError("start vector length does not match problem dimension");
  }
  if (!x0.allFinite()) throw NumericalError("start vector is non-finite");
}

std::optional<double> error_vs_solution(const FixedPointProblem& p,
                                        const Vector& y) {
  if (!p.solution) return std::nullopt;
  return (y - *p.solution).norm();
}
}  // namespace

void ModeConfig::validate() const {
  if (n < 0) throw InvalidParameterError("n must be >= 0");
  if (mode != Mode::MC && k < 1) throw InvalidParameterError("k must be >= 1");
  if (max_cycles < 1) throw InvalidParameterError("max_cycles must be >= 1");
  if (!(tol > 0.0)) throw InvalidParameterError("tol must be > 0");
  if (!(degree_tol > 0.0)) {
    throw InvalidParameterError("degree_tol must be > 0");
  }
  if (!(escape_factor > 0.0)) {
    throw InvalidParameterError("escape_factor must be > 0");
  }
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxCycles: return "max-cycles";
    case Termination::DegenerateWindow: return "degenerate-window";
    case Termination::Diverged: return "diverged";
    case Termination::DegreeDetectionFailed: return "degree-detection-failed";
  }
  return "unknown";
}

IterateSequence::IterateSequence(const FixedPointProblem& p, Vector x0,
                                 double escape_factor)
    : problem_(&p) {
  validate_problem_and_start(p, x0);
  escape_radius_ = escape_factor * (1.0 + x0.norm());
  iterates_.push_back(std::move(x0));
}

const Vector& IterateSequence::at(long m) {
  if (m < 0) throw InvalidParameterError("iterate index must be >= 0");
  while (static_cast<long>(iterates_.size()) <= m) {
    Vector next = problem_->f(iterates_.back());
    const long idx = static_cast<long>(iterates_.size());
    if (next.size() != problem_->dim) {
      throw DimensionError("map returned a vector of wrong dimension");
    }
    if (!next.allFinite()) {
      throw DivergenceError("iterate " + std::to_string(idx) + " is non-finite",
                            idx);
    }
    if ((next - iterates_.front()).norm() > escape_radius_) {
      throw DivergenceError(
          "iterate " + std::to_string(idx) + " left the trust radius", idx);
    }
    iterates_.push_back(std::move(next));
  }
  return iterates_[static_cast<size_t>(m)];
}

std::vector<Vector> iterate(const FixedPointProblem& p, const Vector& x0,
                            long count, double escape_factor) {
  if (count < 0) throw InvalidParameterError("count must be >= 0");
  IterateSequence seq(p, x0, escape_factor);
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(count) + 1);
  for (long m = 0; m <= count; ++m) out.push_back(seq.at(m));
  return out;
}

rre::IterateWindow window_at(IterateSequence& seq, long n, int k) {
  rre::IterateWindow w;
  w.base_index = n;
  w.iterates.reserve(static_cast<size_t>(k) + 2);
  for (long m = n; m <= n + k + 1; ++m) w.iterates.push_back(seq.at(m));
  return w;
}

int detect_numerical_degree(IterateSequence& seq, long n, double degree_tol,
                            int k_max, double rank_tol) {
  if (n < 0) throw InvalidParameterError("n must be >= 0");
  if (!(degree_tol > 0.0)) {
    throw InvalidParameterError("degree_tol must be > 0");
  }
  if (k_max < 1) throw InvalidParameterError("k_max must be >= 1");

  seq.at(n + 1);  // materialize before taking references
  const Vector u_n = seq.at(n + 1) - seq.at(n);
  const double scale = std::max(seq.at(n).cwiseAbs().maxCoeff(),
                                seq.at(n + 1).cwiseAbs().maxCoeff());
  if (u_n.cwiseAbs().maxCoeff() <= 32.0 * kEps * scale) {
    return 1;  // orbit is already stationary at n
  }
  const double u_norm = u_n.norm();

  for (int k = 1; k <= k_max; ++k) {
    const rre::IterateWindow win = window_at(seq, n, k);
    const rre::DifferenceMatrices d = rre::build_differences(win);
    if (d.w.cwiseAbs().maxCoeff() == 0.0) continue;
    const Vector y = linalg::min_norm_lsq(d.w, u_n, rank_tol);
    const double rel = (u_n - d.w * y).norm() / u_norm;
    if (rel < degree_tol) return k;
  }
  throw DegreeDetectionError(
      "no window size up to " + std::to_string(k_max) +
      " reaches the degree tolerance " + std::to_string(degree_tol));
}

NModeRun run_n_mode(const FixedPointProblem& p, const Vector& x0, int k,
                    long n_max, double rank_tol, double escape_factor) {
  validate_problem_and_start(p, x0);
  if (k < 1) throw InvalidParameterError("k must be >= 1");
  if (n_max < 0) throw InvalidParameterError("n_max must be >= 0");

  IterateSequence seq(p, x0, escape_factor);
  NModeRun run;
  for (long n = 0; n <= n_max; ++n) {
    const rre::IterateWindow win = window_at(seq, n, k);
    rre::ExtrapolationResult res = rre::extrapolate(win, rank_tol);
    NModeEntry entry;
    entry.n = n;
    entry.error = error_vs_solution(p, res.s);
    entry.iterate_error = error_vs_solution(p, win.iterates.front());
    entry.f_evals = n + k + 1;
    const bool stop = res.converged_window;
    entry.result = std::move(res);
    run.entries.push_back(std::move(entry));
    if (stop) {
      run.converged_early = true;
      break;
    }
  }
  run.f_evals = seq.computed();
  return run;
}

namespace {

CycleTrace run_cycling(const FixedPointProblem& p, const Vector& x0,
                       const ModeConfig& cfg, bool adaptive_k) {
  cfg.validate();
  validate_problem_and_start(p, x0);

  CycleTrace trace;
  Vector s_cur = x0;
  auto seq = std::make_unique<IterateSequence>(p, s_cur, cfg.escape_factor);
  long evals_before_seq = 0;

  {
    CycleRecord rec;
    rec.cycle = 0;
    rec.s = s_cur;
    rec.error = error_vs_solution(p, s_cur);
    try {
      rec.residual = (seq->at(1) - s_cur).norm();
    } catch (const DivergenceError& e) {
      trace.records.push_back(std::move(rec));
      trace.reason = Termination::Diverged;
      trace.message = e.what();
      return trace;
    }
    rec.f_evals = seq->computed();
    const double res0 = *rec.residual;
    trace.records.push_back(std::move(rec));
    if (res0 <= cfg.tol) {
      trace.reason = Termination::Converged;
      return trace;
    }
  }

  for (int r = 1; r <= cfg.max_cycles; ++r) {
    int k = cfg.k;
    rre::IterateWindow win;
    rre::ExtrapolationResult res;
    try {
      if (adaptive_k) {
        k = detect_numerical_degree(*seq, cfg.n, cfg.degree_tol,
                                    static_cast<int>(p.dim), cfg.rank_tol);
      }
      win = window_at(*seq, cfg.n, k);
      res = rre::extrapolate(win, cfg.rank_tol);
    } catch (const DivergenceError& e) {
      trace.reason = Termination::Diverged;
      trace.message = "cycle " + std::to_string(r) + ": " + e.what();
      return trace;
    } catch (const DegreeDetectionError& e) {
      trace.reason = Termination::DegreeDetectionFailed;
      trace.message = "cycle " + std::to_string(r) + ": " + e.what();
      return trace;
    } catch (const DegenerateWindowError& e) {
      trace.reason = Termination::DegenerateWindow;
      trace.message = "cycle " + std::to_string(r) + ": " + e.what();
      return trace;
    }
    if (!res.s.allFinite()) {
      trace.reason = Termination::Diverged;
      trace.message =
          "cycle " + std::to_string(r) + ": extrapolant is non-finite";
      return trace;
    }

    evals_before_seq += seq->computed();
    s_cur = res.s;
    seq = std::make_unique<IterateSequence>(p, s_cur, cfg.escape_factor);

    CycleRecord rec;
    rec.cycle = r;
    rec.s = s_cur;
    rec.error = error_vs_solution(p, s_cur);
    rec.k_used = k;
    rec.extrapolation = std::move(res);
    if (cfg.keep_windows) rec.window = std::move(win);
    std::optional<double> residual;
    try {
      residual = (seq->at(1) - s_cur).norm();
    } catch (const DivergenceError& e) {
      rec.f_evals = evals_before_seq;
      trace.records.push_back(std::move(rec));
      trace.reason = Termination::Diverged;
      trace.message = "cycle " + std::to_string(r) + ": " + e.what();
      return trace;
    }
    rec.residual = residual;
    rec.f_evals = evals_before_seq + seq->computed();
    trace.records.push_back(std::move(rec));
    if (*residual <= cfg.tol) {
      trace.reason = Termination::Converged;
      return trace;
    }
  }
  trace.reason = Termination::MaxCycles;
  return trace;
}

}  // namespace

CycleTrace run_c_mode(const FixedPointProblem& p, const Vector& x0,
                      const ModeConfig& cfg) {
  if (cfg.mode != Mode::C) {
    throw InvalidParameterError("run_c_mode requires mode = C");
  }
  return run_cycling(p, x0, cfg, /*adaptive_k=*/false);
}

CycleTrace run_mc_mode(const FixedPointProblem& p, const Vector& x0,
                       const ModeConfig& cfg) {
  if (cfg.mode != Mode::MC) {
    throw InvalidParameterError("run_mc_mode requires mode = MC");
  }
  return run_cycling(p, x0, cfg, /*adaptive_k=*/true);
}

}  // namespace rrex::modes
