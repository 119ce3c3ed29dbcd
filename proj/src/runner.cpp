#include "rrex/runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "rrex/report.hpp"

namespace rrex::cli {

using linalg::Matrix;
using linalg::Vector;

namespace {

using report::Json;

bool log_enabled() {
  const char* level = std::getenv("RREX_LOG");
  return level == nullptr || std::string(level) != "quiet";
}

void log_note(const std::string& msg) {
  if (log_enabled()) std::fputs((msg + "\n").c_str(), stderr);
}

Vector seeded_unit(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

void blind_spec(problems::ProblemSpec& spec) {
  spec.problem.solution.reset();
  spec.jacobian_at_solution.reset();
  spec.expected_degree.reset();
}

Json problem_json(const RunConfig& cfg, const problems::ProblemSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["dim"] = spec.problem.dim;
  j["solution_method"] = cfg.blind ? "hidden" : spec.solution_method;
  if (spec.expected_degree) j["expected_degree"] = *spec.expected_degree;
  if (!cfg.spectrum.empty() &&
      (cfg.problem_name == "linear" || cfg.problem_name == "quadratic")) {
    j["spectrum"] = cfg.spectrum;
    j["similarity"] = cfg.similarity;
    j["seed"] = cfg.problem_seed;
  }
  if (cfg.problem_name == "quadratic") j["q"] = cfg.q_strength;
  j["blind"] = cfg.blind;
  return j;
}

Json mode_json(const RunConfig& cfg) {
  Json j;
  j["mode"] = mode_name(cfg.mode.mode);
  j["n"] = cfg.mode.n;
  if (cfg.mode.mode != modes::Mode::MC) j["k"] = cfg.mode.k;
  j["max_cycles"] = cfg.mode.max_cycles;
  j["tol"] = report::json_number(cfg.mode.tol);
  j["rank_tol"] = report::json_number(cfg.mode.rank_tol);
  if (cfg.mode.mode == modes::Mode::MC) {
    j["degree_tol"] = report::json_number(cfg.mode.degree_tol);
  }
  j["start_seed"] = cfg.start_seed;
  j["start_radius"] = report::json_number(cfg.start_radius);
  return j;
}

std::string csv_long(long v) { return std::to_string(v); }

/// trace.csv rows for a cycling trace.
std::string cycle_csv(const modes::CycleTrace& trace) {
  std::string csv =
      "index,residual_norm,error_norm,k_used,gamma_abs_sum,extrapolation_residual\n";
  for (const modes::CycleRecord& rec : trace.records) {
    csv += csv_long(rec.cycle) + "," + report::csv_cell(rec.residual) + "," +
           report::csv_cell(rec.error) + "," + csv_long(rec.k_used) + ",";
    if (rec.extrapolation) {
      csv += report::csv_cell(rec.extrapolation->gamma_abs_sum) + "," +
             report::csv_cell(rec.extrapolation->residual_norm);
    } else {
      csv += ",";
    }
    csv += "\n";
  }
  return csv;
}

std::string n_mode_csv(const modes::NModeRun& run,
                       const std::vector<std::optional<double>>& residuals) {
  std::string csv =
      "index,residual_norm,error_norm,k_used,gamma_abs_sum,extrapolation_residual\n";
  for (size_t i = 0; i < run.entries.size(); ++i) {
    const modes::NModeEntry& e = run.entries[i];
    const std::optional<double> res =
        i < residuals.size() ? residuals[i] : std::nullopt;
    csv += csv_long(e.n) + "," + report::csv_cell(res) + "," +
           report::csv_cell(e.error) + "," + csv_long(e.result.k) + "," +
           report::csv_cell(e.result.gamma_abs_sum) + "," +
           report::csv_cell(e.result.residual_norm) + "\n";
  }
  return csv;
}

diagnostics::DiagnosticsReport build_diagnostics(
    const RunConfig& cfg, const problems::ProblemSpec& spec,
    const modes::CycleTrace* trace) {
  diagnostics::DiagnosticsReport rep;
  if (!spec.problem.solution || !spec.jacobian_at_solution) {
    throw UnsupportedDiagnosticError(
        "diagnostics need a problem with a known solution and Jacobian");
  }
  const Matrix& f_jac = *spec.jacobian_at_solution;
  const Vector& s = *spec.problem.solution;

  rep.l_estimate = linalg::spectral_norm(f_jac);
  rep.spectral_radius = linalg::spectral_radius(f_jac);
  rep.contraction = rep.l_estimate < 1.0;
  if (!rep.contraction) {
    rep.warnings.push_back(
        "map is not a contraction at the solution (||F(s)|| >= 1)");
  }
  for (int k : cfg.theta_ks) {
    rep.theta.push_back(diagnostics::theta_upper_bounds(f_jac, k));
  }

  if (trace != nullptr) {
    for (const modes::CycleRecord& rec : trace->records) {
      if (!rec.window || !rec.extrapolation) continue;
      const diagnostics::CycleDiagnostics cd =
          diagnostics::cycle_diagnostics(*rec.window, &f_jac, &s);
      rep.jbilou_sadok_trace.push_back(cd.jbilou_sadok);
      if (cd.sigma_k_krylov) {
        rep.krylov_sigma_trace.push_back(*cd.sigma_k_krylov);
        if (!rep.krylov_sigma_min ||
            *cd.sigma_k_krylov < *rep.krylov_sigma_min) {
          rep.krylov_sigma_min = cd.sigma_k_krylov;
        }
      }
      rep.gamma_abs_sums.push_back(rec.extrapolation->gamma_abs_sum);
      if (!rep.gamma_abs_max ||
          rec.extrapolation->gamma_abs_sum > *rep.gamma_abs_max) {
        rep.gamma_abs_max = rec.extrapolation->gamma_abs_sum;
      }
    }
  }

  if (cfg.perturbation) {
    const int k = std::max(1, cfg.mode.k);
    modes::IterateSequence seq(spec.problem,
                               start_vector(cfg, spec),
                               cfg.mode.escape_factor);
    const rre::IterateWindow win = modes::window_at(seq, cfg.mode.n, k);
    rep.perturbation =
        diagnostics::perturbation_quantities(win, f_jac, s, cfg.mode.rank_tol);
    if (!rep.perturbation->delta_below_one) {
      rep.warnings.push_back(
          "perturbation product delta >= 1: pinv-shift bound not applicable");
    }
  }
  return rep;
}

}  // namespace

problems::ProblemSpec build_problem(const RunConfig& cfg) {
  if (cfg.problem_name == "linear") {
    Vector d;
    if (cfg.offset.empty()) {
      d = seeded_unit(static_cast<Eigen::Index>(cfg.spectrum.size()),
                      cfg.problem_seed ^ 0x5bf03635u);
    } else {
      d = Eigen::Map<const Vector>(cfg.offset.data(),
                                   static_cast<Eigen::Index>(cfg.offset.size()));
    }
    return problems::make_linear(cfg.spectrum, d, cfg.problem_seed,
                                 cfg.similarity);
  }
  if (cfg.problem_name == "quadratic") {
    return problems::make_quadratic_perturbed(cfg.spectrum, cfg.q_strength,
                                              cfg.problem_seed, cfg.similarity);
  }
  return problems::make_classic_nonlinear(cfg.problem_name);
}

Vector start_vector(const RunConfig& cfg, const problems::ProblemSpec& spec) {
  if (!cfg.x0.empty()) {
    if (static_cast<Eigen::Index>(cfg.x0.size()) != spec.problem.dim) {
      throw ConfigError("x0 length does not match the problem dimension");
    }
    return Eigen::Map<const Vector>(cfg.x0.data(),
                                    static_cast<Eigen::Index>(cfg.x0.size()));
  }
  return problems::seeded_start(spec, cfg.start_radius, cfg.start_seed);
}

int cmd_run(const RunConfig& cfg) {
  cfg.validate();
  problems::ProblemSpec spec = build_problem(cfg);
  const Vector x0 = start_vector(cfg, spec);
  if (cfg.blind) blind_spec(spec);

  std::filesystem::create_directories(cfg.out_dir);
  Json root;
  root["problem"] = problem_json(cfg, spec);
  root["config"] = mode_json(cfg);

  int exit_code = kExitOk;
  std::string csv;

  if (cfg.mode.mode == modes::Mode::N) {
    modes::NModeRun run;
    std::vector<std::optional<double>> residuals;
    try {
      run = modes::run_n_mode(spec.problem, x0, cfg.mode.k, cfg.mode.max_cycles,
                              cfg.mode.rank_tol, cfg.mode.escape_factor);
    } catch (const DivergenceError& e) {
      root["result"] = Json{{"termination", "diverged"}, {"message", e.what()}};
      report::write_file(cfg.out_dir + "/trace.csv",
                         "index,residual_norm,error_norm,k_used,gamma_abs_sum,"
                         "extrapolation_residual\n");
      root["exit_code"] = kExitFailure;
      report::write_file(cfg.out_dir + "/report.json", root.dump(2) + "\n");
      return kExitFailure;
    }
    residuals.reserve(run.entries.size());
    for (const modes::NModeEntry& e : run.entries) {
      residuals.push_back((spec.problem.f(e.result.s) - e.result.s).norm());
    }
    const bool at_tol = !residuals.empty() && residuals.back() &&
                        *residuals.back() <= cfg.mode.tol;
    exit_code = (run.converged_early || at_tol) ? kExitOk : kExitMaxCycles;
    csv = n_mode_csv(run, residuals);
    root["result"] = report::n_mode_json(run, residuals);
  } else {
    modes::ModeConfig mode_cfg = cfg.mode;
    mode_cfg.keep_windows = cfg.diagnostics;
    const modes::CycleTrace trace =
        cfg.mode.mode == modes::Mode::C
            ? modes::run_c_mode(spec.problem, x0, mode_cfg)
            : modes::run_mc_mode(spec.problem, x0, mode_cfg);
    switch (trace.reason) {
      case modes::Termination::Converged: exit_code = kExitOk; break;
      case modes::Termination::MaxCycles: exit_code = kExitMaxCycles; break;
      default: exit_code = kExitFailure; break;
    }
    csv = cycle_csv(trace);
    root["result"] = report::cycle_trace_json(trace);
    if (cfg.diagnostics && !cfg.blind) {
      root["diagnostics"] =
          report::diagnostics_json(build_diagnostics(cfg, spec, &trace));
    }
  }

  root["exit_code"] = exit_code;
  report::write_file(cfg.out_dir + "/trace.csv", csv);
  report::write_file(cfg.out_dir + "/report.json", root.dump(2) + "\n");
  log_note("wrote " + cfg.out_dir + "/trace.csv and report.json");
  return exit_code;
}

int cmd_compare(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.legs.empty()) throw ConfigError("compare needs a nonempty leg list");
  for (const std::string& leg : cfg.legs) {
    if (leg != "plain" && leg != "n" && leg != "c" && leg != "mc") {
      throw ConfigError("unknown compare leg '" + leg + "'");
    }
  }
  problems::ProblemSpec spec = build_problem(cfg);
  const Vector x0 = start_vector(cfg, spec);
  if (cfg.blind) blind_spec(spec);

  std::filesystem::create_directories(cfg.out_dir);
  std::string csv = "leg,index,f_evals,residual_norm,error_norm\n";
  Json statuses;

  const auto error_of = [&spec](const Vector& y) -> std::optional<double> {
    if (!spec.problem.solution) return std::nullopt;
    return (y - *spec.problem.solution).norm();
  };
  const auto append_row = [&csv](const std::string& leg, long index,
                                 long f_evals, std::optional<double> res,
                                 std::optional<double> err) {
    csv += leg + "," + csv_long(index) + "," + csv_long(f_evals) + "," +
           report::csv_cell(res) + "," + report::csv_cell(err) + "\n";
  };

  const long budget =
      static_cast<long>(cfg.mode.max_cycles) * (cfg.mode.n + cfg.mode.k + 1);

  for (const std::string& leg : cfg.legs) {
    try {
      if (leg == "plain") {
        modes::IterateSequence seq(spec.problem, x0, cfg.mode.escape_factor);
        for (long m = 0; m <= budget; ++m) {
          const Vector xm = seq.at(m);  // copy: at() may reallocate
          const double res = (seq.at(m + 1) - xm).norm();
          append_row(leg, m, m, res, error_of(xm));
          if (res <= cfg.mode.tol) break;
        }
        statuses[leg] = "ok";
      } else if (leg == "n") {
        const modes::NModeRun run =
            modes::run_n_mode(spec.problem, x0, cfg.mode.k, cfg.mode.max_cycles,
                              cfg.mode.rank_tol, cfg.mode.escape_factor);
        for (const modes::NModeEntry& e : run.entries) {
          const double res = (spec.problem.f(e.result.s) - e.result.s).norm();
          append_row(leg, e.n, e.f_evals, res, e.error);
        }
        statuses[leg] = "ok";
      } else {
        modes::ModeConfig mode_cfg = cfg.mode;
        mode_cfg.mode = leg == "c" ? modes::Mode::C : modes::Mode::MC;
        const modes::CycleTrace trace =
            leg == "c" ? modes::run_c_mode(spec.problem, x0, mode_cfg)
                       : modes::run_mc_mode(spec.problem, x0, mode_cfg);
        for (const modes::CycleRecord& rec : trace.records) {
          append_row(leg, rec.cycle, rec.f_evals, rec.residual, rec.error);
        }
        statuses[leg] = modes::to_string(trace.reason);
      }
    } catch (const Error& e) {
      statuses[leg] = std::string("error: ") + e.what();
    }
  }

  Json root;
  root["problem"] = problem_json(cfg, spec);
  root["config"] = mode_json(cfg);
  root["legs"] = statuses;
  report::write_file(cfg.out_dir + "/compare.csv", csv);
  report::write_file(cfg.out_dir + "/compare.json", root.dump(2) + "\n");
  log_note("wrote " + cfg.out_dir + "/compare.csv and compare.json");
  return kExitOk;
}

int cmd_diagnose(const RunConfig& cfg) {
  cfg.validate();
  problems::ProblemSpec spec = build_problem(cfg);
  const Vector x0 = start_vector(cfg, spec);
  if (cfg.blind) blind_spec(spec);

  modes::CycleTrace trace;
  const modes::CycleTrace* trace_ptr = nullptr;
  if (cfg.mode.mode != modes::Mode::N) {
    modes::ModeConfig mode_cfg = cfg.mode;
    mode_cfg.keep_windows = true;
    trace = cfg.mode.mode == modes::Mode::C
                ? modes::run_c_mode(spec.problem, x0, mode_cfg)
                : modes::run_mc_mode(spec.problem, x0, mode_cfg);
    trace_ptr = &trace;
  }

  diagnostics::DiagnosticsReport rep = build_diagnostics(cfg, spec, trace_ptr);

  if (cfg.mode.mode == modes::Mode::N && spec.problem.solution &&
      spec.jacobian_at_solution) {
    // sigma_k trace along the orbit windows instead of along cycles.
    modes::IterateSequence seq(spec.problem, x0, cfg.mode.escape_factor);
    for (long n = 0; n <= cfg.mode.max_cycles; ++n) {
      const rre::IterateWindow win = modes::window_at(seq, n, cfg.mode.k);
      const diagnostics::CycleDiagnostics cd = diagnostics::cycle_diagnostics(
          win, &*spec.jacobian_at_solution, &*spec.problem.solution);
      rep.jbilou_sadok_trace.push_back(cd.jbilou_sadok);
      if (cd.sigma_k_krylov) {
        rep.krylov_sigma_trace.push_back(*cd.sigma_k_krylov);
        if (!rep.krylov_sigma_min ||
            *cd.sigma_k_krylov < *rep.krylov_sigma_min) {
          rep.krylov_sigma_min = cd.sigma_k_krylov;
        }
      }
    }
  }

  std::filesystem::create_directories(cfg.out_dir);
  Json root;
  root["problem"] = problem_json(cfg, spec);
  root["config"] = mode_json(cfg);
  if (trace_ptr != nullptr) {
    root["termination"] = modes::to_string(trace_ptr->reason);
  }
  root["diagnostics"] = report::diagnostics_json(rep);
  report::write_file(cfg.out_dir + "/diagnostics.json", root.dump(2) + "\n");
  log_note("wrote " + cfg.out_dir + "/diagnostics.json");
  return kExitOk;
}

}  // namespace rrex::cli
