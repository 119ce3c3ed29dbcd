#include "rrex/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace rrex::report {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json json_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return json_number(*v);
}

Json json_vector(const linalg::Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(json_number(v(i)));
  return arr;
}

std::string csv_cell(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "";
  return format_double(*v);
}

Json cycle_trace_json(const modes::CycleTrace& trace) {
  Json j;
  j["termination"] = modes::to_string(trace.reason);
  if (!trace.message.empty()) j["message"] = trace.message;
  j["cycles"] = trace.cycles();
  Json records = Json::array();
  for (const modes::CycleRecord& rec : trace.records) {
    Json r;
    r["cycle"] = rec.cycle;
    r["residual"] = json_number(rec.residual);
    r["error"] = json_number(rec.error);
    r["k_used"] = rec.k_used;
    if (rec.extrapolation) {
      r["extrapolation_residual"] = json_number(rec.extrapolation->residual_norm);
      r["gamma_abs_sum"] = json_number(rec.extrapolation->gamma_abs_sum);
      r["gamma"] = json_vector(rec.extrapolation->gamma);
      r["w_rank"] = rec.extrapolation->w_rank;
    }
    r["f_evals"] = rec.f_evals;
    r["s"] = json_vector(rec.s);
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j;
}

Json n_mode_json(const modes::NModeRun& run,
                 const std::vector<std::optional<double>>& residuals) {
  Json j;
  j["termination"] = run.converged_early ? "converged" : "scan-complete";
  j["f_evals"] = run.f_evals;
  Json entries = Json::array();
  for (size_t i = 0; i < run.entries.size(); ++i) {
    const modes::NModeEntry& e = run.entries[i];
    Json r;
    r["n"] = e.n;
    r["residual"] =
        i < residuals.size() ? json_number(residuals[i]) : Json(nullptr);
    r["error"] = json_number(e.error);
    r["iterate_error"] = json_number(e.iterate_error);
    r["k_used"] = e.result.k;
    r["extrapolation_residual"] = json_number(e.result.residual_norm);
    r["gamma_abs_sum"] = json_number(e.result.gamma_abs_sum);
    r["w_rank"] = e.result.w_rank;
    r["f_evals"] = e.f_evals;
    r["s"] = json_vector(e.result.s);
    entries.push_back(std::move(r));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json theta_bounds_json(const diagnostics::ThetaBounds& b) {
  Json j;
  j["k"] = b.k;
  j["power"] = json_number(b.power);
  j["pd_hermitian"] = json_number(b.pd_hermitian);
  j["chebyshev"] = json_number(b.chebyshev);
  if (b.degree_one_exact) j["degree_one_exact"] = true;
  return j;
}

Json diagnostics_json(const diagnostics::DiagnosticsReport& rep) {
  Json j;
  j["l_estimate"] = json_number(rep.l_estimate);
  j["spectral_radius"] = json_number(rep.spectral_radius);
  j["contraction"] = rep.contraction;
  Json theta = Json::array();
  for (const diagnostics::ThetaBounds& b : rep.theta) {
    theta.push_back(theta_bounds_json(b));
  }
  j["theta_bounds"] = std::move(theta);
  Json sigmas = Json::array();
  for (double s : rep.krylov_sigma_trace) sigmas.push_back(json_number(s));
  j["krylov_sigma_trace"] = std::move(sigmas);
  j["krylov_sigma_min"] = json_number(rep.krylov_sigma_min);
  Json js = Json::array();
  for (double v : rep.jbilou_sadok_trace) js.push_back(json_number(v));
  j["jbilou_sadok_trace"] = std::move(js);
  Json gs = Json::array();
  for (double v : rep.gamma_abs_sums) gs.push_back(json_number(v));
  j["gamma_abs_sums"] = std::move(gs);
  j["gamma_abs_max"] = json_number(rep.gamma_abs_max);
  if (rep.perturbation) {
    const diagnostics::PerturbationQuantities& q = *rep.perturbation;
    Json p;
    p["delta"] = json_number(q.delta);
    p["pinv_perturbation_norm"] = json_number(q.pinv_perturbation_norm);
    p["pinv_perturbation_bound"] = json_number(q.pinv_perturbation_bound);
    p["companion_pinv_norm"] = json_number(q.companion_pinv_norm);
    p["remainder_norm"] = json_number(q.remainder_norm);
    p["delta_below_one"] = q.delta_below_one;
    p["bound_holds"] = q.bound_holds;
    p["companion_rank"] = q.companion_rank;
    j["perturbation"] = std::move(p);
  }
  j["warnings"] = rep.warnings;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing file '" + path + "'");
}

}  // namespace rrex::report
