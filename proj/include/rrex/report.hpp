#ifndef RREX_REPORT_HPP
#define RREX_REPORT_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "rrex/diagnostics.hpp"
#include "rrex/modes.hpp"

namespace rrex::report {

using Json = nlohmann::ordered_json;

/// Shortest deterministic decimal form that round-trips a double
/// ("%.17g"); callers map non-finite values to empty CSV fields or JSON
/// null before formatting.
std::string format_double(double v);

/// Finite numbers pass through; non-finite values become JSON null.
Json json_number(double v);
Json json_number(const std::optional<double>& v);
Json json_vector(const linalg::Vector& v);

Json cycle_trace_json(const modes::CycleTrace& trace);
Json n_mode_json(const modes::NModeRun& run,
                 const std::vector<std::optional<double>>& residuals);
Json theta_bounds_json(const diagnostics::ThetaBounds& b);
Json diagnostics_json(const diagnostics::DiagnosticsReport& rep);

/// One CSV cell: empty for absent/non-finite values.
std::string csv_cell(const std::optional<double>& v);

/// Writes content verbatim (binary mode, LF endings preserved).
void write_file(const std::string& path, const std::string& content);

}  // namespace rrex::report

#endif
