#ifndef RREX_RUNNER_HPP
#define RREX_RUNNER_HPP

#include "rrex/config.hpp"
#include "rrex/problems.hpp"

namespace rrex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitMaxCycles = 2;
inline constexpr int kExitFailure = 3;

/// Instantiates the configured problem (before any blinding).
problems::ProblemSpec build_problem(const RunConfig& cfg);

/// Explicit x0 from the config, or a seeded start on the sphere of
/// start_radius around the stored solution.
linalg::Vector start_vector(const RunConfig& cfg,
                            const problems::ProblemSpec& spec);

/// Runs the configured mode; writes trace.csv and report.json under out_dir.
int cmd_run(const RunConfig& cfg);

/// Runs the configured legs on the same problem and start; writes
/// compare.csv and compare.json. One leg's failure does not abort the rest.
int cmd_compare(const RunConfig& cfg);

/// Writes diagnostics.json for the configured problem and mode.
int cmd_diagnose(const RunConfig& cfg);

}  // namespace rrex::cli

#endif
