#ifndef RREX_CONFIG_HPP
#define RREX_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "rrex/modes.hpp"

namespace rrex::cli {

/// Fully resolved run configuration: a problem, a start, a mode, and output
/// choices. Parsed from a flat sectioned key = value file, then overridden
/// by command-line flags.
struct RunConfig {
  // [problem]
  std::string problem_name = "cos";
  std::vector<double> spectrum;  ///< linear / quadratic
  std::vector<double> offset;    ///< linear d; empty -> seeded unit vector
  double q_strength = 0.05;      ///< quadratic
  unsigned problem_seed = 1;
  bool similarity = false;
  bool blind = false;  ///< hide the stored solution from all reporting

  // [mode]
  modes::ModeConfig mode;

  // [start]
  unsigned start_seed = 1;
  double start_radius = 0.5;
  std::vector<double> x0;  ///< explicit start, overrides seed/radius

  // [diagnostics]
  bool diagnostics = false;
  std::vector<int> theta_ks = {1, 2, 3};
  bool perturbation = false;  ///< delta / pinv-shift check (needs solution)

  // [output]
  std::string out_dir = "out";
  std::vector<std::string> legs = {"plain", "n", "c", "mc"};

  void validate() const;  ///< throws ConfigError
};

/// Optional command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::string> mode;
  std::optional<long> n;
  std::optional<int> k;
  std::optional<double> tol;
  std::optional<int> max_cycles;
  std::optional<unsigned> seed;
  std::optional<std::string> out_dir;
};

/// Parses the config file; throws ConfigError with a 1-based line number on
/// any malformed line, unknown section, unknown key, or bad value.
RunConfig parse_config_file(const std::string& path);

void apply_overrides(RunConfig& cfg, const Overrides& ov);

modes::Mode parse_mode(const std::string& word);  ///< "n" | "c" | "mc"
const char* mode_name(modes::Mode m);

}  // namespace rrex::cli

#endif
