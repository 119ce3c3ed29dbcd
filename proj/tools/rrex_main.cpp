#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "rrex/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  rrex::cli::Overrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file path")
      ->required();
  cmd->add_option("--mode", args.overrides.mode, "mode: n, c, or mc");
  cmd->add_option("--n", args.overrides.n, "window offset n");
  cmd->add_option("--k", args.overrides.k, "window size k");
  cmd->add_option("--tol", args.overrides.tol, "residual stop tolerance");
  cmd->add_option("--max-cycles", args.overrides.max_cycles,
                  "cycle cap (or n scan length)");
  cmd->add_option("--seed", args.overrides.seed, "start-vector seed");
  cmd->add_option("--out", args.overrides.out_dir, "output directory");
}

int dispatch(const std::string& verb, const CommonArgs& args) {
  rrex::cli::RunConfig cfg = rrex::cli::parse_config_file(args.config_path);
  rrex::cli::apply_overrides(cfg, args.overrides);
  if (verb == "run") return rrex::cli::cmd_run(cfg);
  if (verb == "compare") return rrex::cli::cmd_compare(cfg);
  return rrex::cli::cmd_diagnose(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vector-extrapolation accelerator for fixed-point iterations"};
  app.require_subcommand(1);

  CommonArgs run_args, compare_args, diagnose_args;
  add_common(app.add_subcommand("run", "run one problem/mode, emit trace"),
             run_args);
  add_common(app.add_subcommand("compare",
                                "run plain iteration and extrapolated modes "
                                "side by side"),
             compare_args);
  add_common(app.add_subcommand("diagnose",
                                "emit convergence-theory diagnostics"),
             diagnose_args);

  CLI11_PARSE(app, argc, argv);

  const std::string verb = app.get_subcommands().front()->get_name();
  const CommonArgs& args = verb == "run"       ? run_args
                           : verb == "compare" ? compare_args
                                               : diagnose_args;
  try {
    return dispatch(verb, args);
  } catch (const rrex::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return rrex::cli::kExitConfig;
  } catch (const rrex::UnsupportedDiagnosticError& e) {
    std::fprintf(stderr, "unsupported diagnostic: %s\n", e.what());
    return rrex::cli::kExitConfig;
  } catch (const rrex::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return rrex::cli::kExitFailure;
  }
}
