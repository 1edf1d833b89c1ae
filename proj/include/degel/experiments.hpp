#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "degel/config.hpp"
#include "degel/grid.hpp"
#include "degel/solver.hpp"

namespace degel {

Grid2D build_grid(const ExperimentConfig& cfg);
OperatorSpec build_operator(const ExperimentConfig& cfg);
ModulatingFunction build_modulating_function(const ExperimentConfig& cfg);
ProblemSpec build_problem(const ExperimentConfig& cfg);
SolverConfig build_solver_config(const ExperimentConfig& cfg);

/// Exit codes of a pipeline run.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitBand = 2 };

struct RunOutcome {
    int exit_code = kExitOk;
    /// Every printed number, in print order; also written to summary.csv.
    std::vector<std::pair<std::string, double>> summary;
    /// One line per quantity outside its tolerance band.
    std::vector<std::string> band_failures;
};

/// Runs the pipeline `tag` and writes its CSV artifacts into out_dir
/// (created if missing). Library errors propagate as exceptions.
RunOutcome run_experiment(const std::string& tag, const ExperimentConfig& cfg, const std::string& out_dir,
                          std::uint64_t seed);

/// CLI wrapper: loads the config, runs, prints `key=value` lines to out and
/// diagnostics to err, and maps errors to exit code 1.
int run_cli(const std::string& tag, const std::string& config_path, const std::string& out_dir, std::uint64_t seed,
            std::ostream& out, std::ostream& err);

}  // namespace degel
