#pragma once

// Subcommands of the pmpy tool. Each run_* function is pure (returns the
// output text); the cmd_* wrappers read the config, write files under the
// output directory and map exceptions to exit codes.

#include "pmpy/cli/config.hpp"
#include "pmpy/sim.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pmpy::cli {

inline constexpr const char *toolkit_name = "pmpy";
inline constexpr const char *toolkit_version = "1.0.0";

enum ExitCode : int {
    exit_success = 0,
    exit_failure = 1, ///< IO and other unexpected errors
    exit_config = 2,  ///< config, construction or unsupported-operation errors
    exit_validity = 3,
    exit_accuracy = 4,
    exit_criterion = 5,
};

struct CommandOptions {
    std::string config;
    std::filesystem::path out = ".";
    std::optional<Fidelity> fidelity;
    std::optional<double> tolerance;
    std::optional<std::size_t> samples;
    std::size_t jobs = 1;
};

/// Applies the command-line overrides (fidelity, tolerance, samples).
void apply_overrides(ExperimentConfig &cfg, const CommandOptions &options);

/// Which stroke quantity a prediction refers to.
enum class Quantity { Displacement, Energy, Drag };

struct PredictionCheck {
    Prediction prediction;
    Quantity quantity = Quantity::Displacement;
    double numeric = 0.0;
    double ratio = 0.0; ///< numeric / predicted
};

/// Asymptotic predictions applicable to the configured stroke, compared with
/// the integrated result.
std::vector<PredictionCheck> prediction_checks(const ExperimentConfig &cfg, const BuiltStroke &built,
                                               const StrokeResult &result);

struct SimulateOutput {
    Json summary;
    std::string trajectory_csv;
};

SimulateOutput run_simulate(const ExperimentConfig &cfg);

/// Sweep over the raw base config. Throws ConfigError when the config has no
/// sweep section or the grid exceeds its point cap; per-point failures go to
/// the error column.
std::string run_sweep(const Json &base, const CommandOptions &options);

/// Rectangle strokes only; other strokes raise UnsupportedOperation.
Json run_optimize(const ExperimentConfig &cfg);

std::string run_flowfield(const ExperimentConfig &cfg);

/// Runs body, printing any exception to err as "error: ..." and returning the
/// matching exit code.
int guarded(const std::function<int()> &body, std::ostream &err);

int cmd_simulate(const CommandOptions &options, std::ostream &out, std::ostream &err);
int cmd_sweep(const CommandOptions &options, std::ostream &out, std::ostream &err);
int cmd_optimize(const CommandOptions &options, std::ostream &out, std::ostream &err);
int cmd_validate(const CommandOptions &options, std::ostream &out, std::ostream &err);
int cmd_flowfield(const CommandOptions &options, std::ostream &out, std::ostream &err);

} // namespace pmpy::cli
