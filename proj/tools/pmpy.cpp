// pmpy: simulate, sweep, optimize and validate two-bladder swimmer strokes.

#include "pmpy/cli/commands.hpp"
#include "pmpy/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char **argv) {
    using namespace pmpy::cli;

    CLI::App app{"Two-bladder low-Reynolds-number swimmer toolkit"};
    app.set_version_flag("--version", std::string(toolkit_name) + " " + toolkit_version);
    app.require_subcommand(1);

    CommandOptions options;
    std::string out = ".";
    std::string fidelity;
    double tolerance = 0.0;
    std::size_t samples = 0;

    auto add_common = [&](CLI::App *cmd, bool needs_config) {
        auto *config = cmd->add_option("--config", options.config, "Experiment config (JSON)");
        if (needs_config)
            config->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", out, "Output directory")->capture_default_str();
        cmd->add_option("--fidelity", fidelity, "Model fidelity")->check(CLI::IsMember({"leading", "refined"}));
        cmd->add_option("--tolerance", tolerance, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
        cmd->add_option("--samples", samples, "Trajectory sample count");
        cmd->add_option("--jobs", options.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    };

    std::map<std::string, int (*)(const CommandOptions &, std::ostream &, std::ostream &)> commands{
        {"simulate", cmd_simulate}, {"sweep", cmd_sweep},         {"optimize", cmd_optimize},
        {"validate", cmd_validate}, {"flowfield", cmd_flowfield},
    };
    const std::map<std::string, std::string> help{
        {"simulate", "Integrate one stroke; write summary JSON and trajectory CSV"},
        {"sweep", "Run a parameter grid; write one CSV row per grid point"},
        {"optimize", "Optimal leg timing of a rectangle stroke"},
        {"validate", "Run the acceptance checks in-process"},
        {"flowfield", "Sample the superposed flow field on a grid"},
    };
    for (const auto &[name, fn] : commands)
        add_common(app.add_subcommand(name, help.at(name)), name != "validate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    options.out = out;
    for (const auto &[name, fn] : commands) {
        CLI::App *cmd = app.get_subcommand(name);
        if (!cmd->parsed())
            continue;
        if (cmd->count("--fidelity"))
            options.fidelity = pmpy::fidelity_from_string(fidelity);
        if (cmd->count("--tolerance"))
            options.tolerance = tolerance;
        if (cmd->count("--samples"))
            options.samples = samples;
        return fn(options, std::cout, std::cerr);
    }
    return exit_failure;
}
