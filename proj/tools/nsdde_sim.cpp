#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "nsdde/version.hpp"

int main(int argc, char** argv) {
    using namespace nsdde::cli;

    CLI::App app{"Euler-Maruyama simulation and analysis of neutral stochastic delay equations"};
    app.set_version_flag("--version", std::string(nsdde::kVersion));
    app.require_subcommand(1);

    CliOptions options;
    std::string output;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "Simulate sample paths on a single grid"},
        {"converge", "Coupled Cauchy study across a step ladder"},
        {"moments", "Second-moment bound estimates"},
        {"perturbation", "Integrability of the perturbation process"},
        {"check", "Sample-based checks of the structural conditions"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", options.config, "Experiment JSON file")->required();
        sub->add_option("--output", output, "Output directory (overrides output_dir)");
        sub->add_option("--seed", seed, "Master seed (overrides the config)");
        sub->add_option("--threads", threads, "Worker threads (default NSDDE_SIM_THREADS or 1)")
            ->check(CLI::Range(1u, 1023u));
        sub->add_flag("--strict", options.strict, "Exit 3 when any path diverges");
        if (std::string(name) == "simulate") {
            sub->add_flag("--dump-increments", options.dump_increments,
                          "Write raw Brownian increments next to each path");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    CLI::App* chosen = app.get_subcommands().front();
    options.command = chosen->get_name();
    if (chosen->count("--output")) options.output = output;
    if (chosen->count("--seed")) options.seed = seed;
    if (chosen->count("--threads")) options.threads = threads;
    return run_command(options, std::cout, std::cerr);
}
