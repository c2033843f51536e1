#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace nsdde::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConditionFailed = 1,
    kExitInvalidInput = 2,
    kExitDiverged = 3,
};

struct CliOptions {
    std::string command;  ///< simulate | converge | moments | perturbation | check
    std::filesystem::path config;
    std::optional<std::filesystem::path> output;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    bool strict = false;
    bool dump_increments = false;
};

/// Worker count: --threads, else NSDDE_SIM_THREADS, else 1.
unsigned resolve_threads(const CliOptions& options);

/// Runs one subcommand end to end. Diagnostics go to `err`, the final
/// summary line to `out`. Never throws; every failure maps to an ExitCode.
int run_command(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace nsdde::cli
