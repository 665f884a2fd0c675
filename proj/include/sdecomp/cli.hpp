#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdecomp {

/// Stable exit codes for scripting.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitNumerical = 3, kExitIo = 4 };

struct RunConfig {
    std::string subcommand;  // synth | decompose | tf | bench | align
    std::string method;
    /// Method parameters as given on the command line, keyed without the leading dashes
    /// and with '-' turned into '_' (e.g. "max_iters" -> "1000").
    std::map<std::string, std::string> params;
    std::optional<std::string> input;
    std::optional<std::string> output;
    std::optional<std::string> csv;
    std::optional<double> fs;
    std::uint64_t seed = 0;

    std::string signal = "s1";                 // synth and bench
    std::optional<double> snr_db;              // synth, align
    std::string suite;                         // bench: accuracy | noise | sweep
    int n_realizations = 10;
    std::vector<double> snr_grid_db;           // bench noise
    std::string param;                         // bench sweep
    std::vector<double> values;
    int bins = 256;                            // tf
    std::optional<double> fmax_hz;
};

/// Parse arguments (program name excluded). Throws UsageError naming the flag at fault.
RunConfig parse_cli(const std::vector<std::string>& args);

/// Execute a parsed configuration; returns one of the ExitCode values.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_cli + execute with error-to-exit-code mapping.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdecomp
