#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace dispersia::cli {

enum class Command { Solve, SweepConvergence, SweepRegularity, Compare, ReduceMoment, VerifyPhase };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name);

// Command-line values that replace config entries. Lists apply to sweeps;
// solve and verify-phase accept a single value.
struct Overrides {
    std::vector<double> epsilons;
    std::vector<double> taus;
    std::vector<std::string> schemes;
    std::optional<int> kappa;  // moment kappa for reduce-moment, model kappa otherwise
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::string> sign;
    std::optional<double> lambda;
    std::optional<int> derivOrder;
};

struct RunManifest {
    Command command = Command::Solve;
    std::optional<std::filesystem::path> configPath;
    std::optional<std::string> preset;
    std::filesystem::path outDir = "out";
    bool emitPlotScript = false;
    unsigned workers = 1;
    std::optional<std::uint64_t> seed;  // phase sampling seed
    bool timing = true;                 // false writes walltime_s = 0
    Overrides overrides;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 1;
inline constexpr int numerical = 2;
}  // namespace exit_code

// Defaults, then the preset, then the config file, then overrides.
// Throws ConfigError.
RunConfig resolve_config(const RunManifest& manifest);

// Runs the command and writes its files into manifest.outDir. Progress and
// summaries go to `out`, errors to `err`. Returns an exit_code value.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

}  // namespace dispersia::cli
