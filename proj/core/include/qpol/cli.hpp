#pragma once

#include "qpol/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace qpol {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitNotConverged = 4;

struct GlobalArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;  // overrides the config's seed
    int jobs = 1;
    std::string out_dir;           // overrides the config's out_dir; default "out"
    std::string format = "csv";    // csv | json, for the qfi / estimate reports
};

// Commands take the already-loaded config (with flag overrides applied) and
// write artifacts under the output directory plus a short summary to `out`.
// They throw ConfigError / DataError; run_command maps those to exit codes.
int cmd_qfi(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out);
int cmd_simulate(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out);
int cmd_reconstruct(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out);
int cmd_estimate(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out);
int cmd_bias_sweep(const ExperimentConfig& cfg, const GlobalArgs& args, std::ostream& out);

// Loads the config file, applies --seed/--out overrides, dispatches on the
// command name and maps exceptions: ConfigError and bad values -> 2, data and
// I/O problems -> 3. Unconverged MLE exits 4 from the commands themselves.
int run_command(const std::string& command, const GlobalArgs& args, std::ostream& out,
                std::ostream& err);

}  // namespace qpol
