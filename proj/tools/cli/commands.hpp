#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace lgset::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitConfig = 2,
    kExitNumeric = 3,
    kExitValidation = 4,
};

struct CommandOptions {
    bool write_metadata = true;
};

/// jsmd, spectrum, validate, simulate, thin-crystal.
const std::vector<std::string>& command_names();

/// Runs one subcommand and maps failures to exit codes; diagnostics go to `err`.
int run_command(const std::string& name, const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err);

// The individual commands throw; run_command does the exit-code mapping.
int cmd_jsmd(const RunConfig& config, const CommandOptions& options, std::ostream& out);
int cmd_spectrum(const RunConfig& config, const CommandOptions& options, std::ostream& out);
int cmd_validate(const RunConfig& config, const CommandOptions& options, std::ostream& out);
int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& out);
int cmd_thin_crystal(const RunConfig& config, const CommandOptions& options, std::ostream& out);

}  // namespace lgset::cli
