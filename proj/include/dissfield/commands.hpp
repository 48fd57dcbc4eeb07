// commands.hpp — subcommands behind the dissfield CLI
//
// Exit codes: 0 success, 1 threshold failure, 2 config error, 3 numerical failure.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dissfield/config.hpp"
#include "dissfield/error.hpp"

namespace dissfield {

inline constexpr const char* kToolVersion = DISSFIELD_VERSION;

enum ExitCode : int { kExitOk = 0, kExitThreshold = 1, kExitConfig = 2, kExitNumerical = 3 };

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;  // overrides [output] directory
    std::optional<int> threads;                 // overrides [threads] count
    PiMeanSign pi_mean_sign{PiMeanSign::subtract};
};

struct OutputEntry {
    std::string path;  // relative to the output directory
    std::string sha256;
};

struct RunReport {
    std::string command;
    std::string config_digest;
    std::string tool_version{kToolVersion};
    double wall_time{0.0};
    std::vector<std::string> warnings;
    std::vector<OutputEntry> outputs;
    int exit_code{kExitOk};
    std::string message;
};

const std::vector<std::string>& command_names();

// Parses the config, runs the command and writes run_report.json next to the outputs.
// Never throws for configuration or numerical failures; they map onto exit codes.
RunReport run_command(const std::string& command, const CommandOptions& opts);

// The individual commands throw dissfield::Error; run_command maps them.
RunReport cmd_kk_check(const RunConfig& cfg, const CommandOptions& opts);
RunReport cmd_greens(const RunConfig& cfg, const CommandOptions& opts);
RunReport cmd_thermo(const RunConfig& cfg, const CommandOptions& opts);
RunReport cmd_correlate(const RunConfig& cfg, const CommandOptions& opts);
RunReport cmd_langevin(const RunConfig& cfg, const CommandOptions& opts);

int exit_code_for(ErrorKind kind);

} // namespace dissfield
