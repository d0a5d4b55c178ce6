#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "villain/config.hpp"

namespace villain {

/// Stable exit-code contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitCheckFailed = 2 };

/// Writes `content` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// greens.csv + summary.json: Green's table and fitted asymptotic slope.
int cmd_greens(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// measurements.csv (`sweep,observable,value`) + summary.json.
int cmd_sample(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// duality.json: angle vs current partition functions and the disorder identity.
int cmd_duality_check(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// bounds.json: bound reports against exact values or a prior sample summary.
int cmd_bounds(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// Loads the config and dispatches; validation failures map to kExitInvalid.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace villain
