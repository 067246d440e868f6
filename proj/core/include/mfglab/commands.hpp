#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "mfglab/config.hpp"

namespace mfglab {

enum class Command { solve, sweep, choquard, rescale, verify };

std::optional<Command> parse_command(std::string_view name);
std::string command_name(Command cmd);

// Exit status of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

// Runs one command, writing diagnostics.csv, summary.txt and (when
// cfg.write_fields) .f64 fields under `out`. Failed assertions are listed
// on `log` as "FAIL <name>: <detail>" lines and under the failures key of
// summary.txt.
int run_command(Command cmd, const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

}  // namespace mfglab
