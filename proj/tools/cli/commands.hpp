// The storyweave command line: stats, solve, render and bench.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace storyweave::cli {

/// Parses `args` (without the program name) and runs the chosen command.
/// Returns the process exit code: 0 on success, 1 on a failed run or bad
/// input, and CLI11's code for usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Sets the log level from STORYWEAVE_LOG ("debug", "info", "warn", ...,
/// or spdlog's "logger=level" lists). Logs go to stderr.
void configure_logging();

}  // namespace storyweave::cli
