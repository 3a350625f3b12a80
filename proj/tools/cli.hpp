#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "neolith/config.hpp"

namespace neolith::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUnexpected = 1,
    kInputError = 2,
    kNumericalAbort = 3,
    kDataQuality = 4,
};

/// Each command writes its files and returns the one-line summary.
std::string build_regions(const Config& config, std::ostream& log);
std::string run(const Config& config, std::ostream& log);
std::string analyze(const Config& config, std::ostream& log);

/// Parses `args` (without the program name), dispatches, prints the summary
/// line to `out` and diagnostics to `err`, and returns the exit code.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace neolith::cli
