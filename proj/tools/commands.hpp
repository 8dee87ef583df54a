#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace specline::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNotConverged = 2,
    kDecompositionFailed = 3,
    kInteriorPoint = 4,
};

/// Entry point for the `specline` tool: subcommands generate, estimate,
/// decompose and montecarlo. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specline::cli
