#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcav::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_io = 4,
};

/// Version string written into every manifest.
const char* version();

/// `<tool> {spectrum|evolve|trajectories|cat|estimate|hologram|sweep} --config <path>
///  [--out <dir>] [--seed <int>] [--format csv|json]`. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace qcav::cli
