#pragma once

#include <string>
#include <vector>

namespace blocktri::cli {

// Exit codes shared by every subcommand.
//   0  success
//   1  file could not be read or written, or its content failed to parse
//   2  bad usage: unknown flags, invalid argument values, unmet preconditions
//   3  the matrix is defective and the requested output needs a full
//      eigenvector basis
//   4  numerical failure, or a verification that ran but did not pass
enum ExitCode : int {
    kOk = 0,
    kIoError = 1,
    kUsageError = 2,
    kDefective = 3,
    kNumericalError = 4,
};

// Full argv, program name included. Never throws; failures map to exit codes
// with a message on stderr.
int run_cli(const std::vector<std::string>& args);

}  // namespace blocktri::cli
