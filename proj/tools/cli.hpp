#pragma once

namespace eit::cli {

/// Parses argv, runs one subcommand and maps errors to exit codes:
/// 0 success, 1 I/O failure, 2 invalid input or usage, 3 numerical failure.
int run(int argc, char** argv);

}  // namespace eit::cli
