#pragma once

namespace floc::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// Entry point of the `floc` tool; returns the process exit code.
int run(int argc, char** argv);

}  // namespace floc::cli
