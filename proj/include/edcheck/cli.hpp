#pragma once

namespace edcheck {

enum ExitCode { ExitOk = 0, ExitInconsistent = 1, ExitUsage = 2, ExitTimeout = 3, ExitBackend = 4 };

// Entry point of the edcheck command line tool; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace edcheck
