#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace edcheck {

struct ProcessResult {
    bool started = false;     // false: exec failed, see error
    bool timed_out = false;   // killed after the deadline
    int exit_code = -1;       // -1 when killed by a signal
    std::string out;
    std::string err;
    std::string error;
};

// Runs argv[0] (PATH lookup) with `input` on stdin; timeout 0 waits forever.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout);

// Whitespace split, no quoting.
std::vector<std::string> split_command(const std::string& cmd);

}  // namespace edcheck
