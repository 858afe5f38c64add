#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "edcheck/check.hpp"

namespace edcheck {

struct CheckerOptions {
    std::string algo = "enum";                  // enum | smt | nonest | oracle
    std::chrono::milliseconds timeout{0};       // 0 = none
    std::string solver_cmd;                     // smt; empty = default_solver_cmd()
    bool fifo = true;                           // smt
    bool strict_eo = false;                     // oracle
    bool saturate = true;                       // enum
    std::uint64_t budget = 0;                   // enum acyclicity checks, 0 = unlimited
};

bool known_algo(const std::string& algo);

// Refused for an unknown algorithm.
CheckResult run_checker(const TraceGraph& t, const CheckerOptions& opt);

struct BenchRow {
    std::string benchmark;
    std::string algo;
    std::size_t events = 0;     // max over the group
    std::size_t messages = 0;   // max posted messages
    std::size_t handlers = 0;   // max handlers
    std::size_t traces = 0;
    std::size_t consistent = 0;
    std::size_t inconsistent = 0;
    std::size_t timeouts = 0;
    std::size_t excluded = 0;   // refused or backend errors, not counted in traces
    double mean_time_s = 0;     // over non-timeouts; NaN if there are none
};

struct BenchReport {
    std::vector<BenchRow> rows;            // groups in name order, algorithms in request order
    std::vector<std::string> warnings;
};

struct BenchConfig {
    std::vector<std::string> algos{"enum", "smt"};
    std::chrono::milliseconds timeout{120'000};
    std::string solver_cmd;
    unsigned workers = 1;
};

// Group of a trace file: its stem without a trailing run number ("buyers_017" -> "buyers").
std::string bench_group(const std::string& filename);

// Runs every algorithm on every *.json trace in dir (not recursive).
BenchReport bench_run(const std::string& dir, const BenchConfig& cfg);

extern const char* const bench_csv_header;
std::string bench_csv(const BenchReport& r);
std::string bench_latex(const BenchReport& r);

}  // namespace edcheck
