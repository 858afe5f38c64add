#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "edcheck/check.hpp"

namespace edcheck {

using Less = std::pair<EventId, EventId>;   // t_first < t_second

struct SolverQuery {
    std::vector<std::string> vars;                      // per event, already a valid SMT-LIB symbol
    std::vector<Less> hard_edges;
    std::vector<std::pair<Less, Less>> serial;          // per handler and message pair
    std::vector<std::pair<Less, Less>> post_orders;     // per receiver and post pair
    std::vector<std::pair<Less, Less>> fifo;            // (p1 < p2) iff (g1 < g2)
};

SolverQuery encode(const TraceGraph& t, bool fifo = true);

std::string render_smtlib(const SolverQuery& q);

// SMT-LIB symbol for event timestamps: t_<id>, quoted when needed.
std::string timestamp_symbol(const std::string& id, EventId index);

struct SmtConfig {
    std::string solver_cmd;                        // empty: default_solver_cmd()
    std::chrono::milliseconds timeout{120'000};    // 0 = none
    bool fifo = true;
};

// $EDCHECK_SOLVER_CMD, else "z3 -in".
std::string default_solver_cmd();

CheckResult check_smt(const TraceGraph& t, const SmtConfig& cfg = {});

}  // namespace edcheck
