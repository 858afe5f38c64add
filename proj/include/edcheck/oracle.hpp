#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edcheck/check.hpp"

namespace edcheck {

struct OracleConfig {
    bool strict_eo = false;       // enumerate eo independently instead of deriving it from mo
    bool infer_co = false;        // enumerate co for variables whose writes are not totally ordered
    bool all_witnesses = false;
    // Build each receiver's order as a growing prefix and drop prefixes whose partial
    // happens-before is already cyclic. Derived eo and given co only; max_events does
    // not apply and max_assignments bounds the visited prefixes instead.
    bool prune = false;
    std::size_t max_events = 24;
    std::uint64_t max_assignments = 2'000'000;
};

struct OracleResult {
    CheckResult result;             // Consistent / Inconsistent / Refused
    std::vector<Witness> witnesses; // all of them in all_witnesses mode, else at most one
    std::uint64_t assignments = 0;
};

// Number of candidate assignments the oracle would enumerate; nullopt on overflow.
std::optional<std::uint64_t> oracle_assignment_count(const TraceGraph& t, const OracleConfig& cfg);

OracleResult check_oracle(const TraceGraph& t, const OracleConfig& cfg = {});

}  // namespace edcheck
