#pragma once

#include <chrono>
#include <cstdint>

#include "edcheck/check.hpp"

namespace edcheck {

struct SaturationState {
    EdgeSet committed_mo;   // post pairs
    EdgeSet committed_eo;   // get pairs, the pb image of committed mo pairs between matched posts
    BitMatrix hb;           // closure of the static edges plus everything committed
    std::uint64_t rounds = 0;
};

struct SaturationResult {
    bool inconsistent = false;
    std::vector<EventId> cycle;   // only for cycles among the static edges
    std::string detail;
    SaturationState state;
};

// Requires validate(t, Partial) to pass.
SaturationResult saturate(const TraceGraph& t);

struct EnumConfig {
    bool saturate = true;
    std::uint64_t budget = 10'000'000;          // acyclicity checks, 0 = unlimited
    std::chrono::milliseconds timeout{0};      // 0 = none
};

CheckResult check_enum(const TraceGraph& t, const EnumConfig& cfg = {});

}  // namespace edcheck
