#pragma once

#include <chrono>
#include <cstdint>

#include "edcheck/check.hpp"

namespace edcheck {

struct NestingReport {
    std::vector<EventId> nested_posts;   // posts inside posted messages
    bool ok() const { return nested_posts.empty(); }
};

// Requires derive_messages(t) to succeed.
NestingReport assert_no_nesting(const TraceGraph& t);

struct NonestConfig {
    std::uint64_t max_configurations = 20'000'000;   // 0 = unlimited
    std::chrono::milliseconds timeout{0};
};

// Breadth-first search over execution configurations. A configuration records
// how far each handler got, how many messages of every sender-receiver stream
// were consumed, and which senders' posts wait in each mailbox and in what order.
// Events run only once all their given predecessors ran; mailboxes are served
// in post order. work = visited configurations.
CheckResult check_nonest(const TraceGraph& t, const NonestConfig& cfg = {});

}  // namespace edcheck
