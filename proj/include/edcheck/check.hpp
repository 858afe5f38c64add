#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edcheck/trace.hpp"

namespace edcheck {

enum class Verdict { Consistent, Inconsistent, Timeout, BackendError, Refused };

const char* to_string(Verdict v);

struct CheckResult {
    Verdict verdict = Verdict::Inconsistent;
    std::optional<Witness> witness;
    std::vector<EventId> cycle;
    std::string detail;
    std::uint64_t work = 0;   // acyclicity checks, visited configurations, ... depending on the checker
};

class Deadline {
public:
    Deadline() = default;
    explicit Deadline(std::chrono::milliseconds budget)
        : enabled_(budget.count() > 0), end_(std::chrono::steady_clock::now() + budget) {}
    bool expired() const { return enabled_ && std::chrono::steady_clock::now() >= end_; }

private:
    bool enabled_ = false;
    std::chrono::steady_clock::time_point end_{};
};

// Fixed part of the happens-before graph used by the search-based checkers.
// po is kept as successor chains per message plus initial-tail -> get edges;
// reachability equals that of the full definitional relation.
struct StaticGraph {
    const TraceGraph* trace = nullptr;
    MessageStructure ms;
    Adjacency edges;                              // po, rf, co, fr, pb
    std::vector<std::vector<EventId>> posts_to;   // per receiver, file order
    std::vector<std::vector<EventId>> gets_on;    // per handler, file order

    std::size_t size() const { return edges.size(); }
    EventId first_of(int msg) const { return ms.messages[msg].events.front(); }
    EventId last_of(int msg) const { return ms.messages[msg].events.back(); }
};

// Message of the first violation of validate(t, Partial), nullopt when the trace is usable.
std::optional<std::string> partial_trace_error(const TraceGraph& t);

// Requires validate(t, Partial) to pass.
StaticGraph build_static(const TraceGraph& t);

// Event -> message -> get, -1 for initial messages.
inline EventId get_of_event(const StaticGraph& s, EventId e) { return s.ms.messages[s.ms.message_of[e]].get; }

}  // namespace edcheck
