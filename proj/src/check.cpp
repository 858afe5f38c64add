#include "edcheck/check.hpp"

namespace edcheck {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "consistent";
        case Verdict::Inconsistent: return "inconsistent";
        case Verdict::Timeout: return "timeout";
        case Verdict::BackendError: return "backend-error";
        case Verdict::Refused: return "refused";
    }
    return "?";
}

std::optional<std::string> partial_trace_error(const TraceGraph& t) {
    ValidationReport rep = validate(t, Mode::Partial);
    if (rep.ok()) return std::nullopt;
    return "invalid trace: " + rep.violations.front().message;
}

StaticGraph build_static(const TraceGraph& t) {
    StaticGraph s;
    s.trace = &t;
    s.ms = derive_messages(t);
    const std::size_t n = t.size();
    const std::size_t nh = t.handlers().size();
    s.edges.assign(n, {});
    for (const Message& m : s.ms.messages)
        for (std::size_t i = 1; i < m.events.size(); ++i) s.edges[m.events[i - 1]].push_back(m.events[i]);
    for (std::size_t h = 0; h < nh; ++h) {
        const Message& init = s.ms.messages[s.ms.initial[h]];
        if (init.events.empty()) continue;
        for (int m : s.ms.posted[h]) s.edges[init.events.back()].push_back(s.ms.messages[m].get);
    }
    for (const Edge& e : t.edges())
        if (e.rel == Rel::rf || e.rel == Rel::co || e.rel == Rel::pb) s.edges[e.src].push_back(e.dst);
    for (auto [r, w] : derived_fr(t)) s.edges[r].push_back(w);
    dedupe(s.edges);

    s.posts_to.assign(nh, {});
    s.gets_on.assign(nh, {});
    for (std::size_t i = 0; i < n; ++i) {
        const Event& e = t.event(i);
        if (e.kind == EventKind::Post) s.posts_to[e.receiver].push_back(static_cast<EventId>(i));
        if (e.kind == EventKind::Get) s.gets_on[e.handler].push_back(static_cast<EventId>(i));
    }
    return s;
}

}  // namespace edcheck
