#pragma once

#include <string>

#include "edcheck/trace_io.hpp"

namespace edcheck::fixtures {

inline std::string golden(const std::string& name) { return read_file(std::string(EDCHECK_GOLDEN_DIR) + "/" + name); }

// main posts two singleton messages to h.
inline TraceGraph two_posts() {
    TraceGraph t;
    t.add_post("main", "p1", "h");
    t.add_post("main", "p2", "h");
    t.add_get("h", "g1");
    t.add_get("h", "g2");
    t.add_edge(Rel::po, "p1", "p2");
    t.add_edge(Rel::pb, "p1", "g1");
    t.add_edge(Rel::pb, "p2", "g2");
    return t;
}

// Writes and a read across two handlers, with an id that needs quoting.
inline TraceGraph shared_memory() {
    TraceGraph t;
    t.add_write("main", "w.1", "x", 1);
    t.add_post("main", "p", "h");
    t.add_get("h", "g");
    t.add_read("h", "r", "x");
    t.add_write("h", "w2", "x", 2);
    t.add_edge(Rel::po, "w.1", "p");
    t.add_edge(Rel::po, "g", "r");
    t.add_edge(Rel::po, "r", "w2");
    t.add_edge(Rel::pb, "p", "g");
    t.add_edge(Rel::rf, "w.1", "r");
    t.add_edge(Rel::co, "w.1", "w2");
    return t;
}

// Edges added out of order; the serialization must not depend on insertion order.
inline TraceGraph two_messages() {
    TraceGraph t;
    t.add_handler("main");
    t.add_handler("h");
    t.add_post("main", "p2", "h");
    t.add_post("main", "p1", "h");
    t.add_get("h", "g1");
    t.add_write("h", "w", "x", -7);
    t.add_get("h", "g2");
    t.add_read("h", "r", "x");
    t.add_edge(Rel::rf, "w", "r");
    t.add_edge(Rel::po, "p2", "p1");
    t.add_edge(Rel::po, "g2", "r");
    t.add_edge(Rel::po, "g1", "w");
    t.add_edge(Rel::pb, "p1", "g2");
    t.add_edge(Rel::pb, "p2", "g1");
    return t;
}

}  // namespace edcheck::fixtures
