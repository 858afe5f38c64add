#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edcheck/relation.hpp"

namespace edcheck {

using EventId = int;

enum class EventKind { Write, Read, Post, Get };
enum class Rel { po, rf, co, pb, mo, eo };

constexpr Rel all_rels[] = {Rel::po, Rel::rf, Rel::co, Rel::pb, Rel::mo, Rel::eo};

const char* to_string(EventKind k);
const char* to_string(Rel r);
std::optional<EventKind> kind_from_string(std::string_view s);
std::optional<Rel> rel_from_string(std::string_view s);

struct Event {
    std::string id;
    int handler = -1;
    EventKind kind = EventKind::Write;
    std::string var;        // Write, Read
    std::int64_t val = 0;   // Write
    int receiver = -1;      // Post
};

struct Edge {
    Rel rel;
    EventId src;
    EventId dst;
    auto operator<=>(const Edge&) const = default;
};

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TraceGraph {
public:
    int add_handler(std::string name);
    int handler_index(std::string_view name) const;
    // Creates the handler on first use.
    int ensure_handler(std::string_view name);

    EventId add_event(Event e);
    EventId add_write(std::string_view handler, std::string id, std::string var, std::int64_t val = 0);
    EventId add_read(std::string_view handler, std::string id, std::string var);
    EventId add_post(std::string_view handler, std::string id, std::string_view receiver);
    EventId add_get(std::string_view handler, std::string id);

    void add_edge(Rel rel, EventId src, EventId dst);
    void add_edge(Rel rel, std::string_view src, std::string_view dst);
    // po edges between consecutive elements
    void add_chain(Rel rel, const std::vector<EventId>& seq);
    void remove_rel(Rel rel);

    std::optional<EventId> find(std::string_view id) const;
    EventId at(std::string_view id) const;

    const std::vector<std::string>& handlers() const { return handlers_; }
    const std::vector<Event>& events() const { return events_; }
    const Event& event(EventId e) const { return events_[e]; }
    const std::set<Edge>& edges() const { return edges_; }
    std::size_t size() const { return events_.size(); }
    bool has_rel(Rel rel) const;
    std::vector<std::pair<EventId, EventId>> pairs(Rel rel) const;

private:
    std::vector<std::string> handlers_;
    std::vector<Event> events_;
    std::set<Edge> edges_;
    std::unordered_map<std::string, EventId> ids_;
};

using EdgeSet = std::set<std::pair<EventId, EventId>>;

// ---- validation ----

enum class Mode { Partial, Full };

struct ValidateOptions {
    bool strict = false;       // no auto-insertion of initial-message-before-get po edges
    bool require_co = true;    // co must be total per variable
};

struct Violation {
    std::string code;
    std::string message;
    std::vector<EventId> events;
};

struct ValidationReport {
    std::vector<Violation> violations;
    // po edges that were missing and are implied by the initial-message rule
    std::vector<std::pair<EventId, EventId>> repaired;
    bool ok() const { return violations.empty(); }
    bool has(std::string_view code) const;
};

ValidationReport validate(const TraceGraph& t, Mode mode, const ValidateOptions& opt = {});

// ---- message structure ----

struct Message {
    int handler = -1;
    EventId get = -1;              // -1 for the initial message
    std::vector<EventId> events;   // po order, starting with the get for posted messages
    bool initial() const { return get < 0; }
};

struct MessageStructure {
    std::vector<Message> messages;
    std::vector<int> initial;                 // per handler: message index
    std::vector<std::vector<int>> posted;     // per handler: message indices, gets in file order
    std::vector<int> message_of;              // per event
    std::vector<EventId> post_of_get;         // per event, -1 if none
    std::vector<EventId> get_of_post;         // per event, -1 if none
};

// Throws TraceError when the po structure does not partition into messages.
MessageStructure derive_messages(const TraceGraph& t);

// po closed transitively, including the initial-message-before-gets edges.
BitMatrix po_closure(const TraceGraph& t);

// ---- derived relations ----

EdgeSet derived_fr(const TraceGraph& t);
EdgeSet derived_qo(const TraceGraph& t, const EdgeSet& mo);
EdgeSet derived_eo_dagger(const TraceGraph& t, const EdgeSet& eo);

struct HbResult {
    bool acyclic = true;
    std::vector<EventId> linearization;
    std::vector<EventId> cycle;
    explicit operator bool() const { return acyclic; }
};

// Definitional happens-before: po ∪ rf ∪ fr ∪ co ∪ pb ∪ mo ∪ eo† ∪ qo.
class HappensBefore {
public:
    explicit HappensBefore(const TraceGraph& t);
    // mo and eo are used after transitive closure
    Adjacency relation(const EdgeSet& mo, const EdgeSet& eo) const;
    HbResult check(const EdgeSet& mo, const EdgeSet& eo) const;
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    BitMatrix po_;
    std::vector<int> kind_;
    std::vector<EventId> post_of_get_;
    Adjacency base_;
    Adjacency tail_;   // event followed by its po-successors
};

// Uses the mo and eo edges stored in t.
HbResult hb_acyclic(const TraceGraph& t);

// ---- witnesses ----

struct Witness {
    std::map<int, std::vector<EventId>> mo;   // receiver -> posts
    std::map<int, std::vector<EventId>> eo;   // handler -> gets
    std::vector<EventId> linearization;
};

// Adds the witness orders as mo/eo successor chains.
TraceGraph with_witness(const TraceGraph& t, const Witness& w);

// Witness from a total order of all events: mo/eo are the induced orders.
Witness witness_from_order(const TraceGraph& t, const std::vector<EventId>& order);

// Empty string when the witness extends t to a valid, acyclic full trace.
std::string check_witness(const TraceGraph& t, const Witness& w);

}  // namespace edcheck
