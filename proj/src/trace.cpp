#include "edcheck/trace.hpp"

#include <algorithm>
#include <sstream>

namespace edcheck {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Write: return "write";
        case EventKind::Read: return "read";
        case EventKind::Post: return "post";
        case EventKind::Get: return "get";
    }
    return "?";
}

const char* to_string(Rel r) {
    switch (r) {
        case Rel::po: return "po";
        case Rel::rf: return "rf";
        case Rel::co: return "co";
        case Rel::pb: return "pb";
        case Rel::mo: return "mo";
        case Rel::eo: return "eo";
    }
    return "?";
}

std::optional<EventKind> kind_from_string(std::string_view s) {
    if (s == "write") return EventKind::Write;
    if (s == "read") return EventKind::Read;
    if (s == "post") return EventKind::Post;
    if (s == "get") return EventKind::Get;
    return std::nullopt;
}

std::optional<Rel> rel_from_string(std::string_view s) {
    for (Rel r : all_rels)
        if (s == to_string(r)) return r;
    return std::nullopt;
}

// ---- TraceGraph ----

int TraceGraph::add_handler(std::string name) {
    if (handler_index(name) >= 0) throw TraceError("duplicate handler '" + name + "'");
    handlers_.push_back(std::move(name));
    return static_cast<int>(handlers_.size()) - 1;
}

int TraceGraph::handler_index(std::string_view name) const {
    for (std::size_t i = 0; i < handlers_.size(); ++i)
        if (handlers_[i] == name) return static_cast<int>(i);
    return -1;
}

int TraceGraph::ensure_handler(std::string_view name) {
    int h = handler_index(name);
    return h >= 0 ? h : add_handler(std::string(name));
}

EventId TraceGraph::add_event(Event e) {
    if (ids_.count(e.id)) throw TraceError("duplicate event id '" + e.id + "'");
    EventId id = static_cast<EventId>(events_.size());
    ids_.emplace(e.id, id);
    events_.push_back(std::move(e));
    return id;
}

EventId TraceGraph::add_write(std::string_view handler, std::string id, std::string var, std::int64_t val) {
    Event e;
    e.id = std::move(id);
    e.handler = ensure_handler(handler);
    e.kind = EventKind::Write;
    e.var = std::move(var);
    e.val = val;
    return add_event(std::move(e));
}

EventId TraceGraph::add_read(std::string_view handler, std::string id, std::string var) {
    Event e;
    e.id = std::move(id);
    e.handler = ensure_handler(handler);
    e.kind = EventKind::Read;
    e.var = std::move(var);
    return add_event(std::move(e));
}

EventId TraceGraph::add_post(std::string_view handler, std::string id, std::string_view receiver) {
    Event e;
    e.id = std::move(id);
    e.handler = ensure_handler(handler);
    e.kind = EventKind::Post;
    e.receiver = ensure_handler(receiver);
    return add_event(std::move(e));
}

EventId TraceGraph::add_get(std::string_view handler, std::string id) {
    Event e;
    e.id = std::move(id);
    e.handler = ensure_handler(handler);
    e.kind = EventKind::Get;
    return add_event(std::move(e));
}

void TraceGraph::add_edge(Rel rel, EventId src, EventId dst) {
    if (src < 0 || dst < 0 || src >= static_cast<EventId>(events_.size()) ||
        dst >= static_cast<EventId>(events_.size()))
        throw TraceError("edge endpoint out of range");
    edges_.insert({rel, src, dst});
}

void TraceGraph::add_edge(Rel rel, std::string_view src, std::string_view dst) {
    add_edge(rel, at(src), at(dst));
}

void TraceGraph::add_chain(Rel rel, const std::vector<EventId>& seq) {
    for (std::size_t i = 1; i < seq.size(); ++i) add_edge(rel, seq[i - 1], seq[i]);
}

void TraceGraph::remove_rel(Rel rel) {
    for (auto it = edges_.begin(); it != edges_.end();) {
        if (it->rel == rel)
            it = edges_.erase(it);
        else
            ++it;
    }
}

std::optional<EventId> TraceGraph::find(std::string_view id) const {
    auto it = ids_.find(std::string(id));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

EventId TraceGraph::at(std::string_view id) const {
    auto e = find(id);
    if (!e) throw TraceError("unknown event id '" + std::string(id) + "'");
    return *e;
}

bool TraceGraph::has_rel(Rel rel) const {
    for (const Edge& e : edges_)
        if (e.rel == rel) return true;
    return false;
}

std::vector<std::pair<EventId, EventId>> TraceGraph::pairs(Rel rel) const {
    std::vector<std::pair<EventId, EventId>> out;
    for (const Edge& e : edges_)
        if (e.rel == rel) out.emplace_back(e.src, e.dst);
    return out;
}

// ---- validation ----

bool ValidationReport::has(std::string_view code) const {
    for (const auto& v : violations)
        if (v.code == code) return true;
    return false;
}

namespace {

struct Reporter {
    const TraceGraph& t;
    ValidationReport& rep;

    void add(std::string code, std::string msg, std::vector<EventId> evs = {}) {
        std::string full = msg;
        if (!evs.empty()) {
            full += " (";
            for (std::size_t i = 0; i < evs.size(); ++i) {
                if (i) full += ", ";
                full += t.event(evs[i]).id;
            }
            full += ")";
        }
        rep.violations.push_back({std::move(code), std::move(full), std::move(evs)});
    }
};

// Closure of one relation restricted to a group; reports cycles and missing pairs.
void check_total_order(const TraceGraph& t, Reporter& r, Rel rel, const std::vector<std::vector<EventId>>& groups,
                       const std::string& what) {
    const std::size_t n = t.size();
    Adjacency g(n);
    for (auto [a, b] : t.pairs(rel)) g[a].push_back(b);
    BitMatrix m = closure_of(g);
    std::string name = to_string(rel);
    for (std::size_t v = 0; v < n; ++v)
        if (m.test(v, v)) {
            r.add(name + "-cyclic", name + " is cyclic", {static_cast<EventId>(v)});
            return;
        }
    for (const auto& grp : groups)
        for (std::size_t i = 0; i < grp.size(); ++i)
            for (std::size_t j = i + 1; j < grp.size(); ++j)
                if (!m.test(grp[i], grp[j]) && !m.test(grp[j], grp[i]))
                    r.add(name + "-not-total", name + " not total on " + what, {grp[i], grp[j]});
}

struct PoInfo {
    BitMatrix closure;
    bool cyclic = false;
    std::vector<std::vector<EventId>> get_anc;
};

PoInfo po_info(const TraceGraph& t, const std::vector<std::pair<EventId, EventId>>& extra) {
    const std::size_t n = t.size();
    Adjacency g(n);
    for (auto [a, b] : t.pairs(Rel::po)) g[a].push_back(b);
    for (auto [a, b] : extra) g[a].push_back(b);
    PoInfo info{closure_of(g), false, std::vector<std::vector<EventId>>(n)};
    info.cyclic = info.closure.has_diagonal();
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t a = 0; a < n; ++a)
            if (t.event(a).kind == EventKind::Get && info.closure.test(a, e) && a != e)
                info.get_anc[e].push_back(static_cast<EventId>(a));
    return info;
}

// Last event of each handler's initial message, or -1.
std::vector<EventId> initial_tails(const TraceGraph& t, const PoInfo& po) {
    std::vector<EventId> tail(t.handlers().size(), -1);
    for (std::size_t e = 0; e < t.size(); ++e) {
        const Event& ev = t.event(e);
        if (ev.kind == EventKind::Get || !po.get_anc[e].empty()) continue;
        EventId& cur = tail[ev.handler];
        if (cur < 0 || po.closure.test(cur, e)) cur = static_cast<EventId>(e);
    }
    return tail;
}

std::vector<std::pair<EventId, EventId>> missing_initial_edges(const TraceGraph& t, const PoInfo& po) {
    std::vector<std::pair<EventId, EventId>> out;
    auto tail = initial_tails(t, po);
    for (std::size_t g = 0; g < t.size(); ++g) {
        const Event& ev = t.event(g);
        if (ev.kind != EventKind::Get) continue;
        EventId last = tail[ev.handler];
        if (last >= 0 && !po.closure.test(last, g)) out.emplace_back(last, static_cast<EventId>(g));
    }
    return out;
}

}  // namespace

ValidationReport validate(const TraceGraph& t, Mode mode, const ValidateOptions& opt) {
    ValidationReport rep;
    Reporter r{t, rep};
    const std::size_t n = t.size();
    const int nh = static_cast<int>(t.handlers().size());

    for (std::size_t i = 0; i < n; ++i) {
        const Event& e = t.event(i);
        EventId id = static_cast<EventId>(i);
        if (e.handler < 0 || e.handler >= nh) r.add("field", "event has unknown handler", {id});
        bool mem = e.kind == EventKind::Write || e.kind == EventKind::Read;
        if (mem && e.var.empty()) r.add("field", "memory event without variable", {id});
        if (!mem && !e.var.empty()) r.add("field", "variable on non-memory event", {id});
        if (e.kind == EventKind::Post && (e.receiver < 0 || e.receiver >= nh))
            r.add("field", "post without valid receiver", {id});
        if (e.kind != EventKind::Post && e.receiver >= 0) r.add("field", "receiver on non-post event", {id});
        if (e.kind != EventKind::Write && e.val != 0) r.add("field", "value on non-write event", {id});
    }
    if (!rep.ok()) return rep;

    std::vector<int> rf_in(n, 0), pb_in(n, 0), pb_out(n, 0);
    for (const Edge& ed : t.edges()) {
        if (ed.src < 0 || ed.dst < 0 || ed.src >= static_cast<EventId>(n) || ed.dst >= static_cast<EventId>(n)) {
            r.add("dangling-edge", std::string(to_string(ed.rel)) + " edge with dangling endpoint");
            continue;
        }
        const Event& a = t.event(ed.src);
        const Event& b = t.event(ed.dst);
        bool typed = true;
        switch (ed.rel) {
            case Rel::po: typed = a.handler == b.handler && ed.src != ed.dst; break;
            case Rel::rf:
                typed = a.kind == EventKind::Write && b.kind == EventKind::Read && a.var == b.var;
                if (typed) ++rf_in[ed.dst];
                break;
            case Rel::co: typed = a.kind == EventKind::Write && b.kind == EventKind::Write && a.var == b.var; break;
            case Rel::pb:
                typed = a.kind == EventKind::Post && b.kind == EventKind::Get && a.receiver == b.handler;
                if (typed) {
                    ++pb_out[ed.src];
                    ++pb_in[ed.dst];
                }
                break;
            case Rel::mo: typed = a.kind == EventKind::Post && b.kind == EventKind::Post && a.receiver == b.receiver; break;
            case Rel::eo: typed = a.kind == EventKind::Get && b.kind == EventKind::Get && a.handler == b.handler; break;
        }
        if (!typed) r.add("edge-type", std::string(to_string(ed.rel)) + " edge between incompatible events", {ed.src, ed.dst});
    }

    for (std::size_t i = 0; i < n; ++i) {
        EventId id = static_cast<EventId>(i);
        const Event& e = t.event(i);
        if (e.kind == EventKind::Read) {
            if (rf_in[i] > 1) r.add("rf-not-functional", "rf not functional: read has several writers", {id});
            if (rf_in[i] == 0) r.add("rf-missing", "read without rf source", {id});
        }
        if (e.kind == EventKind::Get) {
            if (pb_in[i] > 1) r.add("pb-not-functional", "get posted by several posts", {id});
            if (pb_in[i] == 0) r.add("pb-missing", "get without pb source", {id});
        }
        if (e.kind == EventKind::Post && pb_out[i] > 1) r.add("pb-not-injective", "pb not injective: post matched by several gets", {id});
    }

    // co: strict order, total per variable
    {
        std::map<std::string, std::vector<EventId>> writes;
        for (std::size_t i = 0; i < n; ++i)
            if (t.event(i).kind == EventKind::Write) writes[t.event(i).var].push_back(static_cast<EventId>(i));
        std::vector<std::vector<EventId>> groups;
        if (opt.require_co)
            for (auto& [v, ws] : writes) groups.push_back(ws);
        check_total_order(t, r, Rel::co, groups, "writes of one variable");
    }

    // po: messages
    {
        bool ok = true;
        for (auto [a, b] : t.pairs(Rel::po))
            if (t.event(a).handler != t.event(b).handler) ok = false;
        PoInfo po = po_info(t, {});
        if (po.cyclic) {
            r.add("po-cyclic", "po is cyclic");
            ok = false;
        }
        if (ok) {
            std::map<EventId, std::vector<EventId>> groups;
            std::vector<std::vector<EventId>> initial(nh);
            for (std::size_t i = 0; i < n; ++i) {
                EventId id = static_cast<EventId>(i);
                const auto& anc = po.get_anc[i];
                if (t.event(i).kind == EventKind::Get) {
                    if (!anc.empty()) r.add("get-after-get", "get is po-after another get", {anc.front(), id});
                    continue;
                }
                if (anc.size() > 1) {
                    r.add("multiple-get-ancestors", "event has several get po-ancestors", {anc[0], anc[1], id});
                    continue;
                }
                if (anc.empty())
                    initial[t.event(i).handler].push_back(id);
                else
                    groups[anc[0]].push_back(id);
            }
            for (auto& [g, evs] : groups)
                for (std::size_t i = 0; i < evs.size(); ++i)
                    for (std::size_t j = i + 1; j < evs.size(); ++j)
                        if (!po.closure.test(evs[i], evs[j]) && !po.closure.test(evs[j], evs[i]))
                            r.add("message-not-total", "po not total within a message", {g, evs[i], evs[j]});
            bool init_total = true;
            for (auto& evs : initial)
                for (std::size_t i = 0; i < evs.size(); ++i)
                    for (std::size_t j = i + 1; j < evs.size(); ++j)
                        if (!po.closure.test(evs[i], evs[j]) && !po.closure.test(evs[j], evs[i])) {
                            r.add("initial-not-total", "po not total within an initial message", {evs[i], evs[j]});
                            init_total = false;
                        }
            if (init_total) {
                auto missing = missing_initial_edges(t, po);
                if (opt.strict)
                    for (auto [a, g] : missing)
                        r.add("initial-after-get", "initial message not po-before a get", {a, g});
                else
                    rep.repaired = std::move(missing);
            }
        }
    }

    if (mode == Mode::Partial) {
        for (Rel rel : {Rel::mo, Rel::eo})
            if (t.has_rel(rel))
                r.add(std::string(to_string(rel)) + "-in-partial",
                      std::string(to_string(rel)) + " edges present in a partial trace");
    } else {
        std::vector<std::vector<EventId>> posts(nh), gets(nh);
        for (std::size_t i = 0; i < n; ++i) {
            const Event& e = t.event(i);
            if (e.kind == EventKind::Post) posts[e.receiver].push_back(static_cast<EventId>(i));
            if (e.kind == EventKind::Get) gets[e.handler].push_back(static_cast<EventId>(i));
        }
        check_total_order(t, r, Rel::mo, posts, "posts to one handler");
        check_total_order(t, r, Rel::eo, gets, "gets of one handler");
    }
    return rep;
}

// ---- message structure ----

BitMatrix po_closure(const TraceGraph& t) {
    PoInfo po = po_info(t, {});
    auto missing = missing_initial_edges(t, po);
    if (missing.empty()) return std::move(po.closure);
    return po_info(t, missing).closure;
}

MessageStructure derive_messages(const TraceGraph& t) {
    const std::size_t n = t.size();
    const std::size_t nh = t.handlers().size();
    PoInfo po = po_info(t, {});
    if (po.cyclic) throw TraceError("po is cyclic");
    auto missing = missing_initial_edges(t, po);
    if (!missing.empty()) po = po_info(t, missing);

    MessageStructure ms;
    ms.message_of.assign(n, -1);
    ms.post_of_get.assign(n, -1);
    ms.get_of_post.assign(n, -1);
    ms.initial.assign(nh, -1);
    ms.posted.assign(nh, {});
    for (std::size_t h = 0; h < nh; ++h) {
        ms.initial[h] = static_cast<int>(ms.messages.size());
        ms.messages.push_back({static_cast<int>(h), -1, {}});
    }
    std::vector<int> msg_of_get(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const Event& e = t.event(i);
        if (e.kind != EventKind::Get) continue;
        if (!po.get_anc[i].empty()) throw TraceError("get '" + e.id + "' is po-after another get");
        msg_of_get[i] = static_cast<int>(ms.messages.size());
        ms.posted[e.handler].push_back(msg_of_get[i]);
        ms.messages.push_back({e.handler, static_cast<EventId>(i), {static_cast<EventId>(i)}});
        ms.message_of[i] = msg_of_get[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Event& e = t.event(i);
        if (e.kind == EventKind::Get) continue;
        const auto& anc = po.get_anc[i];
        if (anc.size() > 1) throw TraceError("event '" + e.id + "' has several get po-ancestors");
        int m = anc.empty() ? ms.initial[e.handler] : msg_of_get[anc[0]];
        ms.message_of[i] = m;
        ms.messages[m].events.push_back(static_cast<EventId>(i));
    }
    for (Message& m : ms.messages) {
        auto& evs = m.events;
        for (std::size_t i = 0; i < evs.size(); ++i)
            for (std::size_t j = i + 1; j < evs.size(); ++j)
                if (!po.closure.test(evs[i], evs[j]) && !po.closure.test(evs[j], evs[i]))
                    throw TraceError("message events '" + t.event(evs[i]).id + "' and '" + t.event(evs[j]).id +
                                     "' are not po-ordered");
        std::sort(evs.begin(), evs.end(), [&](EventId a, EventId b) { return po.closure.test(a, b); });
    }
    for (auto [p, g] : t.pairs(Rel::pb)) {
        ms.post_of_get[g] = p;
        ms.get_of_post[p] = g;
    }
    return ms;
}

// ---- derived relations ----

namespace {

BitMatrix closure_of_pairs(std::size_t n, const std::vector<std::pair<EventId, EventId>>& pairs) {
    Adjacency g(n);
    for (auto [a, b] : pairs) g[a].push_back(b);
    return closure_of(g);
}

BitMatrix closure_of_set(std::size_t n, const EdgeSet& s) {
    Adjacency g(n);
    for (auto [a, b] : s) g[a].push_back(b);
    return closure_of(g);
}

}  // namespace

EdgeSet derived_fr(const TraceGraph& t) {
    const std::size_t n = t.size();
    BitMatrix co = closure_of_pairs(n, t.pairs(Rel::co));
    EdgeSet fr;
    for (auto [w, r] : t.pairs(Rel::rf))
        for (std::size_t w2 = 0; w2 < n; ++w2)
            if (co.test(w, w2)) fr.emplace(r, static_cast<EventId>(w2));
    return fr;
}

EdgeSet derived_qo(const TraceGraph& t, const EdgeSet& mo) {
    std::map<EventId, std::vector<EventId>> gets_of;
    for (auto [p, g] : t.pairs(Rel::pb)) gets_of[p].push_back(g);
    EdgeSet qo;
    for (auto [p1, p2] : mo) {
        auto a = gets_of.find(p1);
        auto b = gets_of.find(p2);
        if (a == gets_of.end() || b == gets_of.end()) continue;
        for (EventId g1 : a->second)
            for (EventId g2 : b->second) qo.emplace(g1, g2);
    }
    return qo;
}

EdgeSet derived_eo_dagger(const TraceGraph& t, const EdgeSet& eo) {
    const std::size_t n = t.size();
    BitMatrix po = po_closure(t);
    auto tail = [&](EventId g) {
        std::vector<EventId> out{g};
        for (std::size_t e = 0; e < n; ++e)
            if (po.test(g, e)) out.push_back(static_cast<EventId>(e));
        return out;
    };
    EdgeSet out;
    for (auto [g1, g2] : eo) {
        auto a = tail(g1);
        auto b = tail(g2);
        for (EventId x : a)
            for (EventId y : b) out.emplace(x, y);
    }
    return out;
}

// ---- happens-before ----

HappensBefore::HappensBefore(const TraceGraph& t)
    : n_(t.size()), po_(po_closure(t)), kind_(t.size()), post_of_get_(t.size(), -1), base_(t.size()) {
    for (std::size_t i = 0; i < n_; ++i) kind_[i] = static_cast<int>(t.event(i).kind);
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
            if (po_.test(a, b)) base_[a].push_back(static_cast<int>(b));
    for (const Edge& e : t.edges())
        if (e.rel == Rel::rf || e.rel == Rel::co || e.rel == Rel::pb) base_[e.src].push_back(e.dst);
    for (auto [r, w] : derived_fr(t)) base_[r].push_back(w);
    for (auto [p, g] : t.pairs(Rel::pb)) post_of_get_[g] = p;
    dedupe(base_);
    tail_.resize(n_);
    for (std::size_t a = 0; a < n_; ++a) {
        tail_[a].push_back(static_cast<int>(a));
        for (std::size_t b = 0; b < n_; ++b)
            if (po_.test(a, b)) tail_[a].push_back(static_cast<int>(b));
    }
}

Adjacency HappensBefore::relation(const EdgeSet& mo, const EdgeSet& eo) const {
    Adjacency g = base_;
    BitMatrix mo_c = closure_of_set(n_, mo);
    BitMatrix eo_c = closure_of_set(n_, eo);
    std::vector<EventId> get_of_post(n_, -1);
    for (std::size_t g2 = 0; g2 < n_; ++g2)
        if (post_of_get_[g2] >= 0) get_of_post[post_of_get_[g2]] = static_cast<EventId>(g2);
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b) {
            if (mo_c.test(a, b)) {
                g[a].push_back(static_cast<int>(b));
                if (get_of_post[a] >= 0 && get_of_post[b] >= 0) g[get_of_post[a]].push_back(get_of_post[b]);
            }
            if (eo_c.test(a, b))
                for (int x : tail_[a])
                    for (int y : tail_[b]) g[x].push_back(y);
        }
    dedupe(g);
    return g;
}

HbResult HappensBefore::check(const EdgeSet& mo, const EdgeSet& eo) const {
    Adjacency g = relation(mo, eo);
    HbResult res;
    if (auto order = topo_order(g)) {
        res.linearization = std::move(*order);
        return res;
    }
    res.acyclic = false;
    res.cycle = shortest_cycle(g);
    return res;
}

HbResult hb_acyclic(const TraceGraph& t) {
    EdgeSet mo, eo;
    for (auto p : t.pairs(Rel::mo)) mo.insert(p);
    for (auto p : t.pairs(Rel::eo)) eo.insert(p);
    return HappensBefore(t).check(mo, eo);
}

// ---- witnesses ----

TraceGraph with_witness(const TraceGraph& t, const Witness& w) {
    TraceGraph out = t;
    out.remove_rel(Rel::mo);
    out.remove_rel(Rel::eo);
    for (const auto& [h, seq] : w.mo) out.add_chain(Rel::mo, seq);
    for (const auto& [h, seq] : w.eo) out.add_chain(Rel::eo, seq);
    return out;
}

Witness witness_from_order(const TraceGraph& t, const std::vector<EventId>& order) {
    Witness w;
    w.linearization = order;
    for (EventId e : order) {
        const Event& ev = t.event(e);
        if (ev.kind == EventKind::Post) w.mo[ev.receiver].push_back(e);
        if (ev.kind == EventKind::Get) w.eo[ev.handler].push_back(e);
    }
    return w;
}

std::string check_witness(const TraceGraph& t, const Witness& w) {
    const std::size_t n = t.size();
    for (const auto& [h, seq] : w.mo)
        for (EventId e : seq)
            if (e < 0 || e >= static_cast<EventId>(n) || t.event(e).kind != EventKind::Post || t.event(e).receiver != h)
                return "mo lists an event that is not a post to its receiver";
    for (const auto& [h, seq] : w.eo)
        for (EventId e : seq)
            if (e < 0 || e >= static_cast<EventId>(n) || t.event(e).kind != EventKind::Get || t.event(e).handler != h)
                return "eo lists an event that is not a get of its handler";
    TraceGraph full = with_witness(t, w);
    ValidationReport rep = validate(full, Mode::Full);
    if (!rep.ok()) return "extended trace invalid: " + rep.violations.front().message;
    EdgeSet mo, eo;
    for (auto p : full.pairs(Rel::mo)) mo.insert(p);
    for (auto p : full.pairs(Rel::eo)) eo.insert(p);
    HappensBefore hb(full);
    Adjacency g = hb.relation(mo, eo);
    if (!is_acyclic(g)) return "extended trace has an hb cycle";
    if (w.linearization.size() != n) return "linearization does not cover all events";
    std::vector<int> pos(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        EventId e = w.linearization[i];
        if (e < 0 || e >= static_cast<EventId>(n) || pos[e] >= 0) return "linearization is not a permutation";
        pos[e] = static_cast<int>(i);
    }
    for (std::size_t a = 0; a < n; ++a)
        for (int b : g[a])
            if (pos[a] >= pos[b]) {
                std::ostringstream os;
                os << "linearization violates hb edge " << t.event(a).id << " -> " << t.event(b).id;
                return os.str();
            }
    return {};
}

}  // namespace edcheck
