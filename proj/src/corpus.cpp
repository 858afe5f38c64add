#include "edcheck/corpus.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace edcheck {

namespace {

struct SimEvent {
    int handler;
    EventKind kind;
    int var = -1;
    int val = 0;
    int receiver = -1;
};

struct SimMessage {
    int handler;
    int get = -1;
    int post = -1;
    std::vector<int> events;
};

}  // namespace

TraceGraph random_partial_trace(std::mt19937_64& rng, const CorpusParams& p) {
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto chance = [&](double q) { return std::uniform_real_distribution<double>(0, 1)(rng) < q; };

    const int nh = uniform(p.min_handlers, p.max_handlers);
    std::vector<SimEvent> ev;
    std::vector<SimMessage> msgs;
    std::vector<int> running(nh);
    std::vector<std::deque<int>> mailbox(nh);
    for (int h = 0; h < nh; ++h) {
        msgs.push_back({h, -1, -1, {}});
        running[h] = h;
    }
    std::vector<std::vector<int>> writes(p.vars);   // per variable, execution order
    std::vector<int> last_write(p.vars, -1);
    std::vector<std::pair<int, int>> rf;

    while (static_cast<int>(ev.size()) < p.max_events) {
        std::vector<int> enabled;
        for (int h = 0; h < nh; ++h)
            if (running[h] >= 0 || !mailbox[h].empty()) enabled.push_back(h);
        if (enabled.empty()) break;
        const int h = enabled[uniform(0, static_cast<int>(enabled.size()) - 1)];
        const int id = static_cast<int>(ev.size());
        if (running[h] < 0) {
            int m = mailbox[h].front();
            mailbox[h].pop_front();
            running[h] = m;
            msgs[m].get = id;
            msgs[m].events.push_back(id);
            ev.push_back({h, EventKind::Get});
            continue;
        }
        const int cur = running[h];
        const bool may_post = p.nesting || msgs[cur].get < 0;
        double r = std::uniform_real_distribution<double>(0, 1)(rng);
        if (r < 0.2) {
            running[h] = -1;
            continue;
        }
        SimEvent e{h, EventKind::Write};
        if (r < 0.5 && may_post) {
            e.kind = EventKind::Post;
            e.receiver = uniform(0, nh - 1);
            int m = static_cast<int>(msgs.size());
            msgs.push_back({e.receiver, -1, id, {}});
            mailbox[e.receiver].push_back(m);
        } else {
            e.var = uniform(0, p.vars - 1);
            if (r < 0.75 && last_write[e.var] >= 0) {
                e.kind = EventKind::Read;
                rf.emplace_back(last_write[e.var], id);
            } else {
                e.val = id + 1;
                writes[e.var].push_back(id);
                last_write[e.var] = id;
            }
        }
        msgs[cur].events.push_back(id);
        ev.push_back(e);
    }

    if (chance(p.perturb)) {
        if (chance(0.5) && !rf.empty()) {
            auto& [w, rd] = rf[uniform(0, static_cast<int>(rf.size()) - 1)];
            const auto& ws = writes[ev[rd].var];
            w = ws[uniform(0, static_cast<int>(ws.size()) - 1)];
        } else {
            std::vector<int> candidates;
            for (int v = 0; v < p.vars; ++v)
                if (writes[v].size() >= 2) candidates.push_back(v);
            if (!candidates.empty()) {
                auto& ws = writes[candidates[uniform(0, static_cast<int>(candidates.size()) - 1)]];
                int k = uniform(0, static_cast<int>(ws.size()) - 2);
                std::swap(ws[k], ws[k + 1]);
            }
        }
    }

    std::vector<int> file(ev.size());
    std::iota(file.begin(), file.end(), 0);
    if (p.shuffle_file_order) std::shuffle(file.begin(), file.end(), rng);

    TraceGraph t;
    for (int h = 0; h < nh; ++h) t.add_handler("h" + std::to_string(h));
    std::vector<EventId> at(ev.size());
    for (int i : file) {
        const SimEvent& e = ev[i];
        std::string h = "h" + std::to_string(e.handler);
        std::string id = "e" + std::to_string(i);
        switch (e.kind) {
            case EventKind::Write: at[i] = t.add_write(h, id, "x" + std::to_string(e.var), e.val); break;
            case EventKind::Read: at[i] = t.add_read(h, id, "x" + std::to_string(e.var)); break;
            case EventKind::Post: at[i] = t.add_post(h, id, "h" + std::to_string(e.receiver)); break;
            case EventKind::Get: at[i] = t.add_get(h, id); break;
        }
    }
    for (const SimMessage& m : msgs) {
        for (std::size_t k = 1; k < m.events.size(); ++k) t.add_edge(Rel::po, at[m.events[k - 1]], at[m.events[k]]);
        if (m.post >= 0 && m.get >= 0) t.add_edge(Rel::pb, at[m.post], at[m.get]);
        if (m.get >= 0 && !msgs[m.handler].events.empty())
            t.add_edge(Rel::po, at[msgs[m.handler].events.back()], at[m.get]);
    }
    for (auto [w, rd] : rf) t.add_edge(Rel::rf, at[w], at[rd]);
    for (const auto& ws : writes)
        for (std::size_t k = 1; k < ws.size(); ++k) t.add_edge(Rel::co, at[ws[k - 1]], at[ws[k]]);
    return t;
}

std::vector<TraceGraph> small_corpus(std::uint64_t seed, int count, int max_events) {
    std::mt19937_64 rng(seed);
    std::vector<TraceGraph> out;
    CorpusParams p;
    p.max_events = max_events;
    for (int i = 0; i < count; ++i) {
        p.nesting = i % 2 == 0;
        out.push_back(random_partial_trace(rng, p));
    }
    return out;
}

TraceGraph lockstep_trace(int rounds) {
    TraceGraph t;
    for (const char* h : {"A", "B", "C"}) t.add_handler(h);
    std::vector<EventId> a, b;
    std::vector<EventId> c{t.add_write("C", "c_init", "z")};
    EventId last_c = -1;
    for (int i = 1; i <= rounds; ++i) {
        const std::string n = std::to_string(i);
        if (last_c >= 0) {
            EventId r = t.add_read("A", "a" + n + "_rc", "c" + std::to_string(i - 1));
            t.add_edge(Rel::rf, last_c, r);
            a.push_back(r);
        }
        EventId wa = t.add_write("A", "a" + n + "_w", "a" + n, i);
        a.push_back(wa);
        EventId pa = t.add_post("A", "a" + n + "_post", "C");
        a.push_back(pa);
        EventId ra = t.add_read("B", "b" + n + "_ra", "a" + n);
        t.add_edge(Rel::rf, wa, ra);
        b.push_back(ra);
        EventId wb = t.add_write("B", "b" + n + "_w", "b" + n, i);
        b.push_back(wb);
        EventId pb = t.add_post("B", "b" + n + "_post", "C");
        b.push_back(pb);
        EventId ga = t.add_get("C", "c" + n + "_get_a");
        EventId rb = t.add_read("C", "c" + n + "_rb", "b" + n);
        t.add_edge(Rel::pb, pa, ga);
        t.add_edge(Rel::po, ga, rb);
        t.add_edge(Rel::rf, wb, rb);
        EventId gb = t.add_get("C", "c" + n + "_get_b");
        last_c = t.add_write("C", "c" + n + "_w", "c" + n, i);
        t.add_edge(Rel::pb, pb, gb);
        t.add_edge(Rel::po, gb, last_c);
    }
    t.add_chain(Rel::po, a);
    t.add_chain(Rel::po, b);
    return t;
}

bool has_nested_posts(const TraceGraph& t) {
    MessageStructure ms = derive_messages(t);
    for (std::size_t e = 0; e < t.size(); ++e)
        if (t.event(e).kind == EventKind::Post && !ms.messages[ms.message_of[e]].initial()) return true;
    return false;
}

}  // namespace edcheck
