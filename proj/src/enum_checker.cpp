#include "edcheck/enum_checker.hpp"

#include <functional>

namespace edcheck {

namespace {

struct PostPair {
    EventId p, q;
};

class Saturator {
public:
    Saturator(const StaticGraph& s, BitMatrix& r) : s_(s), r_(r) {}

    // Edges implied by ordering p before q in the mailbox.
    int implied(EventId p, EventId q, std::pair<EventId, EventId> out[2]) const {
        out[0] = {p, q};
        EventId gp = s_.ms.get_of_post[p], gq = s_.ms.get_of_post[q];
        if (gp < 0 || gq < 0) return 1;
        out[1] = {s_.ms.messages[s_.ms.message_of[gp]].events.back(), gq};
        return 2;
    }

    bool reach(EventId a, EventId b) const { return a == b || r_.test(a, b); }

    bool cyclic(EventId p, EventId q) const {
        std::pair<EventId, EventId> e[2];
        int k = implied(p, q, e);
        for (int i = 0; i < k; ++i)
            if (reach(e[i].second, e[i].first)) return true;
        return k == 2 && reach(e[0].second, e[1].first) && reach(e[1].second, e[0].first);
    }

    void commit(EventId p, EventId q, SaturationState& st) {
        std::pair<EventId, EventId> e[2];
        int k = implied(p, q, e);
        for (int i = 0; i < k; ++i) r_.add_closed(e[i].first, e[i].second);
        st.committed_mo.emplace(p, q);
        EventId gp = s_.ms.get_of_post[p], gq = s_.ms.get_of_post[q];
        if (gp >= 0 && gq >= 0) st.committed_eo.emplace(gp, gq);
    }

private:
    const StaticGraph& s_;
    BitMatrix& r_;
};

SaturationResult run_saturation(const StaticGraph& s, bool propagate) {
    SaturationResult out;
    out.state.hb = closure_of(s.edges);
    if (out.state.hb.has_diagonal()) {
        out.inconsistent = true;
        out.cycle = shortest_cycle(s.edges);
        out.detail = "cycle among the given relations";
        return out;
    }
    if (!propagate) return out;

    std::vector<PostPair> open;
    for (const auto& posts : s.posts_to)
        for (std::size_t i = 0; i < posts.size(); ++i)
            for (std::size_t j = i + 1; j < posts.size(); ++j) open.push_back({posts[i], posts[j]});

    Saturator sat(s, out.state.hb);
    const TraceGraph& t = *s.trace;
    bool changed = true;
    while (changed) {
        changed = false;
        ++out.state.rounds;
        std::vector<PostPair> still;
        for (const PostPair& pp : open) {
            bool fwd = sat.cyclic(pp.p, pp.q), bwd = sat.cyclic(pp.q, pp.p);
            if (fwd && bwd) {
                out.inconsistent = true;
                out.detail = "posts " + t.event(pp.p).id + " and " + t.event(pp.q).id + " to " +
                             t.handlers()[t.event(pp.p).receiver] + " cannot be ordered either way";
                return out;
            }
            if (fwd || bwd) {
                if (fwd) sat.commit(pp.q, pp.p, out.state);
                else sat.commit(pp.p, pp.q, out.state);
                changed = true;
            } else {
                still.push_back(pp);
            }
        }
        open = std::move(still);
    }
    return out;
}

}  // namespace

SaturationResult saturate(const TraceGraph& t) { return run_saturation(build_static(t), true); }

CheckResult check_enum(const TraceGraph& t, const EnumConfig& cfg) {
    CheckResult res;
    if (auto err = partial_trace_error(t)) {
        res.verdict = Verdict::Refused;
        res.detail = *err;
        return res;
    }
    const StaticGraph s = build_static(t);
    SaturationResult sat = run_saturation(s, cfg.saturate);
    if (sat.inconsistent) {
        res.verdict = Verdict::Inconsistent;
        res.cycle = sat.cycle;
        res.detail = sat.detail;
        return res;
    }
    const BitMatrix& r = sat.state.hb;

    std::vector<int> receivers;
    for (std::size_t h = 0; h < s.posts_to.size(); ++h)
        if (!s.posts_to[h].empty()) receivers.push_back(static_cast<int>(h));

    std::vector<std::vector<EventId>> order(receivers.size());
    std::vector<char> placed(t.size(), 0);
    Deadline deadline(cfg.timeout);
    bool done = false;
    Verdict stop = Verdict::Inconsistent;

    auto full_check = [&]() {
        if ((cfg.budget && res.work >= cfg.budget) || ((res.work & 255) == 0 && deadline.expired())) {
            stop = Verdict::Timeout;
            done = true;
            return;
        }
        ++res.work;
        Adjacency g = s.edges;
        Witness w;
        for (std::size_t i = 0; i < receivers.size(); ++i) {
            const auto& seq = order[i];
            EventId prev_last = -1;
            std::vector<EventId> gets;
            for (std::size_t k = 0; k < seq.size(); ++k) {
                if (k > 0) g[seq[k - 1]].push_back(seq[k]);
                EventId get = s.ms.get_of_post[seq[k]];
                if (get < 0) continue;
                if (prev_last >= 0) g[prev_last].push_back(get);
                prev_last = s.ms.messages[s.ms.message_of[get]].events.back();
                gets.push_back(get);
            }
            w.mo[receivers[i]] = seq;
            if (!gets.empty()) w.eo[receivers[i]] = std::move(gets);
        }
        auto lin = topo_order(g);
        if (!lin) return;
        w.linearization = std::move(*lin);
        res.witness = std::move(w);
        stop = Verdict::Consistent;
        done = true;
    };

    std::function<void(std::size_t)> place = [&](std::size_t i) {
        if (i == receivers.size()) {
            full_check();
            return;
        }
        const auto& posts = s.posts_to[receivers[i]];
        if (order[i].size() == posts.size()) {
            place(i + 1);
            return;
        }
        for (EventId q : posts) {
            if (placed[q]) continue;
            bool ready = true;
            for (EventId p : posts)
                if (!placed[p] && p != q && r.test(p, q)) {
                    ready = false;
                    break;
                }
            if (!ready) continue;
            placed[q] = 1;
            order[i].push_back(q);
            place(i);
            order[i].pop_back();
            placed[q] = 0;
            if (done) return;
        }
    };
    place(0);

    res.verdict = stop;
    if (stop == Verdict::Timeout) res.detail = "enumeration budget exhausted";
    return res;
}

}  // namespace edcheck
