#include "edcheck/nonest_checker.hpp"

#include <algorithm>
#include <unordered_set>

namespace edcheck {

NestingReport assert_no_nesting(const TraceGraph& t) {
    NestingReport rep;
    MessageStructure ms = derive_messages(t);
    for (std::size_t e = 0; e < t.size(); ++e)
        if (t.event(e).kind == EventKind::Post && !ms.messages[ms.message_of[e]].initial())
            rep.nested_posts.push_back(static_cast<EventId>(e));
    return rep;
}

namespace {

struct Config {
    std::vector<int> init_pos;                  // executed prefix of each initial message
    std::vector<int> running;                   // posted message in progress, -1 if none
    std::vector<int> offset;                    // executed prefix of the running message
    std::vector<int> consumed;                  // [receiver * k + sender]
    std::vector<std::vector<int>> mailbox;      // per receiver: senders of waiting posts, oldest first
    int executed = 0;

    std::string key() const {
        std::string s;
        auto put = [&](int v) {
            s.push_back(static_cast<char>(v & 0xff));
            s.push_back(static_cast<char>((v >> 8) & 0xff));
        };
        for (const auto* v : {&init_pos, &running, &offset, &consumed})
            for (int x : *v) put(x);
        for (const auto& q : mailbox) {
            for (int x : q) s.push_back(static_cast<char>(x));
            s.push_back('\xff');
        }
        return s;
    }
};

struct Node {
    Config c;
    int parent;
    EventId event;
};

class Search {
public:
    explicit Search(const TraceGraph& t) : t_(t), s_(build_static(t)), k_(static_cast<int>(t.handlers().size())) {
        const auto& ms = s_.ms;
        const std::size_t n = t.size();
        preds_.assign(n, {});
        for (std::size_t a = 0; a < n; ++a)
            for (int b : s_.edges[a]) preds_[b].push_back(static_cast<EventId>(a));
        pos_in_msg_.assign(n, 0);
        for (const Message& m : ms.messages)
            for (std::size_t i = 0; i < m.events.size(); ++i) pos_in_msg_[m.events[i]] = static_cast<int>(i);
        stream_.assign(static_cast<std::size_t>(k_ * k_), {});
        msg_sender_.assign(ms.messages.size(), -1);
        msg_slot_.assign(ms.messages.size(), -1);
        for (int i = 0; i < k_; ++i)
            for (EventId e : ms.messages[ms.initial[i]].events) {
                EventId g = ms.get_of_post[e];
                if (t.event(e).kind != EventKind::Post || g < 0) continue;
                int m = ms.message_of[g];
                auto& st = stream_[t.event(e).receiver * k_ + i];
                msg_sender_[m] = i;
                msg_slot_[m] = static_cast<int>(st.size());
                st.push_back(m);
            }
    }

    Config initial() const {
        Config c;
        c.init_pos.assign(k_, 0);
        c.running.assign(k_, -1);
        c.offset.assign(k_, 0);
        c.consumed.assign(static_cast<std::size_t>(k_ * k_), 0);
        c.mailbox.assign(k_, {});
        return c;
    }

    bool executed(const Config& c, EventId e) const {
        const auto& ms = s_.ms;
        int m = ms.message_of[e];
        const Message& msg = ms.messages[m];
        if (msg.initial()) return pos_in_msg_[e] < c.init_pos[msg.handler];
        int j = msg.handler;
        if (c.running[j] == m) return pos_in_msg_[e] < c.offset[j];
        return msg_slot_[m] < c.consumed[j * k_ + msg_sender_[m]];
    }

    bool ready(const Config& c, EventId e) const {
        for (EventId p : preds_[e])
            if (!executed(c, p)) return false;
        return true;
    }

    bool init_done(const Config& c, int h) const {
        return c.init_pos[h] == static_cast<int>(s_.ms.messages[s_.ms.initial[h]].events.size());
    }

    // Successor configurations, each with the event it executes.
    template <class F>
    void expand(const Config& c, F&& emit) const {
        const auto& ms = s_.ms;
        for (int h = 0; h < k_; ++h) {
            if (!init_done(c, h)) {
                EventId e = ms.messages[ms.initial[h]].events[c.init_pos[h]];
                if (!ready(c, e)) continue;
                Config d = c;
                ++d.init_pos[h];
                ++d.executed;
                const Event& ev = t_.event(e);
                if (ev.kind == EventKind::Post && ms.get_of_post[e] >= 0) d.mailbox[ev.receiver].push_back(h);
                emit(std::move(d), e);
            } else if (c.running[h] >= 0) {
                const Message& m = ms.messages[c.running[h]];
                EventId e = m.events[c.offset[h]];
                if (!ready(c, e)) continue;
                Config d = c;
                ++d.executed;
                if (++d.offset[h] == static_cast<int>(m.events.size())) {
                    d.running[h] = -1;
                    d.offset[h] = 0;
                }
                emit(std::move(d), e);
            } else if (!c.mailbox[h].empty()) {
                int sender = c.mailbox[h].front();
                int slot = c.consumed[h * k_ + sender];
                int m = stream_[h * k_ + sender][slot];
                EventId g = ms.messages[m].get;
                if (!ready(c, g)) continue;
                Config d = c;
                d.mailbox[h].erase(d.mailbox[h].begin());
                ++d.consumed[h * k_ + sender];
                ++d.executed;
                if (ms.messages[m].events.size() > 1) {
                    d.running[h] = m;
                    d.offset[h] = 1;
                }
                emit(std::move(d), g);
            }
        }
    }

private:
    const TraceGraph& t_;
    StaticGraph s_;
    int k_;
    std::vector<std::vector<EventId>> preds_;
    std::vector<int> pos_in_msg_;
    std::vector<std::vector<int>> stream_;   // [receiver * k + sender] -> matched messages in post order
    std::vector<int> msg_sender_, msg_slot_;
};

}  // namespace

CheckResult check_nonest(const TraceGraph& t, const NonestConfig& cfg) {
    CheckResult res;
    if (auto err = partial_trace_error(t)) {
        res.verdict = Verdict::Refused;
        res.detail = *err;
        return res;
    }
    NestingReport nest = assert_no_nesting(t);
    if (!nest.ok()) {
        res.verdict = Verdict::Refused;
        res.detail = "nested posting:";
        for (EventId e : nest.nested_posts) res.detail += " " + t.event(e).id;
        return res;
    }

    Search search(t);
    const int n = static_cast<int>(t.size());
    std::vector<Node> nodes;
    std::unordered_set<std::string> seen;
    Config start = search.initial();
    seen.insert(start.key());
    nodes.push_back({std::move(start), -1, -1});
    Deadline deadline(cfg.timeout);

    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if (nodes[head].c.executed == n) {
            std::vector<EventId> order;
            for (int i = static_cast<int>(head); nodes[i].parent >= 0; i = nodes[i].parent) order.push_back(nodes[i].event);
            std::reverse(order.begin(), order.end());
            Witness w = witness_from_order(t, order);
            std::string bad = check_witness(t, w);
            res.work = nodes.size();
            if (!bad.empty()) {
                res.verdict = Verdict::BackendError;
                res.detail = "search produced an invalid witness: " + bad;
                return res;
            }
            res.verdict = Verdict::Consistent;
            res.witness = std::move(w);
            return res;
        }
        if ((cfg.max_configurations && nodes.size() > cfg.max_configurations) || ((head & 1023) == 0 && deadline.expired())) {
            res.verdict = Verdict::Timeout;
            res.work = nodes.size();
            res.detail = "configuration limit reached";
            return res;
        }
        Config cur = nodes[head].c;
        search.expand(cur, [&](Config&& d, EventId e) {
            if (seen.insert(d.key()).second) nodes.push_back({std::move(d), static_cast<int>(head), e});
        });
    }
    res.verdict = Verdict::Inconsistent;
    res.work = nodes.size();
    return res;
}

}  // namespace edcheck
