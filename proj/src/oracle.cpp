#include "edcheck/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace edcheck {

namespace {

struct Slots {
    std::vector<std::vector<EventId>> co;   // variables whose co is enumerated
    std::vector<int> mo_owner;
    std::vector<std::vector<EventId>> mo;   // posts per receiver
    std::vector<int> eo_owner;
    std::vector<std::vector<EventId>> eo;   // gets per handler, strict mode only
};

Slots make_slots(const TraceGraph& t, const OracleConfig& cfg) {
    Slots s;
    const std::size_t nh = t.handlers().size();
    std::vector<std::vector<EventId>> posts(nh), gets(nh);
    std::map<std::string, std::vector<EventId>> writes;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Event& e = t.event(i);
        EventId id = static_cast<EventId>(i);
        if (e.kind == EventKind::Post) posts[e.receiver].push_back(id);
        if (e.kind == EventKind::Get) gets[e.handler].push_back(id);
        if (e.kind == EventKind::Write) writes[e.var].push_back(id);
    }
    if (cfg.infer_co) {
        Adjacency g(t.size());
        for (auto [a, b] : t.pairs(Rel::co)) g[a].push_back(b);
        BitMatrix co = closure_of(g);
        for (auto& [v, ws] : writes) {
            bool total = true;
            for (std::size_t i = 0; i < ws.size(); ++i)
                for (std::size_t j = i + 1; j < ws.size(); ++j)
                    if (!co.test(ws[i], ws[j]) && !co.test(ws[j], ws[i])) total = false;
            if (!total) s.co.push_back(ws);
        }
    }
    for (std::size_t h = 0; h < nh; ++h) {
        if (!posts[h].empty()) {
            s.mo_owner.push_back(static_cast<int>(h));
            s.mo.push_back(posts[h]);
        }
        if (cfg.strict_eo && !gets[h].empty()) {
            s.eo_owner.push_back(static_cast<int>(h));
            s.eo.push_back(gets[h]);
        }
    }
    return s;
}

std::optional<std::uint64_t> count(const Slots& s) {
    std::uint64_t total = 1;
    auto mul = [&](std::uint64_t k) {
        if (total > UINT64_MAX / k) return false;
        total *= k;
        return true;
    };
    for (const auto* group : {&s.co, &s.mo, &s.eo})
        for (const auto& slot : *group)
            for (std::uint64_t k = 2; k <= slot.size(); ++k)
                if (!mul(k)) return std::nullopt;
    return total;
}

void all_pairs(const std::vector<EventId>& seq, EdgeSet& out) {
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j) out.emplace(seq[i], seq[j]);
}

OracleResult pruned_search(const TraceGraph& t, const OracleConfig& cfg) {
    OracleResult out;
    if (cfg.strict_eo || cfg.infer_co) {
        out.result.verdict = Verdict::Refused;
        out.result.detail = "pruned search supports derived eo with given co only";
        return out;
    }
    Slots slots = make_slots(t, cfg);
    std::vector<EventId> get_of_post(t.size(), -1);
    for (auto [p, g] : t.pairs(Rel::pb)) get_of_post[p] = g;
    HappensBefore hb(t);
    const std::size_t nr = slots.mo.size();
    std::vector<std::vector<EventId>> prefix(nr);
    std::vector<std::vector<char>> used(nr);
    for (std::size_t i = 0; i < nr; ++i) used[i].assign(slots.mo[i].size(), 0);
    bool stop = false, exhausted = false;

    // prefix order, then every placed post before every unplaced one
    auto edges = [&](EdgeSet& mo, EdgeSet& eo) {
        for (std::size_t i = 0; i < nr; ++i) {
            const auto& seq = prefix[i];
            for (std::size_t a = 0; a < seq.size(); ++a) {
                auto add = [&](EventId q) {
                    mo.emplace(seq[a], q);
                    if (get_of_post[seq[a]] >= 0 && get_of_post[q] >= 0) eo.emplace(get_of_post[seq[a]], get_of_post[q]);
                };
                for (std::size_t b = a + 1; b < seq.size(); ++b) add(seq[b]);
                for (std::size_t k = 0; k < slots.mo[i].size(); ++k)
                    if (!used[i][k]) add(slots.mo[i][k]);
            }
        }
    };

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (stop) return;
        if (++out.assignments > cfg.max_assignments) {
            stop = exhausted = true;
            return;
        }
        EdgeSet mo, eo;
        edges(mo, eo);
        HbResult r = hb.check(mo, eo);
        if (!r.acyclic) return;
        while (i < nr && prefix[i].size() == slots.mo[i].size()) ++i;
        if (i == nr) {
            Witness w;
            for (std::size_t k = 0; k < nr; ++k) {
                w.mo[slots.mo_owner[k]] = prefix[k];
                std::vector<EventId> gets;
                for (EventId p : prefix[k])
                    if (get_of_post[p] >= 0) gets.push_back(get_of_post[p]);
                if (!gets.empty()) w.eo[slots.mo_owner[k]] = gets;
            }
            w.linearization = std::move(r.linearization);
            out.witnesses.push_back(std::move(w));
            if (!cfg.all_witnesses) stop = true;
            return;
        }
        for (std::size_t k = 0; k < slots.mo[i].size() && !stop; ++k) {
            if (used[i][k]) continue;
            used[i][k] = 1;
            prefix[i].push_back(slots.mo[i][k]);
            rec(i);
            prefix[i].pop_back();
            used[i][k] = 0;
        }
    };
    rec(0);
    out.result.work = out.assignments;
    if (exhausted) {
        out.result.verdict = Verdict::Refused;
        out.result.detail = "pruned search exceeded " + std::to_string(cfg.max_assignments) + " prefixes";
        out.witnesses.clear();
    } else if (out.witnesses.empty()) {
        out.result.verdict = Verdict::Inconsistent;
    } else {
        out.result.verdict = Verdict::Consistent;
        out.result.witness = out.witnesses.front();
    }
    return out;
}

}  // namespace

std::optional<std::uint64_t> oracle_assignment_count(const TraceGraph& t, const OracleConfig& cfg) {
    return count(make_slots(t, cfg));
}

OracleResult check_oracle(const TraceGraph& t, const OracleConfig& cfg) {
    OracleResult out;
    ValidateOptions vopt;
    vopt.require_co = !cfg.infer_co;
    ValidationReport rep = validate(t, Mode::Partial, vopt);
    if (!rep.ok()) {
        out.result.verdict = Verdict::Refused;
        out.result.detail = "invalid trace: " + rep.violations.front().message;
        return out;
    }
    if (cfg.prune) return pruned_search(t, cfg);
    if (t.size() > cfg.max_events) {
        out.result.verdict = Verdict::Refused;
        out.result.detail = "trace has " + std::to_string(t.size()) + " events, limit is " + std::to_string(cfg.max_events);
        return out;
    }
    Slots slots = make_slots(t, cfg);
    auto predicted = count(slots);
    if (!predicted || *predicted > cfg.max_assignments) {
        out.result.verdict = Verdict::Refused;
        out.result.detail = "assignment space exceeds the limit of " + std::to_string(cfg.max_assignments);
        return out;
    }

    std::vector<EventId> get_of_post(t.size(), -1);
    for (auto [p, g] : t.pairs(Rel::pb)) get_of_post[p] = g;
    const auto given_co = t.pairs(Rel::co);

    std::vector<std::vector<EventId>> cur_co = slots.co, cur_mo = slots.mo, cur_eo = slots.eo;
    bool stop = false;
    TraceGraph with_co = t;
    std::optional<HappensBefore> hb;

    auto leaf = [&]() {
        ++out.assignments;
        EdgeSet mo, eo;
        Witness w;
        for (std::size_t i = 0; i < cur_mo.size(); ++i) {
            all_pairs(cur_mo[i], mo);
            w.mo[slots.mo_owner[i]] = cur_mo[i];
        }
        if (cfg.strict_eo) {
            for (std::size_t i = 0; i < cur_eo.size(); ++i) {
                all_pairs(cur_eo[i], eo);
                w.eo[slots.eo_owner[i]] = cur_eo[i];
            }
        } else {
            for (std::size_t i = 0; i < cur_mo.size(); ++i) {
                std::vector<EventId> gets;
                for (EventId p : cur_mo[i])
                    if (get_of_post[p] >= 0) gets.push_back(get_of_post[p]);
                all_pairs(gets, eo);
                if (!gets.empty()) w.eo[slots.mo_owner[i]] = gets;
            }
        }
        HbResult r = hb->check(mo, eo);
        if (!r.acyclic) return;
        w.linearization = std::move(r.linearization);
        out.witnesses.push_back(std::move(w));
        if (!cfg.all_witnesses) stop = true;
    };

    std::function<void(std::size_t)> order_rec = [&](std::size_t i) {
        const std::size_t nmo = cur_mo.size();
        if (i == nmo + cur_eo.size()) {
            leaf();
            return;
        }
        auto& slot = i < nmo ? cur_mo[i] : cur_eo[i - nmo];
        std::sort(slot.begin(), slot.end());
        do {
            order_rec(i + 1);
            if (stop) return;
        } while (std::next_permutation(slot.begin(), slot.end()));
    };

    std::function<void(std::size_t)> co_rec = [&](std::size_t i) {
        if (i == cur_co.size()) {
            std::vector<int> pos(t.size(), -1);
            for (const auto& seq : cur_co)
                for (std::size_t k = 0; k < seq.size(); ++k) pos[seq[k]] = static_cast<int>(k);
            for (auto [a, b] : given_co)
                if (pos[a] >= 0 && pos[b] >= 0 && pos[a] > pos[b]) return;
            with_co = t;
            for (const auto& seq : cur_co) with_co.add_chain(Rel::co, seq);
            hb.emplace(with_co);
            order_rec(0);
            return;
        }
        auto& slot = cur_co[i];
        std::sort(slot.begin(), slot.end());
        do {
            co_rec(i + 1);
            if (stop) return;
        } while (std::next_permutation(slot.begin(), slot.end()));
    };

    co_rec(0);
    out.result.work = out.assignments;
    if (out.witnesses.empty()) {
        out.result.verdict = Verdict::Inconsistent;
    } else {
        out.result.verdict = Verdict::Consistent;
        out.result.witness = out.witnesses.front();
    }
    return out;
}

}  // namespace edcheck
