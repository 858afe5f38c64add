#include "edcheck/smt_checker.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>

#include "edcheck/subprocess.hpp"

namespace edcheck {

std::string timestamp_symbol(const std::string& id, EventId index) {
    bool plain = !id.empty();
    bool quotable = true;
    for (char c : id) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
        plain = plain && ok;
        if (c == '|' || c == '\\') quotable = false;
    }
    if (plain) return "t_" + id;
    if (quotable) return "|t_" + id + "|";
    return "|#" + std::to_string(index) + "|";
}

SolverQuery encode(const TraceGraph& t, bool fifo) {
    SolverQuery q;
    for (std::size_t i = 0; i < t.size(); ++i) q.vars.push_back(timestamp_symbol(t.event(i).id, static_cast<EventId>(i)));

    ValidationReport rep = validate(t, Mode::Partial);
    for (const Edge& e : t.edges())
        if (e.rel == Rel::po || e.rel == Rel::rf || e.rel == Rel::co || e.rel == Rel::pb) q.hard_edges.emplace_back(e.src, e.dst);
    for (auto e : rep.repaired) q.hard_edges.push_back(e);
    for (auto e : derived_fr(t)) q.hard_edges.push_back(e);
    std::sort(q.hard_edges.begin(), q.hard_edges.end());
    q.hard_edges.erase(std::unique(q.hard_edges.begin(), q.hard_edges.end()), q.hard_edges.end());

    MessageStructure ms = derive_messages(t);
    const std::size_t nh = t.handlers().size();
    for (std::size_t h = 0; h < nh; ++h) {
        std::vector<int> msgs;
        if (!ms.messages[ms.initial[h]].events.empty()) msgs.push_back(ms.initial[h]);
        msgs.insert(msgs.end(), ms.posted[h].begin(), ms.posted[h].end());
        for (std::size_t i = 0; i < msgs.size(); ++i)
            for (std::size_t j = i + 1; j < msgs.size(); ++j) {
                const auto& a = ms.messages[msgs[i]].events;
                const auto& b = ms.messages[msgs[j]].events;
                q.serial.push_back({{a.back(), b.front()}, {b.back(), a.front()}});
            }
    }

    std::vector<std::vector<EventId>> posts(nh);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.event(i).kind == EventKind::Post) posts[t.event(i).receiver].push_back(static_cast<EventId>(i));
    for (const auto& ps : posts)
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                EventId p1 = ps[i], p2 = ps[j];
                q.post_orders.push_back({{p1, p2}, {p2, p1}});
                EventId g1 = ms.get_of_post[p1], g2 = ms.get_of_post[p2];
                if (fifo && g1 >= 0 && g2 >= 0) q.fifo.push_back({{p1, p2}, {g1, g2}});
            }
    return q;
}

std::string render_smtlib(const SolverQuery& q) {
    auto lt = [&](Less l) { return "(< " + q.vars[l.first] + " " + q.vars[l.second] + ")"; };
    std::vector<std::string> asserts;
    for (Less l : q.hard_edges) asserts.push_back("(assert " + lt(l) + ")");
    for (const auto* group : {&q.serial, &q.post_orders})
        for (const auto& [a, b] : *group) asserts.push_back("(assert (or " + lt(a) + " " + lt(b) + "))");
    for (const auto& [a, b] : q.fifo) asserts.push_back("(assert (= " + lt(a) + " " + lt(b) + "))");
    std::sort(asserts.begin(), asserts.end());

    std::string out = "(set-logic QF_IDL)\n";
    for (const auto& v : q.vars) out += "(declare-const " + v + " Int)\n";
    for (const auto& a : asserts) out += a + "\n";
    out += "(check-sat)\n";
    if (!q.vars.empty()) {
        out += "(get-value (";
        for (std::size_t i = 0; i < q.vars.size(); ++i) out += (i ? " " : "") + q.vars[i];
        out += "))\n";
    }
    return out;
}

std::string default_solver_cmd() {
    const char* env = std::getenv("EDCHECK_SOLVER_CMD");
    if (env && *env) return env;
    return "z3 -in";
}

namespace {

struct SExpr {
    std::string atom;
    std::vector<SExpr> list;
    bool is_list = false;
};

class SExprReader {
public:
    explicit SExprReader(const std::string& s) : s_(s) {}

    bool at_end() {
        skip();
        return i_ >= s_.size();
    }

    std::optional<SExpr> next() {
        skip();
        if (i_ >= s_.size()) return std::nullopt;
        SExpr e;
        if (s_[i_] == '(') {
            ++i_;
            e.is_list = true;
            for (;;) {
                skip();
                if (i_ >= s_.size()) return std::nullopt;
                if (s_[i_] == ')') {
                    ++i_;
                    return e;
                }
                auto sub = next();
                if (!sub) return std::nullopt;
                e.list.push_back(std::move(*sub));
            }
        }
        if (s_[i_] == ')') return std::nullopt;
        if (s_[i_] == '|') {
            auto end = s_.find('|', i_ + 1);
            if (end == std::string::npos) return std::nullopt;
            e.atom = s_.substr(i_, end - i_ + 1);
            i_ = end + 1;
            return e;
        }
        if (s_[i_] == '"') {
            auto end = s_.find('"', i_ + 1);
            if (end == std::string::npos) return std::nullopt;
            e.atom = s_.substr(i_, end - i_ + 1);
            i_ = end + 1;
            return e;
        }
        std::size_t st = i_;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')') ++i_;
        e.atom = s_.substr(st, i_ - st);
        return e;
    }

private:
    void skip() {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
            else if (s_[i_] == ';') while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            else break;
        }
    }
    const std::string& s_;
    std::size_t i_ = 0;
};

std::optional<long long> int_value(const SExpr& e) {
    try {
        if (!e.is_list) {
            std::size_t used = 0;
            long long v = std::stoll(e.atom, &used);
            if (used != e.atom.size()) return std::nullopt;
            return v;
        }
        if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-")
            if (auto v = int_value(e.list[1])) return -*v;
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

}  // namespace

CheckResult check_smt(const TraceGraph& t, const SmtConfig& cfg) {
    CheckResult res;
    if (auto err = partial_trace_error(t)) {
        res.verdict = Verdict::Refused;
        res.detail = *err;
        return res;
    }
    SolverQuery q = encode(t, cfg.fifo);
    res.work = q.hard_edges.size() + q.serial.size() + q.post_orders.size() + q.fifo.size();
    const std::string cmd = cfg.solver_cmd.empty() ? default_solver_cmd() : cfg.solver_cmd;
    ProcessResult pr = run_process(split_command(cmd), render_smtlib(q), cfg.timeout);
    if (!pr.started) {
        res.verdict = Verdict::BackendError;
        res.detail = pr.error;
        return res;
    }
    if (pr.timed_out) {
        res.verdict = Verdict::Timeout;
        res.detail = "solver did not answer in time";
        return res;
    }

    SExprReader reader(pr.out);
    auto head = reader.next();
    auto fail = [&](std::string why) {
        res.verdict = Verdict::BackendError;
        res.detail = why + " (exit code " + std::to_string(pr.exit_code) + ")";
        if (!pr.err.empty()) res.detail += ": " + pr.err.substr(0, 200);
        return res;
    };
    if (!head || head->is_list) return fail("no answer from solver");
    if (head->atom == "unsat") {
        res.verdict = Verdict::Inconsistent;
        return res;
    }
    if (head->atom == "unknown") {
        res.verdict = Verdict::Timeout;
        res.detail = "solver answered unknown";
        return res;
    }
    if (head->atom != "sat") return fail("unexpected solver answer '" + head->atom + "'");
    if (pr.exit_code != 0) return fail("solver failed");

    std::vector<long long> stamp(t.size(), 0);
    if (!q.vars.empty()) {
        auto model = reader.next();
        if (!model || !model->is_list) return fail("missing model");
        std::map<std::string, EventId> by_name;
        for (std::size_t i = 0; i < q.vars.size(); ++i) by_name[q.vars[i]] = static_cast<EventId>(i);
        std::vector<char> seen(t.size(), 0);
        for (const SExpr& pair : model->list) {
            if (!pair.is_list || pair.list.size() != 2 || pair.list[0].is_list) return fail("unparsable model");
            auto it = by_name.find(pair.list[0].atom);
            auto v = int_value(pair.list[1]);
            if (it == by_name.end() || !v) return fail("unparsable model");
            stamp[it->second] = *v;
            seen[it->second] = 1;
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return fail("incomplete model");
    }

    std::vector<EventId> order(t.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](EventId a, EventId b) { return stamp[a] < stamp[b]; });
    Witness w = witness_from_order(t, order);
    std::string bad = check_witness(t, w);
    res.verdict = Verdict::Consistent;
    if (bad.empty()) {
        res.witness = std::move(w);
    } else if (cfg.fifo) {
        return fail("model does not decode to a witness: " + bad);
    } else {
        res.detail = "decoded order is not a witness: " + bad;
    }
    return res;
}

}  // namespace edcheck
