#include "edcheck/interpreter.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "edcheck/trace_io.hpp"

namespace edcheck {

int Program::handler_index(const std::string& name) const {
    for (std::size_t i = 0; i < handlers.size(); ++i)
        if (handlers[i].name == name) return static_cast<int>(i);
    return -1;
}

int Program::message_index(const std::string& name) const {
    for (std::size_t i = 0; i < messages.size(); ++i)
        if (messages[i].name == name) return static_cast<int>(i);
    return -1;
}

// ---- parsing ----

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

class ExprParser {
public:
    ExprParser(Program& p, const HandlerDef& h, const std::string& src, int line) : p_(p), h_(h), line_(line) {
        std::size_t i = 0;
        while (i < src.size()) {
            char c = src[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t st = i;
                while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
                toks_.push_back(src.substr(st, i - st));
            } else if ((c == '=' || c == '!' || c == '<') && i + 1 < src.size() && src[i + 1] == '=') {
                toks_.push_back(src.substr(i, 2));
                i += 2;
            } else if (std::string("+-*<()").find(c) != std::string::npos) {
                toks_.push_back(std::string(1, c));
                ++i;
            } else {
                fail(std::string("unexpected character '") + c + "'");
            }
        }
    }

    int parse() {
        int e = comparison();
        if (pos_ != toks_.size()) fail("unexpected '" + toks_[pos_] + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ProgramError("line " + std::to_string(line_) + ": " + why);
    }
    bool peek(const char* s) const { return pos_ < toks_.size() && toks_[pos_] == s; }

    int node(ExprOp op, int l, int r) {
        p_.exprs.push_back({op, 0, -1, l, r});
        return static_cast<int>(p_.exprs.size()) - 1;
    }

    int comparison() {
        int l = additive();
        static const std::pair<const char*, ExprOp> ops[] = {
            {"==", ExprOp::Eq}, {"!=", ExprOp::Ne}, {"<=", ExprOp::Le}, {"<", ExprOp::Lt}};
        for (auto [s, op] : ops)
            if (peek(s)) {
                ++pos_;
                return node(op, l, additive());
            }
        return l;
    }

    int additive() {
        int l = multiplicative();
        while (peek("+") || peek("-")) {
            ExprOp op = toks_[pos_++] == "+" ? ExprOp::Add : ExprOp::Sub;
            l = node(op, l, multiplicative());
        }
        return l;
    }

    int multiplicative() {
        int l = primary();
        while (peek("*")) {
            ++pos_;
            l = node(ExprOp::Mul, l, primary());
        }
        return l;
    }

    int primary() {
        if (pos_ >= toks_.size()) fail("expression ends early");
        const std::string tok = toks_[pos_++];
        if (tok == "(") {
            int e = comparison();
            if (!peek(")")) fail("missing ')'");
            ++pos_;
            return e;
        }
        if (tok == "-") {
            int zero = node(ExprOp::Const, -1, -1);
            return node(ExprOp::Sub, zero, primary());
        }
        if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
            ExprNode n;
            try {
                std::size_t used = 0;
                n.value = std::stoll(tok, &used);
                if (used != tok.size()) fail("bad number '" + tok + "'");
            } catch (const std::out_of_range&) {
                fail("number out of range '" + tok + "'");
            } catch (const std::invalid_argument&) {
                fail("bad number '" + tok + "'");
            }
            p_.exprs.push_back(n);
            return static_cast<int>(p_.exprs.size()) - 1;
        }
        for (std::size_t r = 0; r < h_.regs.size(); ++r)
            if (h_.regs[r] == tok) {
                ExprNode n;
                n.op = ExprOp::Reg;
                n.reg = static_cast<int>(r);
                p_.exprs.push_back(n);
                return static_cast<int>(p_.exprs.size()) - 1;
            }
        fail("unknown register '" + tok + "' in handler " + h_.name);
    }

    Program& p_;
    const HandlerDef& h_;
    int line_;
    std::vector<std::string> toks_;
    std::size_t pos_ = 0;
};

// "name" or "name=int"
std::pair<std::string, std::int64_t> declaration(const std::string& w, int line) {
    auto eq = w.find('=');
    std::string name = w.substr(0, eq);
    std::int64_t v = 0;
    if (eq != std::string::npos) {
        try {
            std::size_t used = 0;
            v = std::stoll(w.substr(eq + 1), &used);
            if (used != w.size() - eq - 1) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ProgramError("line " + std::to_string(line) + ": bad initial value in '" + w + "'");
        }
    }
    if (!is_identifier(name)) throw ProgramError("line " + std::to_string(line) + ": bad name '" + name + "'");
    return {name, v};
}

struct PendingPost {
    int msg, instr;
    std::string handler, target;
    int line;
};

}  // namespace

Program parse_program(const std::string& text) {
    Program p;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    int cur = -1;   // message being defined
    std::map<std::string, int> labels;
    std::vector<std::pair<std::string, std::pair<int, int>>> jumps;   // label, (instr, line)
    std::vector<std::string> pending_labels;
    std::vector<PendingPost> posts;
    std::set<std::string> names;

    auto fail = [&](const std::string& why) -> void { throw ProgramError("line " + std::to_string(line) + ": " + why); };
    auto var_index = [&](const std::string& s) {
        for (std::size_t i = 0; i < p.vars.size(); ++i)
            if (p.vars[i] == s) return static_cast<int>(i);
        return -1;
    };
    auto fresh = [&](const std::string& s) {
        if (!names.insert(s).second) fail("duplicate name '" + s + "'");
    };

    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto w = words(raw);
        if (w.empty()) continue;

        if (cur < 0) {
            if (w[0] == "vars") {
                if (!p.handlers.empty()) fail("vars must be declared before handlers");
                for (std::size_t i = 1; i < w.size(); ++i) {
                    auto [name, v] = declaration(w[i], line);
                    fresh(name);
                    p.vars.push_back(name);
                    p.var_init.push_back(v);
                }
            } else if (w[0] == "handler") {
                if (w.size() < 2 || !is_identifier(w[1])) fail("handler needs a name");
                fresh(w[1]);
                HandlerDef h;
                h.name = w[1];
                for (std::size_t i = 2; i < w.size(); ++i) {
                    auto [name, v] = declaration(w[i], line);
                    if (var_index(name) >= 0) fail("register '" + name + "' shadows a variable");
                    for (const auto& r : h.regs)
                        if (r == name) fail("duplicate register '" + name + "'");
                    h.regs.push_back(name);
                    h.reg_init.push_back(v);
                }
                p.handlers.push_back(std::move(h));
            } else if (w[0] == "msg") {
                if (w.size() < 3 || w.size() > 4 || (w.size() == 4 && w[3] != "init")) fail("expected: msg <handler> <name> [init]");
                int h = p.handler_index(w[1]);
                if (h < 0) fail("unknown handler '" + w[1] + "'");
                if (!is_identifier(w[2])) fail("bad message name '" + w[2] + "'");
                fresh(w[2]);
                MessageDef m;
                m.name = w[2];
                m.handler = h;
                m.initial = w.size() == 4;
                if (m.initial) {
                    if (p.handlers[h].initial_msg >= 0) fail("handler '" + w[1] + "' has two initial messages");
                    p.handlers[h].initial_msg = static_cast<int>(p.messages.size());
                }
                p.messages.push_back(std::move(m));
                cur = static_cast<int>(p.messages.size()) - 1;
                labels.clear();
                jumps.clear();
                pending_labels.clear();
            } else {
                fail("unexpected '" + w[0] + "'");
            }
            continue;
        }

        MessageDef& m = p.messages[cur];
        const HandlerDef& h = p.handlers[m.handler];
        if (w[0] == "end" && w.size() == 1) {
            if (m.code.empty() || m.code.back().kind != InstrKind::Last) fail("message '" + m.name + "' must end with last");
            if (!pending_labels.empty()) fail("label '" + pending_labels.front() + "' at end of message");
            for (auto& [lab, at] : jumps) {
                auto it = labels.find(lab);
                if (it == labels.end()) {
                    line = at.second;
                    fail("unknown label '" + lab + "'");
                }
                m.code[at.first].target = it->second;
            }
            cur = -1;
            continue;
        }

        std::string body = raw;
        while (!w.empty() && w[0].back() == ':') {
            std::string lab = w[0].substr(0, w[0].size() - 1);
            if (!is_identifier(lab)) fail("bad label '" + lab + "'");
            if (labels.count(lab) || std::find(pending_labels.begin(), pending_labels.end(), lab) != pending_labels.end())
                fail("duplicate label '" + lab + "'");
            pending_labels.push_back(lab);
            body = body.substr(body.find(':') + 1);
            w.erase(w.begin());
        }
        if (w.empty()) continue;

        Instr ins;
        ins.line = line;
        const int index = static_cast<int>(m.code.size());
        auto reg_index = [&](const std::string& s) {
            for (std::size_t i = 0; i < h.regs.size(); ++i)
                if (h.regs[i] == s) return static_cast<int>(i);
            return -1;
        };
        if (w[0] == "last" && w.size() == 1) {
            ins.kind = InstrKind::Last;
        } else if (w[0] == "goto" && w.size() == 2) {
            ins.kind = InstrKind::Goto;
            jumps.push_back({w[1], {index, line}});
        } else if (w[0] == "if" && w.size() >= 4 && w[w.size() - 2] == "goto") {
            ins.kind = InstrKind::IfGoto;
            auto a = body.find("if") + 2;
            auto b = body.rfind("goto");
            ins.expr = ExprParser(p, h, body.substr(a, b - a), line).parse();
            jumps.push_back({w.back(), {index, line}});
        } else if (w[0] == "post" && w.size() == 3) {
            ins.kind = InstrKind::Post;
            posts.push_back({cur, index, w[1], w[2], line});
        } else if (w.size() >= 3 && w[1] == "=") {
            std::string rhs = body.substr(body.find('=') + 1);
            int v = var_index(w[0]);
            int r = reg_index(w[0]);
            if (v >= 0) {
                ins.kind = InstrKind::Write;
                ins.var = v;
                ins.reg = w.size() == 3 ? reg_index(w[2]) : -1;
                if (ins.reg < 0) fail("a variable can only be assigned a register");
            } else if (r >= 0) {
                ins.reg = r;
                if (w.size() == 3 && var_index(w[2]) >= 0) {
                    ins.kind = InstrKind::Read;
                    ins.var = var_index(w[2]);
                } else {
                    ins.kind = InstrKind::Local;
                    ins.expr = ExprParser(p, h, rhs, line).parse();
                }
            } else {
                fail("unknown variable or register '" + w[0] + "'");
            }
        } else {
            fail("cannot parse instruction '" + body + "'");
        }
        for (const auto& lab : pending_labels) labels[lab] = index;
        pending_labels.clear();
        p.messages[cur].code.push_back(ins);
    }
    if (cur >= 0) throw ProgramError("message '" + p.messages[cur].name + "' is not closed with end");

    for (const auto& pp : posts) {
        line = pp.line;
        int h = p.handler_index(pp.handler);
        if (h < 0) fail("unknown handler '" + pp.handler + "'");
        int m = p.message_index(pp.target);
        if (m < 0) fail("unknown message '" + pp.target + "'");
        if (p.messages[m].handler != h) fail("message '" + pp.target + "' does not belong to " + pp.handler);
        if (p.messages[m].initial) fail("initial message '" + pp.target + "' cannot be posted");
        p.messages[pp.msg].code[pp.instr].handler = h;
        p.messages[pp.msg].code[pp.instr].msg = m;
    }
    for (const auto& h : p.handlers)
        if (h.initial_msg < 0) throw ProgramError("handler '" + h.name + "' has no initial message");
    return p;
}

Program load_program(const std::string& path) {
    try {
        return parse_program(read_file(path));
    } catch (const ProgramError& e) {
        throw ProgramError(path + ": " + e.what());
    }
}

std::int64_t eval(const Program& p, int expr, const std::vector<std::int64_t>& regs) {
    const ExprNode& n = p.exprs[expr];
    auto wrap = [](std::uint64_t v) { return static_cast<std::int64_t>(v); };
    switch (n.op) {
        case ExprOp::Const: return n.value;
        case ExprOp::Reg: return regs[n.reg];
        default: break;
    }
    auto a = eval(p, n.lhs, regs), b = eval(p, n.rhs, regs);
    auto ua = static_cast<std::uint64_t>(a), ub = static_cast<std::uint64_t>(b);
    switch (n.op) {
        case ExprOp::Add: return wrap(ua + ub);
        case ExprOp::Sub: return wrap(ua - ub);
        case ExprOp::Mul: return wrap(ua * ub);
        case ExprOp::Eq: return a == b;
        case ExprOp::Ne: return a != b;
        case ExprOp::Lt: return a < b;
        case ExprOp::Le: return a <= b;
        default: return 0;
    }
}

// ---- semantics ----

Configuration initial_configuration(const Program& p) {
    Configuration c;
    c.vars = p.var_init;
    for (std::size_t h = 0; h < p.handlers.size(); ++h) {
        HandlerState s;
        s.regs = p.handlers[h].reg_init;
        s.msg = p.handlers[h].initial_msg;
        s.mid = {static_cast<int>(h), 0};
        c.handlers.push_back(std::move(s));
    }
    return c;
}

namespace {

const Instr& current(const Program& p, const Configuration& c, int h) {
    const HandlerState& s = c.handlers[h];
    return p.messages[s.msg].code[s.pc];
}

}  // namespace

bool enabled(const Program& p, const Configuration& c, int h) {
    return current(p, c, h).kind != InstrKind::Last || !c.handlers[h].mailbox.empty();
}

bool at_event(const Program& p, const Configuration& c, int h) {
    switch (current(p, c, h).kind) {
        case InstrKind::Write:
        case InstrKind::Read:
        case InstrKind::Post: return true;
        case InstrKind::Last: return !c.handlers[h].mailbox.empty();
        default: return false;
    }
}

std::optional<RunEvent> step(const Program& p, Configuration& c, int h) {
    if (h < 0 || h >= static_cast<int>(c.handlers.size()) || !enabled(p, c, h))
        throw ScheduleError("handler " + std::to_string(h) + " is not enabled");
    HandlerState& s = c.handlers[h];
    const Instr& ins = p.messages[s.msg].code[s.pc];
    RunEvent ev;
    ev.handler = h;
    ev.mid = s.mid;
    switch (ins.kind) {
        case InstrKind::Write:
            c.vars[ins.var] = s.regs[ins.reg];
            ++s.pc;
            ev.kind = EventKind::Write;
            ev.var = ins.var;
            ev.val = c.vars[ins.var];
            return ev;
        case InstrKind::Read:
            s.regs[ins.reg] = c.vars[ins.var];
            ++s.pc;
            ev.kind = EventKind::Read;
            ev.var = ins.var;
            ev.val = s.regs[ins.reg];
            return ev;
        case InstrKind::Local:
            s.regs[ins.reg] = eval(p, ins.expr, s.regs);
            ++s.pc;
            return std::nullopt;
        case InstrKind::IfGoto:
            s.pc = eval(p, ins.expr, s.regs) != 0 ? ins.target : s.pc + 1;
            return std::nullopt;
        case InstrKind::Goto:
            s.pc = ins.target;
            return std::nullopt;
        case InstrKind::Post: {
            ev.kind = EventKind::Post;
            ev.receiver = ins.handler;
            ev.msg = ins.msg;
            ev.newmid = {h, s.mcount++};
            ++s.pc;
            c.handlers[ins.handler].mailbox.emplace_back(ins.msg, ev.newmid);
            return ev;
        }
        case InstrKind::Last: {
            auto [m, mid] = s.mailbox.front();
            s.mailbox.pop_front();
            s.msg = m;
            s.pc = 0;
            s.mid = mid;
            ev.kind = EventKind::Get;
            ev.msg = m;
            ev.mid = mid;
            return ev;
        }
    }
    return std::nullopt;
}

Run run(const Program& p, const Schedule& sched, std::uint64_t max_steps) {
    Run r;
    r.final = initial_configuration(p);
    const int nh = static_cast<int>(p.handlers.size());
    auto apply = [&](int h) {
        if (auto ev = step(p, r.final, h)) r.events.push_back(*ev);
        ++r.steps;
    };
    if (sched.mode == Schedule::Mode::Replay) {
        for (int h : sched.decisions) {
            if (r.steps >= max_steps) break;
            if (h < 0 || h >= nh || !enabled(p, r.final, h))
                throw ScheduleError("replay decision " + std::to_string(r.steps) + ": handler " + std::to_string(h) + " is not enabled");
            apply(h);
        }
        return r;
    }
    std::mt19937_64 rng(sched.seed);
    std::vector<int> ready;
    while (r.steps < max_steps) {
        ready.clear();
        for (int h = 0; h < nh; ++h)
            if (enabled(p, r.final, h)) ready.push_back(h);
        if (ready.empty()) break;
        apply(ready[std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng)]);
    }
    return r;
}

std::vector<Run> run_exhaustive(const Program& p, std::size_t depth, std::size_t max_runs, std::uint64_t max_local_steps) {
    std::vector<Run> out;
    std::set<std::vector<std::tuple<int, int, int, std::int64_t, int>>> seen;
    const int nh = static_cast<int>(p.handlers.size());
    Run cur;

    std::function<void(Configuration, std::uint64_t)> dfs = [&](Configuration c, std::uint64_t steps) {
        std::vector<int> ready;
        for (int h = 0; h < nh; ++h) {
            std::uint64_t local = 0;
            while (enabled(p, c, h) && !at_event(p, c, h) && local < max_local_steps) {
                step(p, c, h);
                ++local;
            }
            steps += local;
            if (at_event(p, c, h)) ready.push_back(h);
        }
        if (ready.empty() || cur.events.size() >= depth) {
            std::vector<std::tuple<int, int, int, std::int64_t, int>> key;
            for (const auto& e : cur.events) key.emplace_back(e.handler, static_cast<int>(e.kind), e.var, e.val, e.msg);
            if (seen.insert(std::move(key)).second) {
                Run r = cur;
                r.final = std::move(c);
                r.steps = steps;
                out.push_back(std::move(r));
            }
            return;
        }
        for (int h : ready) {
            Configuration d = c;
            cur.events.push_back(*step(p, d, h));
            dfs(std::move(d), steps + 1);
            cur.events.pop_back();
            if (out.size() >= max_runs) return;
        }
    };
    dfs(initial_configuration(p), 0);
    return out;
}

TraceGraph extract_trace(const Program& p, const Run& r) {
    TraceGraph t;
    const int nh = static_cast<int>(p.handlers.size());
    for (const auto& h : p.handlers) t.add_handler(h.name);

    std::vector<char> written(p.vars.size(), 0), needs_init(p.vars.size(), 0);
    for (const RunEvent& e : r.events) {
        if (e.kind == EventKind::Write) written[e.var] = 1;
        if (e.kind == EventKind::Read && !written[e.var]) needs_init[e.var] = 1;
    }
    std::vector<EventId> last_write(p.vars.size(), -1);
    if (std::find(needs_init.begin(), needs_init.end(), 1) != needs_init.end()) {
        t.add_handler("_init");
        EventId prev = -1;
        int k = 0;
        for (std::size_t v = 0; v < p.vars.size(); ++v) {
            if (!needs_init[v]) continue;
            EventId e = t.add_write("_init", "_init_" + std::to_string(k++), p.vars[v], p.var_init[v]);
            if (prev >= 0) t.add_edge(Rel::po, prev, e);
            prev = e;
            last_write[v] = e;
        }
    }

    std::vector<int> counter(nh, 0);
    std::map<MsgId, EventId> last_in_msg, post_of;
    std::vector<EventId> last_initial(nh, -1), last_post_to(nh, -1), last_get(nh, -1);
    for (const RunEvent& e : r.events) {
        const std::string& hn = p.handlers[e.handler].name;
        std::string id = hn + "_" + std::to_string(counter[e.handler]++);
        EventId x = -1;
        switch (e.kind) {
            case EventKind::Write: x = t.add_write(hn, id, p.vars[e.var], e.val); break;
            case EventKind::Read: x = t.add_read(hn, id, p.vars[e.var]); break;
            case EventKind::Post: x = t.add_post(hn, id, p.handlers[e.receiver].name); break;
            case EventKind::Get: x = t.add_get(hn, id); break;
        }
        if (auto it = last_in_msg.find(e.mid); it != last_in_msg.end()) t.add_edge(Rel::po, it->second, x);
        last_in_msg[e.mid] = x;
        if (e.mid.count == 0 && e.mid.handler == e.handler) last_initial[e.handler] = x;

        switch (e.kind) {
            case EventKind::Write:
                if (last_write[e.var] >= 0) t.add_edge(Rel::co, last_write[e.var], x);
                last_write[e.var] = x;
                break;
            case EventKind::Read: t.add_edge(Rel::rf, last_write[e.var], x); break;
            case EventKind::Post:
                post_of[e.newmid] = x;
                if (last_post_to[e.receiver] >= 0) t.add_edge(Rel::mo, last_post_to[e.receiver], x);
                last_post_to[e.receiver] = x;
                break;
            case EventKind::Get:
                t.add_edge(Rel::pb, post_of.at(e.mid), x);
                if (last_initial[e.handler] >= 0) t.add_edge(Rel::po, last_initial[e.handler], x);
                if (last_get[e.handler] >= 0) t.add_edge(Rel::eo, last_get[e.handler], x);
                last_get[e.handler] = x;
                break;
        }
    }
    return t;
}

}  // namespace edcheck
