#include "edcheck/sat_gadgets.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace edcheck {

std::vector<std::string> restriction_violations(const Cnf3BI& f) {
    std::vector<std::string> out;
    std::vector<int> occurrences(f.n + 1, 0);
    for (std::size_t c = 0; c < f.clauses.size(); ++c) {
        const auto& cl = f.clauses[c];
        const std::string name = "clause " + std::to_string(c + 1);
        if (cl.size() < 2 || cl.size() > 3)
            out.push_back(name + " has " + std::to_string(cl.size()) + " literals, expected 2 or 3");
        std::vector<int> seen;
        for (const Literal& l : cl) {
            if (l.var < 1 || l.var > f.n) {
                out.push_back(name + " mentions variable " + std::to_string(l.var) + " outside 1.." + std::to_string(f.n));
                continue;
            }
            if (std::find(seen.begin(), seen.end(), l.var) != seen.end()) {
                out.push_back(name + ": variable " + std::to_string(l.var) + " appears more than once in the clause");
                continue;
            }
            seen.push_back(l.var);
            ++occurrences[l.var];
        }
    }
    for (int v = 1; v <= f.n; ++v)
        if (occurrences[v] > 3)
            out.push_back("variable " + std::to_string(v) + " occurs in " + std::to_string(occurrences[v]) +
                          " clauses, at most 3 allowed");
    return out;
}

Cnf3BI parse_dimacs_restricted(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Cnf3BI f;
    long declared = -1;
    bool header = false;
    std::vector<Literal> cur;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == 'c') continue;
        if (tok == "%") break;
        if (tok == "p") {
            std::string fmt;
            long n = -1, m = -1;
            if (header || !(ls >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0)
                throw CnfError("line " + std::to_string(lineno) + ": bad problem line");
            f.n = static_cast<int>(n);
            declared = m;
            header = true;
            continue;
        }
        if (!header) throw CnfError("line " + std::to_string(lineno) + ": clause before the problem line");
        do {
            char* end = nullptr;
            long lit = std::strtol(tok.c_str(), &end, 10);
            if (*end != '\0') throw CnfError("line " + std::to_string(lineno) + ": bad literal '" + tok + "'");
            if (lit == 0) {
                f.clauses.push_back(std::move(cur));
                cur.clear();
            } else {
                if (std::labs(lit) > f.n)
                    throw CnfError("line " + std::to_string(lineno) + ": literal " + tok + " exceeds the declared " +
                                   std::to_string(f.n) + " variables");
                cur.push_back({static_cast<int>(std::labs(lit)), lit > 0});
            }
        } while (ls >> tok);
    }
    if (!header) throw CnfError("missing problem line");
    if (!cur.empty()) throw CnfError("last clause is not terminated by 0");
    if (static_cast<long>(f.clauses.size()) != declared)
        throw CnfError("problem line declares " + std::to_string(declared) + " clauses, found " +
                       std::to_string(f.clauses.size()));
    auto bad = restriction_violations(f);
    if (!bad.empty()) {
        std::string msg = "not a 3-BI-3SAT formula:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw CnfError(msg);
    }
    return f;
}

std::string to_dimacs(const Cnf3BI& f) {
    std::string s = "p cnf " + std::to_string(f.n) + " " + std::to_string(f.clauses.size()) + "\n";
    for (const auto& cl : f.clauses) {
        for (const Literal& l : cl) s += (l.positive ? "" : "-") + std::to_string(l.var) + " ";
        s += "0\n";
    }
    return s;
}

bool satisfies(const Cnf3BI& f, const std::vector<bool>& a) {
    for (const auto& cl : f.clauses) {
        bool any = false;
        for (const Literal& l : cl) any = any || a[l.var - 1] == l.positive;
        if (!any) return false;
    }
    return true;
}

std::optional<std::vector<bool>> sat_bruteforce(const Cnf3BI& f) {
    if (f.n > 24) throw CnfError("brute force is limited to 24 variables");
    std::vector<bool> a(f.n);
    for (std::uint32_t bits = 0; bits < (1u << f.n); ++bits) {
        for (int v = 0; v < f.n; ++v) a[v] = (bits >> v) & 1u;
        if (satisfies(f, a)) return a;
    }
    return std::nullopt;
}

std::optional<Cnf3BI> random_cnf3bi(std::mt19937_64& rng, int n, int m) {
    if (n < 2 || 2 * m > 3 * n) return std::nullopt;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Cnf3BI f{n, {}};
        std::vector<int> used(n + 1, 0);
        for (int j = 0; j < m; ++j) {
            std::vector<int> free;
            for (int v = 1; v <= n; ++v)
                if (used[v] < 3) free.push_back(v);
            int capacity = 0;
            for (int v = 1; v <= n; ++v) capacity += 3 - used[v];
            int k = std::uniform_int_distribution<int>(2, 3)(rng);
            if (capacity - 3 < 2 * (m - j - 1)) k = 2;
            k = std::min<int>(k, static_cast<int>(free.size()));
            if (k < 2) break;
            std::shuffle(free.begin(), free.end(), rng);
            std::vector<Literal> cl;
            for (int a = 0; a < k; ++a) {
                cl.push_back({free[a], (rng() & 1) != 0});
                ++used[free[a]];
            }
            f.clauses.push_back(std::move(cl));
        }
        if (static_cast<int>(f.clauses.size()) == m) return f;
    }
    return std::nullopt;
}

namespace {

// 0 unassigned, 1 true, -1 false
bool dpll(const Cnf3BI& f, std::vector<int>& val) {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& cl : f.clauses) {
            int open = 0;
            const Literal* unit = nullptr;
            bool sat = false;
            for (const Literal& l : cl) {
                int v = val[l.var - 1];
                if (v == 0) {
                    ++open;
                    unit = &l;
                } else if ((v > 0) == l.positive) {
                    sat = true;
                }
            }
            if (sat) continue;
            if (open == 0) return false;
            if (open == 1) {
                val[unit->var - 1] = unit->positive ? 1 : -1;
                changed = true;
            }
        }
    }
    for (int v = static_cast<int>(val.size()) - 1; v >= 0; --v) {
        if (val[v] != 0) continue;
        for (int choice : {-1, 1}) {
            std::vector<int> next = val;
            next[v] = choice;
            if (dpll(f, next)) {
                val = std::move(next);
                return true;
            }
        }
        return false;
    }
    return true;
}

}  // namespace

std::optional<std::vector<bool>> sat_dpll(const Cnf3BI& f) {
    if (f.n > 24) throw CnfError("reference solver is limited to 24 variables");
    std::vector<int> val(f.n, 0);
    if (!dpll(f, val)) return std::nullopt;
    std::vector<bool> a(f.n);
    for (int v = 0; v < f.n; ++v) a[v] = val[v] > 0;
    return a;
}

const char* to_string(GadgetRole r) {
    switch (r) {
        case GadgetRole::PostSeqCell: return "PostSeqCell";
        case GadgetRole::MessageInsertion: return "MessageInsertion";
        case GadgetRole::ClauseGadget: return "ClauseGadget";
        case GadgetRole::Sandwich: return "Sandwich";
    }
    return "?";
}

namespace {

const char* const gadget_handlers[] = {"hV", "ht1", "ht2", "ht3", "ht4", "ht5", "ht6", "hW", "hCa", "hCb", "hCc", "hCd"};

std::string ijb(int i, int j, int b) { return "x" + std::to_string(i) + "_c" + std::to_string(j) + "_b" + std::to_string(b); }

// F1 variable of a clause box: l<j>_<i>_<k> for the true copy, nl<j>_<i>_<k> for the false one.
std::string box_var(int j, int i, int b, int k) {
    return std::string(b ? "l" : "nl") + std::to_string(j) + "_" + std::to_string(i) + "_" + std::to_string(k);
}

struct Builder {
    GadgetTrace g;

    EventId add(EventId e, int stage, GadgetRole role, int a, int b, int c) {
        g.provenance[g.trace.event(e).id] = {stage, role, {a, b, c}};
        return e;
    }
};

struct Hop {
    std::string handler;
    int column;
    int k;
    int insert_clause = 0;   // > 0: this message posts m_{i,clause,b} to hW
};

}  // namespace

GadgetTrace build_gadget(const Cnf3BI& f) {
    if (auto bad = restriction_violations(f); !bad.empty()) throw CnfError("not a 3-BI-3SAT formula: " + bad.front());
    Builder bld;
    TraceGraph& t = bld.g.trace;
    for (const char* h : gadget_handlers) t.add_handler(h);
    const int m = static_cast<int>(f.clauses.size());

    // occurrence[i][j] = (position v, occurrence number u), 0 if absent
    std::vector<std::vector<std::pair<int, int>>> occ(f.n + 1, std::vector<std::pair<int, int>>(m + 1, {0, 0}));
    std::vector<int> seen(f.n + 1, 0);
    for (int j = 1; j <= m; ++j)
        for (std::size_t v = 0; v < f.clauses[j - 1].size(); ++v) {
            int i = f.clauses[j - 1][v].var;
            occ[i][j] = {static_cast<int>(v) + 1, ++seen[i]};
        }

    // Stage 1: one post sequence per row, started from hV's initial message.
    std::vector<EventId> starts;
    std::vector<std::vector<Hop>> paths(2 * f.n + 1);
    for (int r = 1; r <= 2 * f.n; ++r) {
        const int i = (r + 1) / 2;
        const bool pos_row = r % 2 == 1;
        auto& path = paths[r];
        for (int j = 1; j <= m; ++j) {
            auto [v, u] = occ[i][j];
            if (v == 0) {
                path.push_back({"hV", j, 1});
                continue;
            }
            const std::string tv = "ht" + std::to_string(v);
            if (u > 1) {
                path.push_back({tv, j, 1, j});
                path.push_back({"hV", j, 2});
            } else {
                const bool same = f.clauses[j - 1][v - 1].positive == pos_row;
                path.push_back({same ? std::string("hV") : "ht" + std::to_string(v + 3), j, 1});
                path.push_back({tv, j, 2, j});
                path.push_back({"hV", j, 3});
            }
        }
        starts.push_back(bld.add(t.add_post("hV", "s1_start_r" + std::to_string(r), "hV"),
                                 1, GadgetRole::PostSeqCell, r, 0, 0));
    }
    t.add_chain(Rel::po, starts);

    std::map<std::string, EventId> to_hw;   // ijb -> insertion post
    for (int r = 1; r <= 2 * f.n; ++r) {
        const int i = (r + 1) / 2;
        const int b = r % 2;
        const std::string row = "s1_r" + std::to_string(r);
        EventId incoming = starts[r - 1];
        // message q runs on the handler hop q-1 posted to (hV for q = 0) and posts hop q
        const auto& path = paths[r];
        for (std::size_t q = 0; q <= path.size(); ++q) {
            const std::string here = q == 0 ? "hV" : path[q - 1].handler;
            const std::string tag = q < path.size()
                                        ? row + "_c" + std::to_string(path[q].column) + "_k" + std::to_string(path[q].k)
                                        : row + "_end";
            const int col = q < path.size() ? path[q].column : m + 1;
            const int k = q < path.size() ? path[q].k : 0;
            std::vector<EventId> msg;
            msg.push_back(bld.add(t.add_get(here, tag + "_get"), 1, GadgetRole::PostSeqCell, r, col, k));
            t.add_edge(Rel::pb, incoming, msg.back());
            if (q > 0 && path[q - 1].insert_clause) {
                const int j = path[q - 1].insert_clause;
                EventId p = bld.add(t.add_post(here, "s1_ins_" + ijb(i, j, b) + "_post", "hW"), 1,
                                    GadgetRole::MessageInsertion, i, j, b);
                msg.push_back(p);
                to_hw[ijb(i, j, b)] = p;
            }
            if (q < path.size()) {
                msg.push_back(bld.add(t.add_post(here, tag + "_post", path[q].handler), 1, GadgetRole::PostSeqCell, r, col, k));
                incoming = msg.back();
            }
            t.add_chain(Rel::po, msg);
        }
    }

    // hW messages m_{i,j,b}: get, write of the box input, read of the box output.
    std::map<std::string, std::pair<EventId, EventId>> hw;   // ijb -> (write, read)
    for (int j = 1; j <= m; ++j)
        for (const Literal& l : f.clauses[j - 1])
            for (int b : {0, 1}) {
                const std::string key = ijb(l.var, j, b);
                EventId get = bld.add(t.add_get("hW", "s1_ins_" + key + "_get"), 1, GadgetRole::MessageInsertion, l.var, j, b);
                t.add_edge(Rel::pb, to_hw.at(key), get);
                EventId w = bld.add(t.add_write("hW", "s2_sand_" + key + "_w", box_var(j, l.var, b, 1), 1), 2,
                                    GadgetRole::Sandwich, l.var, j, b);
                EventId rd = bld.add(t.add_read("hW", "s2_sand_" + key + "_r", box_var(j, l.var, b, 2)), 2,
                                     GadgetRole::Sandwich, l.var, j, b);
                t.add_chain(Rel::po, {get, w, rd});
                hw[key] = {w, rd};
            }

    // Stage 2: clause gadgets. Box p (1-based) belongs to literal (p-1)/2; the first
    // box of a literal uses the copy of the literal itself, the second its complement.
    std::map<std::string, std::vector<EventId>> lanes;
    for (int j = 1; j <= m; ++j) {
        const auto& cl = f.clauses[j - 1];
        const bool three = cl.size() == 3;
        const char* box_handler[] = {"hCa", "hCb", "hCb", "hCc", "hCc", "hCd"};
        const std::string z = "z" + std::to_string(j);
        const std::string gid = "s2_gadget_c" + std::to_string(j) + "_e";
        auto ev = [&](int pos, EventId e) {
            return bld.add(e, 2, GadgetRole::ClauseGadget, j, pos, 0);
        };
        EventId zr = ev(1, t.add_read("hCa", gid + "1", z));
        lanes["hCa"].push_back(zr);
        for (int p = 1; p <= static_cast<int>(2 * cl.size()); ++p) {
            const Literal& l = cl[(p - 1) / 2];
            const int b = (p % 2 == 1) == l.positive ? 1 : 0;
            const std::string key = ijb(l.var, j, b);
            const std::string h = box_handler[p - 1];
            EventId r = ev(2 * p, t.add_read(h, gid + std::to_string(2 * p), box_var(j, l.var, b, 1)));
            EventId w = ev(2 * p + 1, t.add_write(h, gid + std::to_string(2 * p + 1), box_var(j, l.var, b, 2), 1));
            t.add_edge(Rel::rf, hw.at(key).first, r);
            t.add_edge(Rel::rf, w, hw.at(key).second);
            lanes[h].push_back(r);
            lanes[h].push_back(w);
        }
        const std::string zh = three ? "hCd" : "hCc";
        EventId zw = ev(14, t.add_write(zh, gid + "14", z, 1));
        lanes[zh].push_back(zw);
        t.add_edge(Rel::rf, zw, zr);
    }
    for (auto& [h, seq] : lanes) t.add_chain(Rel::po, seq);
    return std::move(bld.g);
}

std::string provenance_json(const GadgetTrace& g) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const Event& e : g.trace.events()) {
        const Provenance& p = g.provenance.at(e.id);
        out.push_back({{"id", e.id}, {"stage", p.stage}, {"role", to_string(p.role)}, {"index", p.index}});
    }
    return out.dump(1) + "\n";
}

TraceGraph sorting_trace(const std::array<int, 3>& order) {
    TraceGraph t;
    for (const char* h : {"h1", "h2", "h3"}) t.add_handler(h);
    // wrapper routes after h1: m1 through h2, h3; m2 and m3 through h3, h2
    const std::vector<std::vector<std::string>> routes = {{"h1", "h2", "h3", "h1"}, {"h1", "h3", "h2", "h1"}, {"h1", "h3", "h2", "h1"}};
    std::vector<EventId> init;
    std::vector<EventId> incoming(3);
    for (int k = 0; k < 3; ++k) {
        incoming[k] = t.add_post("h1", "start_m" + std::to_string(k + 1), "h1");
        init.push_back(incoming[k]);
    }
    t.add_chain(Rel::po, init);
    for (int k = 0; k < 3; ++k) {
        const auto& route = routes[k];
        for (std::size_t hop = 0; hop + 1 < route.size(); ++hop) {
            const std::string tag = "wrap" + std::to_string(hop + 1) + "_m" + std::to_string(k + 1);
            EventId g = t.add_get(route[hop], tag + "_get");
            EventId p = t.add_post(route[hop], tag + "_post", route[hop + 1]);
            t.add_edge(Rel::pb, incoming[k], g);
            t.add_edge(Rel::po, g, p);
            incoming[k] = p;
        }
    }
    EventId prev_write = -1;
    for (int pos = 0; pos < 3; ++pos) {
        const std::string m = "m" + std::to_string(order[pos]);
        std::vector<EventId> msg{t.add_get("h1", m + "_get")};
        t.add_edge(Rel::pb, incoming[order[pos] - 1], msg[0]);
        if (prev_write >= 0) {
            msg.push_back(t.add_read("h1", m + "_r", t.event(prev_write).var));
            t.add_edge(Rel::rf, prev_write, msg.back());
        }
        if (pos < 2) {
            msg.push_back(t.add_write("h1", m + "_w", "after_" + m, 1));
            prev_write = msg.back();
        }
        t.add_chain(Rel::po, msg);
    }
    return t;
}

}  // namespace edcheck
