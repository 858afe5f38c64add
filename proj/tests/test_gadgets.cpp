#include "doctest.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "edcheck/enum_checker.hpp"
#include "edcheck/nonest_checker.hpp"
#include "edcheck/oracle.hpp"
#include "edcheck/sat_gadgets.hpp"
#include "edcheck/smt_checker.hpp"

using namespace edcheck;

namespace {

std::string parse_error(const std::string& text) {
    try {
        parse_dimacs_restricted(text);
    } catch (const CnfError& e) {
        return e.what();
    }
    return "";
}

Cnf3BI load_cnf(const std::string& name) {
    std::ifstream in(std::string(EDCHECK_DATA_DIR) + "/cnf/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dimacs_restricted(ss.str());
}

Cnf3BI cnf(int n, std::vector<std::vector<int>> clauses) {
    Cnf3BI f{n, {}};
    for (const auto& cl : clauses) {
        f.clauses.emplace_back();
        for (int l : cl) f.clauses.back().push_back({std::abs(l), l > 0});
    }
    return f;
}

bool has_edge(const TraceGraph& t, Rel r, const std::string& a, const std::string& b) {
    return t.edges().count({r, t.at(a), t.at(b)}) > 0;
}

}  // namespace

TEST_CASE("DIMACS parsing") {
    Cnf3BI f = parse_dimacs_restricted("c comment\np cnf 2 1\n1 2 0\n");
    CHECK(f.n == 2);
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0] == std::vector<Literal>{{1, true}, {2, true}});
    CHECK(parse_dimacs_restricted("p cnf 3 2\n1 -2\n 3 0 -1 2 0\n").clauses.size() == 2);
    CHECK(to_dimacs(parse_dimacs_restricted("p cnf 3 2\n1 -2 3 0\n-1 2 0\n")) == "p cnf 3 2\n1 -2 3 0\n-1 2 0\n");

    CHECK(parse_error("p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n").find("variable 1 occurs in 4 clauses") != std::string::npos);
    CHECK(parse_error("p cnf 2 1\n1 1 0\n").find("appears more than once") != std::string::npos);
    CHECK(parse_error("p cnf 2 1\n1 0\n").find("clause 1 has 1 literals") != std::string::npos);
    CHECK(parse_error("p cnf 4 1\n1 2 3 4 0\n").find("has 4 literals") != std::string::npos);
    CHECK(parse_error("1 2 0\n").find("before the problem line") != std::string::npos);
    CHECK(parse_error("").find("missing problem line") != std::string::npos);
    CHECK(parse_error("p cnf 2 1\n1 x 0\n").find("bad literal") != std::string::npos);
    CHECK(parse_error("p cnf 2 1\n1 3 0\n").find("exceeds") != std::string::npos);
    CHECK(parse_error("p cnf 2 1\n1 2\n").find("not terminated") != std::string::npos);
    CHECK(parse_error("p cnf 2 2\n1 2 0\n").find("declares 2 clauses, found 1") != std::string::npos);
    CHECK(parse_error("p dnf 2 1\n1 2 0\n").find("bad problem line") != std::string::npos);
    for (const char* name : {"unsat_n4.cnf", "unsat_n5.cnf", "unsat_n6.cnf", "unsat_n7.cnf", "unsat_n8.cnf", "two_clauses.cnf"})
        CHECK_NOTHROW(load_cnf(name));
}

TEST_CASE("satisfiability references") {
    CHECK(sat_bruteforce(cnf(2, {{1, 2}})) == std::vector<bool>{true, false});
    CHECK(sat_bruteforce(cnf(1, {{1}})) == std::vector<bool>{true});
    CHECK_FALSE(sat_bruteforce(cnf(1, {{1}, {-1}})));
    CHECK_FALSE(sat_dpll(cnf(1, {{1}, {-1}})));
    CHECK_THROWS_AS(sat_bruteforce(Cnf3BI{25, {}}), CnfError);
    for (const char* name : {"unsat_n4.cnf", "unsat_n5.cnf", "unsat_n6.cnf", "unsat_n7.cnf", "unsat_n8.cnf"}) {
        CHECK_FALSE(sat_bruteforce(load_cnf(name)));
        CHECK_FALSE(sat_dpll(load_cnf(name)));
    }

    std::mt19937_64 rng(5);
    int unsat = 0;
    for (int k = 0; k < 600; ++k) {
        int n = 2 + k % 7;
        auto f = random_cnf3bi(rng, n, std::uniform_int_distribution<int>(1, 3 * n / 2)(rng));
        REQUIRE(f);
        CHECK(restriction_violations(*f).empty());
        auto a = sat_bruteforce(*f);
        auto b = sat_dpll(*f);
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
            CHECK(satisfies(*f, *a));
            CHECK(satisfies(*f, *b));
        }
        unsat += !a;
    }
    CHECK_FALSE(random_cnf3bi(rng, 2, 4));
    MESSAGE("unsatisfiable random formulas: " << unsat);
}

TEST_CASE("no unsatisfiable formula with at most 4 variables and 4 clauses") {
    for (int n = 2; n <= 4; ++n) {
        std::vector<std::vector<int>> all;
        for (int mask = 1; mask < (1 << n); ++mask) {
            int k = __builtin_popcount(mask);
            if (k < 2 || k > 3) continue;
            for (int signs = 0; signs < (1 << k); ++signs) {
                std::vector<int> cl;
                int s = 0;
                for (int v = 0; v < n; ++v)
                    if (mask >> v & 1) cl.push_back((signs >> s++ & 1) ? v + 1 : -(v + 1));
                all.push_back(cl);
            }
        }
        std::uint64_t formulas = 0, unsat = 0;
        std::vector<int> pick;
        auto rec = [&](auto&& self, std::size_t from) -> void {
            if (!pick.empty()) {
                std::vector<std::vector<int>> cls;
                for (int c : pick) cls.push_back(all[c]);
                Cnf3BI f = cnf(n, cls);
                if (restriction_violations(f).empty()) {
                    ++formulas;
                    unsat += !sat_bruteforce(f);
                }
            }
            if (pick.size() == 4) return;
            for (std::size_t c = from; c < all.size(); ++c) {
                pick.push_back(static_cast<int>(c));
                self(self, c);
                pick.pop_back();
            }
        };
        rec(rec, 0);
        CHECK(formulas > 0);
        CHECK(unsat == 0);
    }
}

TEST_CASE("gadget structure") {
    // C1 = x2 or not x3, C2 = x1 or x2 or not x3
    Cnf3BI f = cnf(3, {{2, -3}, {1, 2, -3}});
    GadgetTrace g = build_gadget(f);
    const TraceGraph& t = g.trace;
    CHECK(t.handlers() == std::vector<std::string>{"hV", "ht1", "ht2", "ht3", "ht4", "ht5", "ht6", "hW", "hCa", "hCb", "hCc", "hCd"});
    CHECK(validate(t, Mode::Partial).ok());
    CHECK(g.provenance.size() == t.size());
    for (const Event& e : t.events()) CHECK(g.provenance.count(e.id) == 1);
    CHECK_FALSE(t.has_rel(Rel::co));
    CHECK_FALSE(t.has_rel(Rel::mo));
    CHECK_FALSE(t.has_rel(Rel::eo));

    std::map<std::string, std::pair<int, int>> rw;
    for (const Event& e : t.events()) {
        if (e.kind == EventKind::Write) ++rw[e.var].first;
        if (e.kind == EventKind::Read) ++rw[e.var].second;
    }
    for (const auto& [var, c] : rw) {
        INFO(var);
        CHECK(c == std::pair<int, int>{1, 1});
    }

    // G2 follows the clause-gadget layout: boxes x1, not x1, x2, not x2 | not x3, x3
    const std::string G = "s2_gadget_c2_e";
    const char* lane[] = {"hCa", "hCa", "hCa", "hCb", "hCb", "hCb", "hCb", "hCc", "hCc", "hCc", "hCc", "hCd", "hCd", "hCd"};
    const char* var[] = {"z2", "l2_1_1", "l2_1_2", "nl2_1_1", "nl2_1_2", "l2_2_1", "l2_2_2",
                         "nl2_2_1", "nl2_2_2", "nl2_3_1", "nl2_3_2", "l2_3_1", "l2_3_2", "z2"};
    for (int k = 1; k <= 14; ++k) {
        const Event& e = t.event(t.at(G + std::to_string(k)));
        CHECK(t.handlers()[e.handler] == lane[k - 1]);
        CHECK(e.var == var[k - 1]);
        CHECK(e.kind == (k == 14 || (k > 1 && k % 2 == 1) ? EventKind::Write : EventKind::Read));
        CHECK(g.provenance.at(e.id).role == GadgetRole::ClauseGadget);
        CHECK(g.provenance.at(e.id).index == std::array<int, 3>{2, k, 0});
    }
    CHECK(t.event(t.at(G + "1")).kind == EventKind::Read);
    CHECK(has_edge(t, Rel::rf, G + "14", G + "1"));
    CHECK(has_edge(t, Rel::rf, "s2_sand_x3_c2_b0_w", G + "10"));
    CHECK(has_edge(t, Rel::rf, G + "11", "s2_sand_x3_c2_b0_r"));
    CHECK(has_edge(t, Rel::rf, "s2_sand_x3_c2_b1_w", G + "12"));
    CHECK(has_edge(t, Rel::rf, G + "13", "s2_sand_x3_c2_b1_r"));
    CHECK(has_edge(t, Rel::po, "s2_sand_x3_c2_b0_w", "s2_sand_x3_c2_b0_r"));
    CHECK(has_edge(t, Rel::po, G + "10", G + "11"));
    CHECK(has_edge(t, Rel::po, G + "11", G + "12") == false);
    // two-literal G1 closes its cycle on hCc; gadgets are chained per handler
    CHECK(t.handlers()[t.event(t.at("s2_gadget_c1_e14")).handler] == "hCc");
    CHECK_FALSE(t.find("s2_gadget_c1_e10"));
    CHECK(has_edge(t, Rel::po, "s2_gadget_c1_e3", G + "1"));
    CHECK(has_edge(t, Rel::po, "s2_gadget_c1_e14", G + "8"));

    // x3 first occurs negated at position 2 of C1: the not-x3 row detours through hV,
    // the x3 row through ht5, both insert at ht2
    auto receiver = [&](const std::string& id) { return t.handlers()[t.event(t.at(id)).receiver]; };
    CHECK(receiver("s1_r6_c1_k1_post") == "hV");
    CHECK(receiver("s1_r6_c1_k2_post") == "ht2");
    CHECK(receiver("s1_r5_c1_k1_post") == "ht5");
    CHECK(receiver("s1_r5_c1_k2_post") == "ht2");
    CHECK(t.handlers()[t.event(t.at("s1_ins_x3_c1_b1_post")).handler] == "ht2");
    CHECK(t.handlers()[t.event(t.at("s1_ins_x3_c1_b0_post")).handler] == "ht2");
    // second occurrence at position 3 of C2: both rows hop through ht3 only
    CHECK(receiver("s1_r5_c2_k1_post") == "ht3");
    CHECK(receiver("s1_r6_c2_k1_post") == "ht3");
    CHECK(receiver("s1_r5_c2_k2_post") == "hV");
    // x1 does not occur in C1: one hop back to hV
    CHECK(receiver("s1_r1_c1_k1_post") == "hV");
    CHECK_FALSE(t.find("s1_r1_c1_k2_post"));
    CHECK(g.provenance.at("s1_r5_c1_k2_post").index == std::array<int, 3>{5, 1, 2});
    CHECK(g.provenance.at("s1_ins_x3_c1_b1_post").role == GadgetRole::MessageInsertion);
    CHECK(g.provenance.at("s2_sand_x3_c2_b0_w").role == GadgetRole::Sandwich);
    CHECK(g.provenance.at("s1_start_r1").index == std::array<int, 3>{1, 0, 0});

    CHECK_FALSE(assert_no_nesting(t).ok());
    CHECK(check_nonest(t).verdict == Verdict::Refused);
    CHECK_THROWS_AS(build_gadget(cnf(1, {{1}})), CnfError);
}

TEST_CASE("gadget without clauses") {
    GadgetTrace g = build_gadget(Cnf3BI{2, {}});
    CHECK(g.trace.size() == 8);   // four row starts and their end messages
    CHECK(check_oracle(g.trace).result.verdict == Verdict::Consistent);
}

TEST_CASE("provenance document") {
    GadgetTrace g = build_gadget(cnf(2, {{1, 2}}));
    auto doc = nlohmann::json::parse(provenance_json(g));
    REQUIRE(doc.size() == g.trace.size());
    CHECK(doc[0]["id"] == "s1_start_r1");
    CHECK(doc[0]["role"] == "PostSeqCell");
    CHECK(doc[0]["index"] == nlohmann::json::array({1, 0, 0}));
}

TEST_CASE("gadget consistency follows satisfiability") {
    SmtConfig cfg;
    cfg.solver_cmd = default_solver_cmd();
    for (const char* name : {"unsat_n4.cnf", "unsat_n5.cnf"}) {
        CheckResult r = check_smt(build_gadget(load_cnf(name)).trace, cfg);
        INFO(name << " " << r.detail);
        CHECK(r.verdict == Verdict::Inconsistent);
    }
    std::mt19937_64 rng(17);
    for (int k = 0; k < 12; ++k) {
        int n = 2 + k % 3;
        auto f = random_cnf3bi(rng, n, 1 + k % 4);
        if (!f) continue;
        REQUIRE(sat_bruteforce(*f));
        GadgetTrace g = build_gadget(*f);
        CheckResult r = check_smt(g.trace, cfg);
        INFO(to_dimacs(*f) << r.detail);
        REQUIRE(r.verdict == Verdict::Consistent);
        CHECK(check_witness(g.trace, *r.witness).empty());
    }
}

TEST_CASE("pruned oracle on small gadgets") {
    OracleConfig cfg;
    cfg.prune = true;
    for (const Cnf3BI& f : {cnf(2, {{1, 2}}), cnf(2, {{-1, 2}}), cnf(3, {{1, -2, 3}}), cnf(3, {{1, 2}, {-2, 3}})}) {
        OracleResult r = check_oracle(build_gadget(f).trace, cfg);
        INFO(to_dimacs(f) << r.result.detail);
        REQUIRE(r.result.verdict == Verdict::Consistent);
        CHECK(check_witness(build_gadget(f).trace, *r.result.witness).empty());
    }
}

TEST_CASE("nested posts sort three messages") {
    const std::set<std::array<int, 3>> reachable = {{1, 2, 3}, {2, 1, 3}, {2, 3, 1}};
    std::array<int, 3> order{1, 2, 3};
    SmtConfig smt;
    smt.solver_cmd = default_solver_cmd();
    do {
        TraceGraph t = sorting_trace(order);
        INFO(order[0] << order[1] << order[2]);
        REQUIRE(validate(t, Mode::Partial).ok());
        const Verdict expected = reachable.count(order) ? Verdict::Consistent : Verdict::Inconsistent;
        OracleConfig plain;
        plain.max_events = 64;
        OracleConfig pruned;
        pruned.prune = true;
        CHECK(check_oracle(t, plain).result.verdict == expected);
        CHECK(check_oracle(t, pruned).result.verdict == expected);
        CHECK(check_enum(t).verdict == expected);
        CHECK(check_smt(t, smt).verdict == expected);
        CHECK(check_nonest(t).verdict == Verdict::Refused);
    } while (std::next_permutation(order.begin(), order.end()));
}
