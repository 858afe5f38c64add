#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "edcheck/corpus.hpp"
#include "edcheck/oracle.hpp"
#include "edcheck/smt_checker.hpp"
#include "edcheck/trace_io.hpp"
#include "fixtures.hpp"

using namespace edcheck;
using namespace edcheck::fixtures;

namespace {

bool holds(const std::vector<int>& pos, Less l) { return pos[l.first] < pos[l.second]; }

// Some total order of the events satisfies every constraint of the query.
bool brute_force_sat(const SolverQuery& q) {
    const std::size_t n = q.vars.size();
    std::vector<int> order(n), pos(n);
    std::iota(order.begin(), order.end(), 0);
    do {
        for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<int>(i);
        bool ok = std::all_of(q.hard_edges.begin(), q.hard_edges.end(), [&](Less l) { return holds(pos, l); });
        for (const auto* g : {&q.serial, &q.post_orders})
            for (const auto& [a, b] : *g) ok = ok && (holds(pos, a) || holds(pos, b));
        for (const auto& [a, b] : q.fifo) ok = ok && holds(pos, a) == holds(pos, b);
        if (ok) return true;
    } while (std::next_permutation(order.begin(), order.end()));
    return false;
}

}  // namespace

TEST_CASE("empty trace") {
    SolverQuery q = encode(TraceGraph{});
    CHECK(q.vars.empty());
    CHECK(render_smtlib(q) == "(set-logic QF_IDL)\n(check-sat)\n");
    CheckResult r = check_smt(TraceGraph{});
    CHECK(r.verdict == Verdict::Consistent);
}

TEST_CASE("constraint counts") {
    SolverQuery q = encode(two_posts());
    CHECK(q.serial.size() == 1);
    CHECK(q.post_orders.size() == 1);
    CHECK(q.fifo.size() == 1);
    CHECK(q.hard_edges.size() == 3);
    CHECK(encode(two_posts(), false).fifo.empty());

    TraceGraph t;
    t.add_write("A", "a", "x", 1);
    t.add_read("B", "b", "x");
    t.add_edge(Rel::rf, "a", "b");
    std::string doc = render_smtlib(encode(t));
    CHECK(doc == "(set-logic QF_IDL)\n(declare-const t_a Int)\n(declare-const t_b Int)\n(assert (< t_a t_b))\n"
                 "(check-sat)\n(get-value (t_a t_b))\n");
}

TEST_CASE("symbols") {
    CHECK(timestamp_symbol("g1", 0) == "t_g1");
    CHECK(timestamp_symbol("w.1", 3) == "|t_w.1|");
    CHECK(timestamp_symbol("a|b", 3) == "|#3|");
    CHECK(timestamp_symbol("", 5) == "|t_|");
}

TEST_CASE("rendering goldens") {
    CHECK(render_smtlib(encode(two_posts())) == golden("two_posts.smt2"));
    CHECK(render_smtlib(encode(shared_memory())) == golden("shared_memory.smt2"));
}

TEST_CASE("solver round trip") {
    for (const TraceGraph& t : {two_posts(), shared_memory()}) {
        CheckResult r = check_smt(t);
        REQUIRE(r.verdict == Verdict::Consistent);
        CHECK(check_witness(t, *r.witness).empty());
    }
    TraceGraph t = two_posts();
    CheckResult r = check_smt(t);
    CHECK(r.witness->eo.at(t.handler_index("h")) == std::vector<EventId>{t.at("g1"), t.at("g2")});
}

TEST_CASE("FIFO couplings matter") {
    TraceGraph t = two_posts();
    t.add_read("h", "r", "x");
    t.add_write("h", "w", "x", 1);
    t.add_edge(Rel::po, "g1", "r");
    t.add_edge(Rel::po, "g2", "w");
    t.add_edge(Rel::rf, "w", "r");
    CHECK(check_smt(t).verdict == Verdict::Inconsistent);
    SmtConfig listing;
    listing.fifo = false;
    CheckResult r = check_smt(t, listing);
    CHECK(r.verdict == Verdict::Consistent);
    CHECK_FALSE(r.witness);
    CHECK_FALSE(r.detail.empty());
}

TEST_CASE("backend failures are not verdicts") {
    SmtConfig cfg;
    cfg.solver_cmd = "/nonexistent/solver -in";
    CheckResult r = check_smt(two_posts(), cfg);
    CHECK(r.verdict == Verdict::BackendError);
    CHECK(r.detail.find("cannot execute") != std::string::npos);
    cfg.solver_cmd = "echo hello";
    CHECK(check_smt(two_posts(), cfg).verdict == Verdict::BackendError);
    cfg.solver_cmd = "false";
    CHECK(check_smt(two_posts(), cfg).verdict == Verdict::BackendError);
    cfg.solver_cmd = "echo sat";
    CHECK(check_smt(two_posts(), cfg).verdict == Verdict::BackendError);
    cfg.solver_cmd = "sleep 5";
    cfg.timeout = std::chrono::milliseconds(200);
    CHECK(check_smt(two_posts(), cfg).verdict == Verdict::Timeout);
}

TEST_CASE("encoding is sat exactly when the oracle finds a witness") {
    auto corpus = small_corpus(21, 120, 8);
    for (const TraceGraph& t : corpus) {
        bool consistent = check_oracle(t).result.verdict == Verdict::Consistent;
        CHECK(brute_force_sat(encode(t)) == consistent);
    }
}

TEST_CASE("solver agrees with the oracle on random traces") {
    auto corpus = small_corpus(5, 150);
    for (const TraceGraph& t : corpus) {
        Verdict o = check_oracle(t).result.verdict;
        CheckResult r = check_smt(t);
        CHECK(r.verdict == o);
        if (r.verdict == Verdict::Consistent) CHECK(check_witness(t, *r.witness).empty());
    }
}
