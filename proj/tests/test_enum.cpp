#include "doctest.h"

#include <algorithm>

#include "edcheck/corpus.hpp"
#include "edcheck/enum_checker.hpp"
#include "edcheck/oracle.hpp"

using namespace edcheck;

namespace {

// Two senders each post one message to h; m1 writes x, m2 reads it.
TraceGraph rf_between_messages() {
    TraceGraph t;
    t.add_post("A", "p1", "h");
    t.add_post("B", "p2", "h");
    t.add_get("h", "g1");
    t.add_write("h", "w", "x", 1);
    t.add_get("h", "g2");
    t.add_read("h", "r", "x");
    t.add_edge(Rel::po, "g1", "w");
    t.add_edge(Rel::po, "g2", "r");
    t.add_edge(Rel::pb, "p1", "g1");
    t.add_edge(Rel::pb, "p2", "g2");
    t.add_edge(Rel::rf, "w", "r");
    return t;
}

bool before(const std::vector<EventId>& seq, EventId a, EventId b) {
    auto ia = std::find(seq.begin(), seq.end(), a), ib = std::find(seq.begin(), seq.end(), b);
    return ia != seq.end() && ib != seq.end() && ia < ib;
}

// Every committed pair is ordered the same way in every witness the oracle finds.
void check_committed_in_all_witnesses(const TraceGraph& t) {
    SaturationResult s = saturate(t);
    OracleConfig cfg;
    cfg.all_witnesses = true;
    OracleResult o = check_oracle(t, cfg);
    if (o.result.verdict != Verdict::Consistent) return;
    REQUIRE_FALSE(s.inconsistent);
    for (const Witness& w : o.witnesses) {
        for (auto [p, q] : s.state.committed_mo) CHECK(before(w.mo.at(t.event(p).receiver), p, q));
        for (auto [a, b] : s.state.committed_eo) CHECK(before(w.eo.at(t.event(a).handler), a, b));
    }
}

}  // namespace

TEST_CASE("empty trace") {
    CheckResult r = check_enum(TraceGraph{});
    CHECK(r.verdict == Verdict::Consistent);
    REQUIRE(r.witness);
    CHECK(r.witness->mo.empty());
    CHECK(r.work == 1);
}

TEST_CASE("static cycle is rejected before saturation") {
    TraceGraph t;
    t.add_write("A", "w1", "x", 1);
    t.add_read("A", "r", "x");
    t.add_write("A", "w2", "x", 2);
    t.add_edge(Rel::po, "w1", "r");
    t.add_edge(Rel::po, "r", "w2");
    t.add_edge(Rel::rf, "w2", "r");
    t.add_edge(Rel::co, "w1", "w2");
    SaturationResult s = saturate(t);
    CHECK(s.inconsistent);
    CHECK(s.cycle.size() == 2);
    CheckResult r = check_enum(t);
    CHECK(r.verdict == Verdict::Inconsistent);
    CHECK(r.work == 0);
}

TEST_CASE("write-read between messages fixes their order") {
    TraceGraph t = rf_between_messages();
    SaturationResult s = saturate(t);
    REQUIRE_FALSE(s.inconsistent);
    CHECK(s.state.committed_eo == EdgeSet{{t.at("g1"), t.at("g2")}});
    CHECK(s.state.committed_mo == EdgeSet{{t.at("p1"), t.at("p2")}});
    check_committed_in_all_witnesses(t);
}

TEST_CASE("sender program order propagates to execution order") {
    TraceGraph t;
    t.add_post("A", "p1", "h");
    t.add_post("A", "p2", "h");
    t.add_get("h", "g1");
    t.add_get("h", "g2");
    t.add_edge(Rel::po, "p1", "p2");
    t.add_edge(Rel::pb, "p1", "g1");
    t.add_edge(Rel::pb, "p2", "g2");
    SaturationResult s = saturate(t);
    CHECK(s.state.committed_eo == EdgeSet{{t.at("g1"), t.at("g2")}});
    check_committed_in_all_witnesses(t);

    // m2 writes what m1 reads: FIFO makes that impossible
    t.add_read("h", "r", "x");
    t.add_write("h", "w", "x", 1);
    t.add_edge(Rel::po, "g1", "r");
    t.add_edge(Rel::po, "g2", "w");
    t.add_edge(Rel::rf, "w", "r");
    CHECK(saturate(t).inconsistent);
    CHECK(check_oracle(t).result.verdict == Verdict::Inconsistent);
    EnumConfig plain;
    plain.saturate = false;
    CHECK(check_enum(t, plain).verdict == Verdict::Inconsistent);
}

TEST_CASE("witness is valid") {
    TraceGraph t = rf_between_messages();
    CheckResult r = check_enum(t);
    REQUIRE(r.verdict == Verdict::Consistent);
    CHECK(check_witness(t, *r.witness).empty());
}

TEST_CASE("budget exhaustion is a timeout") {
    // FIFO conflict on h plus three independent posts to k: 6 assignments, all cyclic
    TraceGraph t;
    t.add_post("A", "p1", "h");
    t.add_post("A", "p2", "h");
    t.add_get("h", "g1");
    t.add_read("h", "r", "x");
    t.add_get("h", "g2");
    t.add_write("h", "w", "x", 1);
    t.add_edge(Rel::po, "p1", "p2");
    t.add_edge(Rel::po, "g1", "r");
    t.add_edge(Rel::po, "g2", "w");
    t.add_edge(Rel::pb, "p1", "g1");
    t.add_edge(Rel::pb, "p2", "g2");
    t.add_edge(Rel::rf, "w", "r");
    for (int i = 0; i < 3; ++i) t.add_post("s" + std::to_string(i), "q" + std::to_string(i), "k");
    EnumConfig cfg;
    cfg.saturate = false;
    cfg.budget = 0;
    CheckResult full = check_enum(t, cfg);
    CHECK(full.verdict == Verdict::Inconsistent);
    CHECK(full.work == 6);
    cfg.budget = 3;
    CheckResult cut = check_enum(t, cfg);
    CHECK(cut.verdict == Verdict::Timeout);
    CHECK(cut.work == 3);
    CHECK(check_enum(t).work == 0);
}

TEST_CASE("agrees with the oracle on random traces") {
    auto corpus = small_corpus(7, 300);
    int consistent = 0;
    for (const TraceGraph& t : corpus) {
        Verdict o = check_oracle(t).result.verdict;
        CheckResult e = check_enum(t);
        CHECK(e.verdict == o);
        EnumConfig plain;
        plain.saturate = false;
        CheckResult p = check_enum(t, plain);
        CHECK(p.verdict == o);
        if (e.verdict == Verdict::Consistent) {
            ++consistent;
            CHECK(check_witness(t, *e.witness).empty());
        }
        CHECK(e.work <= p.work);
        check_committed_in_all_witnesses(t);
    }
    CHECK(consistent > 50);
    CHECK(consistent < 290);
}
