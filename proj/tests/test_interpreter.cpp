#include "doctest.h"

#include <set>

#include "edcheck/interpreter.hpp"
#include "edcheck/trace_io.hpp"

using namespace edcheck;

namespace {

const char* const sample_programs[] = {"buyers", "consensus", "counting", "messageloop", "sparsemat", "sorting"};

Program sample(const std::string& name) { return load_program(std::string(EDCHECK_PROGRAM_DIR) + "/" + name + ".edp"); }

std::string parse_error(const std::string& text) {
    try {
        parse_program(text);
    } catch (const ProgramError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("program errors") {
    CHECK(parse_error("handler h\nmsg h m init\n  goto nowhere\n  last\nend\n").find("unknown label 'nowhere'") != std::string::npos);
    CHECK(parse_error("handler h a\nmsg h m init\n  a = 1\nend\n").find("must end with last") != std::string::npos);
    CHECK(parse_error("handler h\nmsg h m init\n  post h m\n  last\nend\n").find("cannot be posted") != std::string::npos);
    CHECK(parse_error("handler h\nmsg h m init\n  a = 1\n  last\nend\n").find("unknown variable or register 'a'") != std::string::npos);
    CHECK(parse_error("handler h a\nmsg h m init\n  a = b + 1\n  last\nend\n").find("unknown register 'b'") != std::string::npos);
    CHECK(parse_error("vars x\nhandler h x\n").find("shadows") != std::string::npos);
    CHECK(parse_error("handler h\n").find("no initial message") != std::string::npos);
    CHECK(parse_error("handler h\nmsg h m init\nL: last\nL: last\nend\n").find("duplicate label") != std::string::npos);
    CHECK(parse_error("vars x\nhandler h a\nmsg h m init\n  x = a + 1\n  last\nend\n").find("only be assigned a register") != std::string::npos);
    CHECK(parse_error("handler h\nmsg h m init\n  last\n").find("not closed") != std::string::npos);
    CHECK(parse_error("handler h\nhandler g\nmsg h m init\n  post g k\n  last\nend\nmsg h k\n  last\nend\nmsg g gi init\n  last\nend\n")
              .find("does not belong to g") != std::string::npos);
    for (const char* name : sample_programs) CHECK_NOTHROW(sample(name));
}

TEST_CASE("expressions") {
    Program p = parse_program("handler h a=7 b=-2 c\nmsg h m init\n  c = (a + b) * 3 - -1\n  c = a * b + 1 < 0\n  last\nend\n");
    const auto& code = p.messages[0].code;
    std::vector<std::int64_t> regs{7, -2, 0};
    CHECK(eval(p, code[0].expr, regs) == 16);
    CHECK(eval(p, code[1].expr, regs) == 1);
}

TEST_CASE("write, post and get steps") {
    Program p = parse_program(
        "vars x\nhandler h a=5\nhandler g\n"
        "msg h hm init\n  x = a\n  post g k1\n  post g k2\n  last\nend\n"
        "msg g gm init\n  last\nend\n"
        "msg g k1\n  last\nend\n"
        "msg g k2\n  last\nend\n");
    Configuration c = initial_configuration(p);
    CHECK_FALSE(enabled(p, c, 1));
    auto w = step(p, c, 0);
    REQUIRE(w);
    CHECK(w->kind == EventKind::Write);
    CHECK(w->val == 5);
    CHECK(c.vars[0] == 5);

    c.handlers[0].mcount = 3;
    auto post = step(p, c, 0);
    REQUIRE(post);
    CHECK(post->newmid == MsgId{0, 3});
    CHECK(c.handlers[0].mcount == 4);
    CHECK(c.handlers[1].mailbox.back() == std::pair<int, MsgId>{p.message_index("k1"), MsgId{0, 3}});
    step(p, c, 0);

    auto get = step(p, c, 1);
    REQUIRE(get);
    CHECK(get->kind == EventKind::Get);
    CHECK(get->msg == p.message_index("k1"));
    CHECK(c.handlers[1].msg == p.message_index("k1"));
    CHECK(c.handlers[1].pc == 0);
    CHECK(c.handlers[1].mailbox.size() == 1);
    CHECK_THROWS_AS(run(p, Schedule::replay({1})), ScheduleError);
}

TEST_CASE("trivial runs") {
    Program idle = parse_program("handler h\nhandler g\nmsg h a init\n  last\nend\nmsg g b init\n  last\nend\n");
    CHECK(run(idle, Schedule::seeded(1)).events.empty());
    Program one = parse_program("vars x\nhandler h a\nmsg h m init\n  x = a\n  last\nend\n");
    Run r = run(one, Schedule::seeded(1));
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == EventKind::Write);
    CHECK(r.events[0].val == 0);
}

TEST_CASE("extracted relations") {
    Program p = parse_program(
        "vars x\nhandler h1 a=1\nhandler h2 b\n"
        "msg h1 m1 init\n  x = a\n  last\nend\n"
        "msg h2 m2 init\n  b = x\n  last\nend\n");
    TraceGraph t = extract_trace(p, run(p, Schedule::replay({0, 1})));
    CHECK(t.pairs(Rel::rf) == std::vector<std::pair<EventId, EventId>>{{t.at("h1_0"), t.at("h2_0")}});

    Program q = parse_program(
        "handler s\nhandler r\n"
        "msg s sm init\n  post r k\n  post r k\n  last\nend\n"
        "msg r rm init\n  last\nend\n"
        "msg r k\n  last\nend\n");
    TraceGraph u = extract_trace(q, run(q, Schedule::replay({0, 0, 1, 1})));
    CHECK(u.pairs(Rel::mo) == std::vector<std::pair<EventId, EventId>>{{u.at("s_0"), u.at("s_1")}});
    CHECK(u.pairs(Rel::eo) == std::vector<std::pair<EventId, EventId>>{{u.at("r_0"), u.at("r_1")}});
    CHECK(u.pairs(Rel::pb) == std::vector<std::pair<EventId, EventId>>{{u.at("s_0"), u.at("r_0")}, {u.at("s_1"), u.at("r_1")}});
    CHECK(validate(u, Mode::Full).ok());
}

TEST_CASE("reads of initial values get an initial write") {
    Program p = parse_program("vars x=4\nhandler h a\nmsg h m init\n  a = x\n  x = a\n  last\nend\n");
    TraceGraph t = extract_trace(p, run(p, Schedule::seeded(3)));
    REQUIRE(t.find("_init_0"));
    CHECK(t.event(t.at("_init_0")).val == 4);
    CHECK(t.pairs(Rel::rf) == std::vector<std::pair<EventId, EventId>>{{t.at("_init_0"), t.at("h_0")}});
    CHECK(t.pairs(Rel::co) == std::vector<std::pair<EventId, EventId>>{{t.at("_init_0"), t.at("h_1")}});
    CHECK(validate(t, Mode::Full).ok());
}

TEST_CASE("seeded runs induce acyclic full traces") {
    for (const char* name : sample_programs) {
        Program p = sample(name);
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            Run r = run(p, Schedule::seeded(seed), 400);
            TraceGraph t = extract_trace(p, r);
            ValidationReport rep = validate(t, Mode::Full);
            INFO(name << " seed " << seed);
            CHECK(rep.ok());
            CHECK(hb_acyclic(t).acyclic);
        }
    }
}

TEST_CASE("mailboxes are FIFO") {
    for (const char* name : sample_programs) {
        Program p = sample(name);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Run r = run(p, Schedule::seeded(seed), 400);
            std::map<int, std::vector<MsgId>> posted, got;
            for (const RunEvent& e : r.events) {
                if (e.kind == EventKind::Post) posted[e.receiver].push_back(e.newmid);
                if (e.kind == EventKind::Get) got[e.handler].push_back(e.mid);
            }
            for (auto& [h, gs] : got) {
                REQUIRE(gs.size() <= posted[h].size());
                CHECK(std::equal(gs.begin(), gs.end(), posted[h].begin()));
            }
        }
    }
}

TEST_CASE("runs are deterministic in the seed") {
    Program p = sample("consensus");
    for (std::uint64_t seed = 0; seed < 10; ++seed)
        CHECK(serialize_trace(extract_trace(p, run(p, Schedule::seeded(seed), 300))) ==
              serialize_trace(extract_trace(p, run(p, Schedule::seeded(seed), 300))));
}

TEST_CASE("nested posts sort messages") {
    Program p = sample("sorting");
    std::vector<Run> runs = run_exhaustive(p, 64);
    std::set<std::vector<std::string>> orders;
    for (const Run& r : runs) {
        std::vector<std::string> order;
        for (const RunEvent& e : r.events)
            if (e.kind == EventKind::Get && e.handler == p.handler_index("h1") && p.messages[e.msg].name.size() == 2 &&
                p.messages[e.msg].name[0] == 'm')
                order.push_back(p.messages[e.msg].name);
        if (order.size() == 3) orders.insert(order);
        CHECK(hb_acyclic(extract_trace(p, r)).acyclic);
    }
    using V = std::vector<std::string>;
    CHECK(orders == std::set<V>{V{"m1", "m2", "m3"}, V{"m2", "m1", "m3"}, V{"m2", "m3", "m1"}});
}

TEST_CASE("exhaustive runs are distinct and bounded") {
    Program p = sample("buyers");
    std::vector<Run> runs = run_exhaustive(p, 5);
    std::set<std::string> seen;
    for (const Run& r : runs) {
        CHECK(r.events.size() <= 5);
        seen.insert(serialize_trace(extract_trace(p, r)));
    }
    CHECK(seen.size() == runs.size());
    CHECK(runs.size() > 1);
}
