#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edcheck/trace.hpp"

namespace edcheck {

class ProgramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ScheduleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- program model ----

enum class ExprOp { Const, Reg, Add, Sub, Mul, Eq, Ne, Lt, Le };

struct ExprNode {
    ExprOp op = ExprOp::Const;
    std::int64_t value = 0;   // Const
    int reg = -1;             // Reg
    int lhs = -1, rhs = -1;   // indices into Program::exprs
};

enum class InstrKind { Write, Read, Local, IfGoto, Goto, Post, Last };

struct Instr {
    InstrKind kind = InstrKind::Last;
    int var = -1;        // Write, Read
    int reg = -1;        // Write source, Read / Local target
    int expr = -1;       // Local value, IfGoto condition
    int target = -1;     // IfGoto, Goto: instruction index
    int handler = -1;    // Post receiver
    int msg = -1;        // Post message
    int line = 0;        // source line
};

struct MessageDef {
    std::string name;
    int handler = -1;
    bool initial = false;
    std::vector<Instr> code;
};

struct HandlerDef {
    std::string name;
    std::vector<std::string> regs;
    std::vector<std::int64_t> reg_init;
    int initial_msg = -1;
};

struct Program {
    std::vector<std::string> vars;
    std::vector<std::int64_t> var_init;
    std::vector<HandlerDef> handlers;
    std::vector<MessageDef> messages;
    std::vector<ExprNode> exprs;

    int handler_index(const std::string& name) const;
    int message_index(const std::string& name) const;
};

// Line-oriented program text; see README for the grammar.
Program parse_program(const std::string& text);
Program load_program(const std::string& path);

std::int64_t eval(const Program& p, int expr, const std::vector<std::int64_t>& regs);

// ---- configurations and steps ----

struct MsgId {
    int handler = -1;
    int count = -1;
    auto operator<=>(const MsgId&) const = default;
};

struct HandlerState {
    std::vector<std::int64_t> regs;
    std::deque<std::pair<int, MsgId>> mailbox;   // (message, mid), oldest first
    int msg = -1;                                // message being executed
    int pc = 0;
    MsgId mid;
    int mcount = 1;
};

struct Configuration {
    std::vector<std::int64_t> vars;
    std::vector<HandlerState> handlers;
};

struct RunEvent {
    int handler = -1;
    EventKind kind = EventKind::Write;
    int var = -1;
    std::int64_t val = 0;
    int receiver = -1;   // Post
    int msg = -1;        // Post: posted message; Get: message started
    MsgId mid;           // message instance the event belongs to
    MsgId newmid;        // Post: instance created
};

Configuration initial_configuration(const Program& p);

bool enabled(const Program& p, const Configuration& c, int h);

// The next instruction of h produces an event (or h is not enabled).
bool at_event(const Program& p, const Configuration& c, int h);

// Applies one transition of handler h; throws ScheduleError if h is not enabled.
std::optional<RunEvent> step(const Program& p, Configuration& c, int h);

// ---- runs ----

struct Schedule {
    enum class Mode { Seeded, Replay } mode = Mode::Seeded;
    std::uint64_t seed = 0;
    std::vector<int> decisions;   // Replay: handler per step

    static Schedule seeded(std::uint64_t s) { return {Mode::Seeded, s, {}}; }
    static Schedule replay(std::vector<int> d) { return {Mode::Replay, 0, std::move(d)}; }
};

struct Run {
    std::vector<RunEvent> events;
    Configuration final;
    std::uint64_t steps = 0;
};

Run run(const Program& p, const Schedule& s, std::uint64_t max_steps = 10'000);

// All runs with at most `depth` events, by depth-first search over which handler
// produces the next event; local steps are taken eagerly. Runs that stop early
// (no handler enabled) are included. At most max_runs are returned.
std::vector<Run> run_exhaustive(const Program& p, std::size_t depth, std::size_t max_runs = 100'000,
                                std::uint64_t max_local_steps = 10'000);

// Full trace induced by the run. Variables read before any write get an explicit
// initial write in an extra handler "_init". Event ids are <handler>_<n>.
TraceGraph extract_trace(const Program& p, const Run& r);

}  // namespace edcheck
