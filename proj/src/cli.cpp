#include "edcheck/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "edcheck/bench.hpp"
#include "edcheck/interpreter.hpp"
#include "edcheck/sat_gadgets.hpp"
#include "edcheck/trace_io.hpp"

namespace edcheck {

namespace {

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return ExitOk;
        case Verdict::Inconsistent: return ExitInconsistent;
        case Verdict::Timeout: return ExitTimeout;
        case Verdict::BackendError: return ExitBackend;
        case Verdict::Refused: return ExitUsage;
    }
    return ExitUsage;
}

std::string join_ids(const TraceGraph& t, const std::vector<EventId>& ids) {
    std::string s;
    for (EventId e : ids) s += (s.empty() ? "" : " ") + t.event(e).id;
    return s;
}

int cmd_validate(const std::string& path, bool full) {
    TraceGraph t = load_trace(path);
    ValidationReport r = validate(t, full ? Mode::Full : Mode::Partial);
    for (const Violation& v : r.violations) std::cerr << v.code << ": " << v.message << "\n";
    if (!r.ok()) {
        std::cout << "invalid\n";
        return ExitInconsistent;
    }
    if (full) {
        HbResult hb = hb_acyclic(t);
        if (!hb) {
            std::cout << "cyclic: " << join_ids(t, hb.cycle) << "\n";
            return ExitInconsistent;
        }
    }
    std::cout << "ok\n";
    return ExitOk;
}

int cmd_check(const std::string& path, const CheckerOptions& opt, const std::string& witness_out) {
    TraceGraph t = load_trace(path);
    CheckResult r = run_checker(t, opt);
    std::cout << to_string(r.verdict) << "\n";
    if (!r.detail.empty()) std::cerr << r.detail << "\n";
    if (r.verdict == Verdict::Inconsistent && !r.cycle.empty()) std::cerr << "cycle: " << join_ids(t, r.cycle) << "\n";
    if (r.verdict == Verdict::Consistent && r.witness && !witness_out.empty())
        write_file(witness_out, serialize_witness(t, *r.witness));
    return exit_code(r.verdict);
}

void write_trace(TraceGraph t, bool partial, const std::string& path) {
    if (partial) {
        t.remove_rel(Rel::mo);
        t.remove_rel(Rel::eo);
    }
    write_file(path, serialize_trace(t));
    std::cout << path << "\n";
}

int cmd_run(const std::string& program, std::optional<std::uint64_t> seed, int count, bool exhaustive,
            std::size_t depth, std::uint64_t max_steps, const std::string& out_dir, bool partial) {
    Program p = load_program(program);
    std::filesystem::create_directories(out_dir);
    const std::string stem = std::filesystem::path(program).stem().string();
    auto out = [&](const std::string& suffix) { return (std::filesystem::path(out_dir) / (stem + "_" + suffix + ".json")).string(); };
    if (exhaustive) {
        std::vector<Run> runs = run_exhaustive(p, depth, 100'000, max_steps);
        for (std::size_t k = 0; k < runs.size(); ++k) {
            std::ostringstream n;
            n << std::setw(4) << std::setfill('0') << k;
            write_trace(extract_trace(p, runs[k]), partial, out(n.str()));
        }
        return ExitOk;
    }
    for (int k = 0; k < count; ++k) {
        std::uint64_t s = seed.value_or(0) + static_cast<std::uint64_t>(k);
        write_trace(extract_trace(p, run(p, Schedule::seeded(s), max_steps)), partial, out(std::to_string(s)));
    }
    return ExitOk;
}

int cmd_gadget(const std::string& cnf, const std::string& out, const std::string& provenance) {
    GadgetTrace g = build_gadget(parse_dimacs_restricted(read_file(cnf)));
    write_file(out, serialize_trace(g.trace));
    if (!provenance.empty()) write_file(provenance, provenance_json(g));
    std::cout << g.trace.size() << " events, " << g.trace.handlers().size() << " handlers\n";
    return ExitOk;
}

int cmd_bench(const std::string& dir, const BenchConfig& cfg, const std::string& csv, bool latex) {
    if (!std::filesystem::is_directory(dir)) {
        std::cerr << "not a directory: " << dir << "\n";
        return ExitUsage;
    }
    BenchReport r = bench_run(dir, cfg);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    if (csv.empty())
        std::cout << bench_csv(r);
    else
        write_file(csv, bench_csv(r));
    if (latex) std::cout << bench_latex(r);
    return ExitOk;
}

std::vector<std::string> split_algos(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string a; std::getline(in, a, ',');)
        if (!a.empty()) out.push_back(a);
    return out;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Consistency checking for event-driven execution traces"};
    app.require_subcommand(1);

    std::string trace_path;
    bool full = false;
    auto* validate_cmd = app.add_subcommand("validate", "Check the well-formedness conditions of a trace");
    validate_cmd->add_option("trace", trace_path, "Trace file")->required();
    validate_cmd->add_flag("--full", full, "Require mo and eo and test happens-before acyclicity");

    CheckerOptions copt;
    std::string witness_out;
    long long timeout_ms = -1;
    bool no_fifo = false;
    auto* check_cmd = app.add_subcommand("check", "Decide whether a partial trace has a consistent extension");
    check_cmd->add_option("trace", trace_path, "Trace file")->required();
    check_cmd->add_option("--algo", copt.algo, "Checker")
        ->check(CLI::IsMember({"enum", "smt", "nonest", "oracle"}))
        ->capture_default_str();
    check_cmd->add_option("--witness", witness_out, "Write the witness here when consistent");
    check_cmd->add_option("--timeout-ms", timeout_ms, "Wall-clock limit, 0 for none");
    check_cmd->add_option("--solver-cmd", copt.solver_cmd, "Solver command for smt (default $EDCHECK_SOLVER_CMD or z3 -in)");
    check_cmd->add_flag("--no-fifo", no_fifo, "smt: drop the mailbox FIFO constraints");
    check_cmd->add_flag("--strict-eo", copt.strict_eo, "oracle: enumerate eo independently of mo");
    check_cmd->add_option("--budget", copt.budget, "enum: maximum acyclicity checks, 0 for none")->capture_default_str();

    std::string program, out_dir;
    std::optional<std::uint64_t> seed;
    int count = 1;
    bool exhaustive = false, partial = false;
    std::size_t depth = 12;
    std::uint64_t max_steps = 10'000;
    auto* run_cmd = app.add_subcommand("run", "Execute a program and write the traces of its runs");
    run_cmd->add_option("program", program, "Program file")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Scheduler seed");
    auto* count_opt = run_cmd->add_option("--count", count, "Number of consecutive seeds")->check(CLI::PositiveNumber);
    auto* exh_flag = run_cmd->add_flag("--exhaustive", exhaustive, "All runs up to --depth events");
    run_cmd->add_option("--depth", depth, "Event bound for --exhaustive")->capture_default_str();
    run_cmd->add_option("--max-steps", max_steps, "Step bound per run")->capture_default_str();
    run_cmd->add_option("--out-dir", out_dir, "Output directory")->required();
    run_cmd->add_flag("--partial", partial, "Drop mo and eo from the written traces");
    exh_flag->excludes(seed_opt)->excludes(count_opt);

    std::string cnf, gadget_out, provenance;
    auto* gadget_cmd = app.add_subcommand("gadget", "Build the trace encoding a restricted 3-SAT formula");
    gadget_cmd->add_option("--cnf", cnf, "DIMACS file")->required();
    gadget_cmd->add_option("--out", gadget_out, "Trace file to write")->required();
    gadget_cmd->add_option("--provenance", provenance, "Write event provenance JSON here");

    std::string bench_dir, algos = "enum,smt", csv;
    BenchConfig bcfg;
    long long bench_timeout = 120'000;
    bool latex = false;
    auto* bench_cmd = app.add_subcommand("bench", "Run checkers over a directory of traces");
    bench_cmd->add_option("--dir", bench_dir, "Trace directory")->required();
    bench_cmd->add_option("--algos", algos, "Comma-separated checkers")->capture_default_str();
    bench_cmd->add_option("--timeout-ms", bench_timeout, "Per-trace limit")->capture_default_str();
    bench_cmd->add_option("--csv", csv, "CSV output (default stdout)");
    bench_cmd->add_option("--solver-cmd", bcfg.solver_cmd, "Solver command for smt");
    bench_cmd->add_option("--workers", bcfg.workers, "Parallel workers")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_flag("--latex", latex, "Also print a LaTeX table to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ExitOk : ExitUsage;
    }

    try {
        if (*validate_cmd) return cmd_validate(trace_path, full);
        if (*check_cmd) {
            if (timeout_ms >= 0) copt.timeout = std::chrono::milliseconds(timeout_ms);
            else if (copt.algo == "smt") copt.timeout = std::chrono::milliseconds(120'000);
            copt.fifo = !no_fifo;
            return cmd_check(trace_path, copt, witness_out);
        }
        if (*run_cmd) return cmd_run(program, seed, count, exhaustive, depth, max_steps, out_dir, partial);
        if (*gadget_cmd) return cmd_gadget(cnf, gadget_out, provenance);
        if (*bench_cmd) {
            bcfg.algos = split_algos(algos);
            for (const auto& a : bcfg.algos)
                if (!known_algo(a)) {
                    std::cerr << "unknown algorithm: " << a << "\n";
                    return ExitUsage;
                }
            bcfg.timeout = std::chrono::milliseconds(bench_timeout);
            return cmd_bench(bench_dir, bcfg, csv, latex);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitUsage;
    }
    return ExitUsage;
}

}  // namespace edcheck
