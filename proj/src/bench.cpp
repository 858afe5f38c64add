#include "edcheck/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <thread>

#include "edcheck/enum_checker.hpp"
#include "edcheck/nonest_checker.hpp"
#include "edcheck/oracle.hpp"
#include "edcheck/smt_checker.hpp"
#include "edcheck/trace_io.hpp"

namespace edcheck {

bool known_algo(const std::string& algo) {
    return algo == "enum" || algo == "smt" || algo == "nonest" || algo == "oracle";
}

CheckResult run_checker(const TraceGraph& t, const CheckerOptions& opt) {
    if (opt.algo == "enum") {
        EnumConfig c;
        c.saturate = opt.saturate;
        c.budget = opt.budget;
        c.timeout = opt.timeout;
        return check_enum(t, c);
    }
    if (opt.algo == "smt") {
        SmtConfig c;
        c.solver_cmd = opt.solver_cmd.empty() ? default_solver_cmd() : opt.solver_cmd;
        if (opt.timeout.count() > 0) c.timeout = opt.timeout;
        c.fifo = opt.fifo;
        return check_smt(t, c);
    }
    if (opt.algo == "nonest") {
        NonestConfig c;
        c.timeout = opt.timeout;
        return check_nonest(t, c);
    }
    if (opt.algo == "oracle") {
        OracleConfig c;
        c.strict_eo = opt.strict_eo;
        c.max_events = 64;
        return check_oracle(t, c).result;
    }
    CheckResult r;
    r.verdict = Verdict::Refused;
    r.detail = "unknown algorithm '" + opt.algo + "'";
    return r;
}

std::string bench_group(const std::string& filename) {
    std::string stem = std::filesystem::path(filename).stem().string();
    std::size_t end = stem.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
    if (end < stem.size() && end > 1 && (stem[end - 1] == '_' || stem[end - 1] == '-')) return stem.substr(0, end - 1);
    return stem;
}

namespace {

struct Loaded {
    std::string group;
    TraceGraph trace;
    std::size_t messages = 0;
};

struct Outcome {
    Verdict verdict = Verdict::Refused;
    double seconds = 0;
    std::string detail;
};

}  // namespace

BenchReport bench_run(const std::string& dir, const BenchConfig& cfg) {
    namespace fs = std::filesystem;
    BenchReport report;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());

    std::vector<Loaded> traces;
    for (const auto& f : files) {
        try {
            Loaded l{bench_group(f), load_trace(f), 0};
            for (const Event& e : l.trace.events()) l.messages += e.kind == EventKind::Get;
            traces.push_back(std::move(l));
        } catch (const std::exception& e) {
            report.warnings.push_back("skipping " + f + ": " + e.what());
        }
    }

    const std::size_t na = cfg.algos.size();
    std::vector<Outcome> out(traces.size() * na);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job; (job = next++) < out.size();) {
            CheckerOptions opt;
            opt.algo = cfg.algos[job % na];
            opt.timeout = cfg.timeout;
            opt.solver_cmd = cfg.solver_cmd;
            const auto start = std::chrono::steady_clock::now();
            CheckResult r;
            try {
                r = run_checker(traces[job / na].trace, opt);
            } catch (const std::exception& e) {
                r.verdict = Verdict::BackendError;
                r.detail = e.what();
            }
            out[job] = {r.verdict, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(),
                        r.detail};
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < std::max(1u, cfg.workers); ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < traces.size(); ++i) groups[traces[i].group].push_back(i);
    for (const auto& [name, members] : groups)
        for (std::size_t a = 0; a < na; ++a) {
            BenchRow row;
            row.benchmark = name;
            row.algo = cfg.algos[a];
            double total = 0;
            std::size_t timed = 0;
            for (std::size_t i : members) {
                const Loaded& l = traces[i];
                row.events = std::max(row.events, l.trace.size());
                row.messages = std::max(row.messages, l.messages);
                row.handlers = std::max(row.handlers, l.trace.handlers().size());
                const Outcome& o = out[i * na + a];
                if (o.verdict == Verdict::Refused || o.verdict == Verdict::BackendError) {
                    ++row.excluded;
                    report.warnings.push_back(row.algo + " on " + files[i] + ": " + to_string(o.verdict) + ": " + o.detail);
                    continue;
                }
                ++row.traces;
                if (o.verdict == Verdict::Timeout) {
                    ++row.timeouts;
                    continue;
                }
                ++(o.verdict == Verdict::Consistent ? row.consistent : row.inconsistent);
                total += o.seconds;
                ++timed;
            }
            row.mean_time_s = timed ? total / static_cast<double>(timed) : std::nan("");
            report.rows.push_back(row);
        }
    return report;
}

const char* const bench_csv_header = "benchmark,algo,E,M,H,T,consistent,timeouts,mean_time_s";

namespace {

std::string seconds(double s) {
    if (std::isnan(s)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", s);
    return buf;
}

}  // namespace

std::string bench_csv(const BenchReport& r) {
    std::string s = std::string(bench_csv_header) + "\n";
    for (const BenchRow& row : r.rows)
        s += row.benchmark + "," + row.algo + "," + std::to_string(row.events) + "," + std::to_string(row.messages) + "," +
             std::to_string(row.handlers) + "," + std::to_string(row.traces) + "," + std::to_string(row.consistent) + "," +
             std::to_string(row.timeouts) + "," + seconds(row.mean_time_s) + "\n";
    return s;
}

std::string bench_latex(const BenchReport& r) {
    std::string s =
        "\\begin{tabular}{lrrrrlrrr}\n\\hline\n"
        "Benchmark & \\#E & \\#M & \\#H & \\#T & Algorithm & Consistent & Timeouts & Time (s) \\\\\n\\hline\n";
    for (const BenchRow& row : r.rows) {
        std::string name;
        for (char c : row.benchmark) name += c == '_' ? std::string("\\_") : std::string(1, c);
        std::string t = seconds(row.mean_time_s);
        s += name + " & " + std::to_string(row.events) + " & " + std::to_string(row.messages) + " & " +
             std::to_string(row.handlers) + " & " + std::to_string(row.traces) + " & " + row.algo + " & " +
             std::to_string(row.consistent) + " & " + std::to_string(row.timeouts) + " & " + (t.empty() ? "--" : t) +
             " \\\\\n";
    }
    return s + "\\hline\n\\end{tabular}\n";
}

}  // namespace edcheck
