#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "edcheck/trace.hpp"

namespace edcheck {

struct CorpusParams {
    int max_events = 10;
    int min_handlers = 2;
    int max_handlers = 4;
    int vars = 2;
    bool nesting = true;        // posts allowed inside posted messages
    double perturb = 0.3;       // chance of redirecting one rf or swapping two co-adjacent writes
    bool shuffle_file_order = true;
};

// Simulates a random run of abstract handlers with FIFO mailboxes and returns the
// partial trace it induces (mo and eo dropped). Unperturbed traces are consistent.
TraceGraph random_partial_trace(std::mt19937_64& rng, const CorpusParams& p = {});

// Mixed nested / non-nested corpus, deterministic in the seed.
std::vector<TraceGraph> small_corpus(std::uint64_t seed, int count, int max_events = 10);

// No-nesting family over handlers A, B, C with exactly 10 * rounds events. In round i,
// A writes a_i and posts to C, B reads a_i, writes b_i and posts to C; C's first
// message reads b_i and its second writes c_i, which A reads in round i + 1.
TraceGraph lockstep_trace(int rounds);

// True when some post sits inside a posted message.
bool has_nested_posts(const TraceGraph& t);

}  // namespace edcheck
