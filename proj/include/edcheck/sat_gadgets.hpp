#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "edcheck/trace.hpp"

namespace edcheck {

struct Literal {
    int var = 0;   // 1-based
    bool positive = true;
    bool operator==(const Literal&) const = default;
};

// CNF where every clause has 2 or 3 literals over distinct variables and every
// variable occurs in at most 3 clauses.
struct Cnf3BI {
    int n = 0;
    std::vector<std::vector<Literal>> clauses;
};

class CnfError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One diagnostic per violated clause or variable; empty for a valid formula.
std::vector<std::string> restriction_violations(const Cnf3BI& f);

// Throws CnfError on malformed input or restriction violations.
Cnf3BI parse_dimacs_restricted(const std::string& text);
std::string to_dimacs(const Cnf3BI& f);

// Assignment indexed by variable - 1. Both throw CnfError for n > 24.
std::optional<std::vector<bool>> sat_bruteforce(const Cnf3BI& f);
std::optional<std::vector<bool>> sat_dpll(const Cnf3BI& f);
bool satisfies(const Cnf3BI& f, const std::vector<bool>& a);

// Clauses of 2 or 3 literals over variables that still have a free occurrence,
// random polarities; nullopt when n variables cannot fill m clauses.
std::optional<Cnf3BI> random_cnf3bi(std::mt19937_64& rng, int n, int m);

enum class GadgetRole { PostSeqCell, MessageInsertion, ClauseGadget, Sandwich };

const char* to_string(GadgetRole r);

// PostSeqCell: (row, column, hop); MessageInsertion and Sandwich: (var, clause, bit);
// ClauseGadget: (clause, position 1..14). Rows are 2i-1 for x_i and 2i for not x_i,
// column 0 is the start of a row.
struct Provenance {
    int stage = 1;
    GadgetRole role = GadgetRole::PostSeqCell;
    std::array<int, 3> index{};
};

struct GadgetTrace {
    TraceGraph trace;
    std::map<std::string, Provenance> provenance;   // by event id
};

// Partial trace (po, rf, pb) over the twelve handlers hV, ht1..ht6, hW, hCa..hCd
// that is consistent iff f is satisfiable. Requires a valid formula.
GadgetTrace build_gadget(const Cnf3BI& f);

std::string provenance_json(const GadgetTrace& g);

// Three messages m1, m2, m3 reach h1 through nested posts (m1 via h2 then h3,
// m2 and m3 via h3 then h2); rf edges force them to run on h1 in `order`
// (a permutation of 1, 2, 3). Consistent iff m2 runs before m3.
TraceGraph sorting_trace(const std::array<int, 3>& order);

}  // namespace edcheck
