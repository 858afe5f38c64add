#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "edcheck/trace.hpp"

namespace edcheck {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParseOptions {
    bool partial_only = false;   // reject mo/eo edges
};

// Structural parse only; run validate() for the trace conditions.
TraceGraph parse_trace(std::string_view text, const ParseOptions& opt = {});
std::string serialize_trace(const TraceGraph& t);

Witness parse_witness(std::string_view text, const TraceGraph& t);
std::string serialize_witness(const TraceGraph& t, const Witness& w);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

TraceGraph load_trace(const std::string& path, const ParseOptions& opt = {});

}  // namespace edcheck
