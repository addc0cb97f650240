#pragma once

// Trace export. Header: k,phi,Q,step_frob,step_riem,eta,wall_ns.
// NaN fields (no step yet, exact oracle) are written as empty cells.

#include <filesystem>
#include <iosfwd>

#include "cccp/dcsolver.hpp"

namespace cccp {

inline constexpr const char* kTraceHeader = "k,phi,Q,step_frob,step_riem,eta,wall_ns";

void write_trace_csv(std::ostream& out, const IterateTrace& trace);
void write_trace_csv_file(const std::filesystem::path& path, const IterateTrace& trace);

/// Reads back what write_trace_csv produced. Counters and stop reason are not
/// part of the format and come back default.
IterateTrace read_trace_csv(std::istream& in);

}  // namespace cccp
