#include "cccp/trace_csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cccp/matrix_io.hpp"

namespace cccp {

namespace {

void cell(std::ostream& out, double v) {
  if (!std::isnan(v)) out << format_double(v);
}

double parse_cell(const std::string& s, long line) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::IoError,
                "trace csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

}  // namespace

void write_trace_csv(std::ostream& out, const IterateTrace& trace) {
  out << kTraceHeader << '\n';
  for (const IterateRecord& r : trace.records) {
    out << r.k << ',';
    cell(out, r.phi);
    out << ',';
    cell(out, r.surrogate);
    out << ',';
    cell(out, r.step_frob);
    out << ',';
    cell(out, r.step_riem);
    out << ',';
    cell(out, r.eta);
    out << ',' << r.wall_ns << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "trace csv: write failed");
}

void write_trace_csv_file(const std::filesystem::path& path, const IterateTrace& trace) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  write_trace_csv(f, trace);
}

IterateTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw Error(ErrorKind::IoError, "trace csv: missing or wrong header");
  }
  IterateTrace trace;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) {
      throw Error(ErrorKind::IoError, "trace csv line " + std::to_string(lineno) + ": expected 7 cells");
    }
    IterateRecord r;
    r.k = static_cast<long>(parse_cell(cells[0], lineno));
    r.phi = parse_cell(cells[1], lineno);
    r.surrogate = parse_cell(cells[2], lineno);
    r.step_frob = parse_cell(cells[3], lineno);
    r.step_riem = parse_cell(cells[4], lineno);
    r.eta = parse_cell(cells[5], lineno);
    r.wall_ns = static_cast<std::int64_t>(parse_cell(cells[6], lineno));
    trace.records.push_back(r);
  }
  return trace;
}

}  // namespace cccp
