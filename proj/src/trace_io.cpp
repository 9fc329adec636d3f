#include "uigm/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace uigm {

namespace {

double parse_real(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("trace line " + std::to_string(line_no) + ": bad number '" + field + "'");
  return v;
}

long parse_integer(const std::string& field, std::size_t line_no) {
  long v = 0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("trace line " + std::to_string(line_no) + ": bad integer '" + field + "'");
  return v;
}

std::optional<double> parse_optional(const std::string& field, std::size_t line_no) {
  if (field.empty()) return std::nullopt;
  return parse_real(field, line_no);
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << kTraceHeader << '\n';
  for (const TraceRecord& r : trace) {
    out << r.k << ',' << r.inner_trials << ',' << format_real(r.L_k) << ','
        << format_real(r.A_k) << ',' << format_real(r.B_k) << ',';
    if (r.F_y) out << format_real(*r.F_y);
    out << ',';
    if (r.psi_star) out << format_real(*r.psi_star);
    out << ',' << format_real(r.E_k) << ',' << r.oracle_calls_cum << ','
        << format_real(r.delta_c_k) << '\n';
  }
}

void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_trace_csv(out, trace);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw ConfigError("unexpected trace header '" + line + "'");
  std::vector<TraceRecord> trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 10)
      throw ConfigError("trace line " + std::to_string(line_no) + ": expected 10 fields");
    TraceRecord r;
    r.k = static_cast<std::size_t>(parse_integer(f[0], line_no));
    r.inner_trials = static_cast<int>(parse_integer(f[1], line_no));
    r.L_k = parse_real(f[2], line_no);
    r.A_k = parse_real(f[3], line_no);
    r.B_k = parse_real(f[4], line_no);
    r.F_y = parse_optional(f[5], line_no);
    r.psi_star = parse_optional(f[6], line_no);
    r.E_k = parse_real(f[7], line_no);
    r.oracle_calls_cum = parse_integer(f[8], line_no);
    r.delta_c_k = parse_real(f[9], line_no);
    trace.push_back(std::move(r));
  }
  return trace;
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  return read_trace_csv(in);
}

}  // namespace uigm
