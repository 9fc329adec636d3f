#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uigm/solver.hpp"

namespace uigm {

/// Header of the trace CSV, in column order.
inline constexpr const char* kTraceHeader =
    "k,inner_trials,L_k,A_k,B_k,F_y,psi_star,E_k,oracle_calls_cum,delta_c_k";

/// One row per record, %.17g reals, empty fields for missing optionals.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);
void write_trace_csv(const std::string& path, std::span<const TraceRecord> trace);

/// Inverse of write_trace_csv; the non-serialized fields stay default.
/// Throws ConfigError on a bad header or malformed row.
std::vector<TraceRecord> read_trace_csv(std::istream& in);
std::vector<TraceRecord> read_trace_csv(const std::string& path);

/// Splits one CSV line on commas. No quoting.
std::vector<std::string> split_csv_line(const std::string& line);

/// %.17g
std::string format_real(double v);

}  // namespace uigm
