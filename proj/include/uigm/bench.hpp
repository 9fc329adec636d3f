#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uigm/oracles.hpp"
#include "uigm/problems.hpp"

namespace uigm::bench {

/// Parsed experiment file. Format (INI):
///
///   [problem]
///   id = quad10d          ; registered problem id
///   n = 0                 ; 0 keeps the problem's default size
///   seed = 1
///   lambda = 0.1
///
///   [solver]
///   epsilon = 1e-6
///   L0 = 1
///   max_outer = 2000
///   max_inner = 60
///   delta_pu = 0          ; used when [sweep] has no delta_pu list
///
///   [sweep]
///   p = 1, 1.5, 2
///   delta_u = 0, 0.01     ; value noise bound delta1 of the noise wrapper
///   delta_pu = 0
///   noise = adversarial_sign
///   anchor = center       ; center | optimum, reference point of the noise
///
///   [output]
///   dir = out
///   timing = true         ; false leaves wall_ms empty for byte-identical output
///   fit_window = 20, 2000 ; optional, default [max(10, 0.2 k_max), 0.8 k_max]
struct ExperimentConfig {
  std::string problem_id;
  ProblemParams params;
  SolverConfig solver;
  std::vector<double> p{2.0};
  std::vector<double> delta_u{0.0};
  std::vector<double> delta_pu{0.0};
  std::vector<NoiseMode> noise{NoiseMode::zero};
  bool anchor_at_optimum = false;
  std::string output_dir = ".";
  bool timing = true;
  std::optional<std::pair<double, double>> fit_window;

  /// Throws ConfigError for values outside their documented ranges.
  void validate() const;
};

ExperimentConfig load_config(const std::string& path);

/// Output directory after the UIGM_OUTPUT_DIR override.
std::string resolve_output_dir(const ExperimentConfig& config);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  std::size_t points = 0;
  bool available = false;  ///< false when fewer than 5 usable points remain
};

/// (k, gap) series.
using GapSeries = std::vector<std::pair<double, double>>;

GapSeries gap_series(std::span<const TraceRecord> trace, double F_star);

/// Default window [max(10, 0.2 k_max), 0.8 k_max].
std::pair<double, double> default_fit_window(double k_max);

/// Least squares of log gap on log k over points with k in [lo, hi]. The
/// window is cut at the first nonpositive gap.
RateFit fit_rate(const GapSeries& series, std::pair<double, double> window);

struct FloorEstimate {
  double floor = 0.0;  ///< min over k of the gap
  double k_at = 0.0;
  /// False when the minimum falls in the last tenth of the series while the
  /// gap is still falling there.
  bool reliable = true;
};

FloorEstimate error_floor(const GapSeries& series);

struct Cell {
  std::size_t index = 0;
  double p = 2.0;
  double delta_u = 0.0;
  double delta_pu = 0.0;
  NoiseMode noise = NoiseMode::zero;
};

std::vector<Cell> expand_cells(const ExperimentConfig& config);

struct CellResult {
  Cell cell;
  std::string problem_id;
  double F_star = 0.0;
  std::optional<double> nu;
  std::optional<double> final_gap;
  RateFit fit;
  std::optional<FloorEstimate> floor;
  long oracle_calls = 0;
  std::optional<double> wall_ms;
  std::string status = "ok";  ///< "ok" or the error message
  std::vector<TraceRecord> trace;
};

/// Runs one cell without touching the file system.
CellResult run_cell(const ExperimentConfig& config, const RegisteredProblem& problem,
                    const Cell& cell);

/// Runs all cells (in parallel), writes trace_NNN.csv per cell and
/// summary.csv into the output directory.
std::vector<CellResult> run_sweep(const ExperimentConfig& config);

/// Summary columns: problem_id,p,nu,delta_u,delta_pu,final_gap,slope,
/// r_squared,oracle_calls,wall_ms,floor,floor_reliable,status.
inline constexpr const char* kSummaryHeader =
    "problem_id,p,nu,delta_u,delta_pu,final_gap,slope,r_squared,oracle_calls,wall_ms,floor,"
    "floor_reliable,status";

void write_summary_csv(const std::string& path, std::span<const CellResult> results);

struct SummaryRow {
  std::string problem_id;
  double p = 0.0;
  std::optional<double> nu;
  double delta_u = 0.0;
  double delta_pu = 0.0;
  std::optional<double> final_gap;
  std::optional<double> slope;
  std::optional<double> r_squared;
  long oracle_calls = 0;
  std::optional<double> wall_ms;
  std::optional<double> floor;
  bool floor_reliable = false;
  std::string status;
};

std::vector<SummaryRow> read_summary_csv(const std::string& path);

/// gap_vs_k.csv, floor_vs_p.csv, calls_per_iteration.csv.
void emit_plotdata(const std::string& dir, std::span<const CellResult> results);

/// Loads the config, runs the sweep, writes all files. Returns 0 unless every
/// cell failed.
int run_experiment(const std::string& config_path);

}  // namespace uigm::bench
