#include "uigm/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "uigm/trace_io.hpp"

namespace uigm::bench {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("'" + key + "': not a number: '" + text + "'");
  return v;
}

long to_integer(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("'" + key + "': not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("'" + key + "': not a boolean: '" + text + "'");
}

std::vector<std::string> to_list(const std::string& text) {
  std::vector<std::string> out;
  for (const std::string& f : split_csv_line(text)) {
    const std::string t = trim(f);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> to_reals(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const std::string& f : to_list(text)) out.push_back(to_real(f, key));
  if (out.empty()) throw ConfigError("'" + key + "': empty list");
  return out;
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

void require_keys(const pt::ptree& section, const std::string& name,
                  const std::set<std::string>& allowed) {
  for (const auto& [key, value] : section)
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  solver.validate();
  const auto ids = registered_problem_ids();
  if (std::find(ids.begin(), ids.end(), problem_id) == ids.end())
    throw ConfigError("unknown problem id '" + problem_id + "'");
  for (double v : p)
    if (!(v >= 1.0 && v <= 2.0)) throw ConfigError("sweep p must lie in [1, 2]");
  for (double v : delta_u)
    if (!(v >= 0.0)) throw ConfigError("sweep delta_u must be nonnegative");
  for (double v : delta_pu)
    if (!(v >= 0.0)) throw ConfigError("sweep delta_pu must be nonnegative");
  if (p.empty() || delta_u.empty() || delta_pu.empty() || noise.empty())
    throw ConfigError("sweep lists must not be empty");
  if (fit_window) {
    if (!(fit_window->first >= 10.0)) throw ConfigError("fit_window must start at k >= 10");
    if (!(fit_window->second > fit_window->first)) throw ConfigError("fit_window must be increasing");
  }
}

ExperimentConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [name, section] : tree)
    if (name != "problem" && name != "solver" && name != "sweep" && name != "output")
      throw ConfigError("unknown section '" + name + "'");

  ExperimentConfig c;
  const pt::ptree empty;
  const pt::ptree& problem = tree.get_child("problem", empty);
  const pt::ptree& solver = tree.get_child("solver", empty);
  const pt::ptree& sweep = tree.get_child("sweep", empty);
  const pt::ptree& output = tree.get_child("output", empty);
  require_keys(problem, "problem", {"id", "n", "seed", "lambda"});
  require_keys(solver, "solver", {"epsilon", "L0", "max_outer", "max_inner", "delta_pu", "p"});
  require_keys(sweep, "sweep", {"p", "delta_u", "delta_pu", "noise", "anchor"});
  require_keys(output, "output", {"dir", "timing", "fit_window"});

  const auto id = problem.get_optional<std::string>("id");
  if (!id) throw ConfigError("missing problem.id");
  c.problem_id = trim(*id);
  if (auto v = problem.get_optional<std::string>("n")) c.params.n = to_integer(*v, "problem.n");
  if (auto v = problem.get_optional<std::string>("seed"))
    c.params.seed = static_cast<std::uint64_t>(to_integer(*v, "problem.seed"));
  if (auto v = problem.get_optional<std::string>("lambda"))
    c.params.lambda = to_real(*v, "problem.lambda");

  if (auto v = solver.get_optional<std::string>("epsilon"))
    c.solver.epsilon = to_real(*v, "solver.epsilon");
  if (auto v = solver.get_optional<std::string>("L0")) c.solver.L0 = to_real(*v, "solver.L0");
  if (auto v = solver.get_optional<std::string>("max_outer")) {
    const long k = to_integer(*v, "solver.max_outer");
    if (k < 0) throw ConfigError("solver.max_outer must be nonnegative");
    c.solver.max_outer = static_cast<std::size_t>(k);
  }
  if (auto v = solver.get_optional<std::string>("max_inner"))
    c.solver.max_inner = static_cast<int>(to_integer(*v, "solver.max_inner"));
  if (auto v = solver.get_optional<std::string>("delta_pu"))
    c.delta_pu = {to_real(*v, "solver.delta_pu")};
  if (auto v = solver.get_optional<std::string>("p")) c.p = {to_real(*v, "solver.p")};

  if (auto v = sweep.get_optional<std::string>("p")) c.p = to_reals(*v, "sweep.p");
  if (auto v = sweep.get_optional<std::string>("delta_u"))
    c.delta_u = to_reals(*v, "sweep.delta_u");
  if (auto v = sweep.get_optional<std::string>("delta_pu"))
    c.delta_pu = to_reals(*v, "sweep.delta_pu");
  if (auto v = sweep.get_optional<std::string>("noise")) {
    c.noise.clear();
    for (const std::string& name : to_list(*v)) c.noise.push_back(parse_noise_mode(name));
  }
  if (auto v = sweep.get_optional<std::string>("anchor")) {
    const std::string a = trim(*v);
    if (a == "optimum")
      c.anchor_at_optimum = true;
    else if (a != "center")
      throw ConfigError("sweep.anchor must be 'center' or 'optimum'");
  }

  if (auto v = output.get_optional<std::string>("dir")) c.output_dir = trim(*v);
  if (auto v = output.get_optional<std::string>("timing")) c.timing = to_bool(*v, "output.timing");
  if (auto v = output.get_optional<std::string>("fit_window")) {
    const auto w = to_reals(*v, "output.fit_window");
    if (w.size() != 2) throw ConfigError("output.fit_window needs two values");
    c.fit_window = std::make_pair(w[0], w[1]);
  }
  c.validate();
  return c;
}

std::string resolve_output_dir(const ExperimentConfig& config) {
  if (const char* env = std::getenv("UIGM_OUTPUT_DIR"); env && *env) return env;
  return config.output_dir;
}

GapSeries gap_series(std::span<const TraceRecord> trace, double F_star) {
  GapSeries out;
  out.reserve(trace.size());
  for (const TraceRecord& r : trace)
    if (r.F_y) out.emplace_back(static_cast<double>(r.k), *r.F_y - F_star);
  return out;
}

std::pair<double, double> default_fit_window(double k_max) {
  return {std::max(10.0, 0.2 * k_max), 0.8 * k_max};
}

RateFit fit_rate(const GapSeries& series, std::pair<double, double> window) {
  RateFit fit;
  fit.k_lo = window.first;
  fit.k_hi = window.second;
  std::vector<double> xs, ys;
  for (const auto& [k, gap] : series) {
    if (k < window.first || k > window.second || k <= 0.0) continue;
    if (!(gap > 0.0)) {
      fit.k_hi = k;
      break;
    }
    xs.push_back(std::log(k));
    ys.push_back(std::log(gap));
  }
  fit.points = xs.size();
  if (fit.points < 5) return fit;

  const double n = static_cast<double>(fit.points);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.available = true;
  return fit;
}

FloorEstimate error_floor(const GapSeries& series) {
  FloorEstimate out;
  if (series.empty()) {
    out.floor = std::numeric_limits<double>::quiet_NaN();
    out.reliable = false;
    return out;
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < series.size(); ++i)
    if (series[i].second < series[arg].second) arg = i;
  out.floor = series[arg].second;
  out.k_at = series[arg].first;
  if (series.size() < 10) {
    out.reliable = false;
    return out;
  }
  const std::size_t tail_start = series.size() - series.size() / 10;
  if (arg >= tail_start) {
    const double k_max = series.back().first;
    const RateFit tail = fit_rate(series, {std::max(1.0, 0.8 * k_max), k_max});
    if (!tail.available || tail.slope < -0.1) out.reliable = false;
  }
  return out;
}

std::vector<Cell> expand_cells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (NoiseMode mode : config.noise)
    for (double du : config.delta_u)
      for (double dpu : config.delta_pu)
        for (double p : config.p) cells.push_back({cells.size(), p, du, dpu, mode});
  return cells;
}

CellResult run_cell(const ExperimentConfig& config, const RegisteredProblem& problem,
                    const Cell& cell) {
  CellResult out;
  out.cell = cell;
  out.problem_id = problem.id;
  out.F_star = problem.F_star;
  if (problem.smoothness) out.nu = problem.smoothness->nu;
  const auto start = std::chrono::steady_clock::now();
  try {
    Problem instance = problem.problem;
    if (cell.delta_u > 0.0 && cell.noise != NoiseMode::zero) {
      NoiseSpec spec;
      spec.delta1_bar = cell.delta_u;
      spec.mode = cell.noise;
      spec.anchor = config.anchor_at_optimum ? problem.x_star : problem.problem.prox.center();
      instance.oracle = with_noise(problem.problem.oracle, spec, problem.problem.prox.norms());
    } else if (cell.delta_u > 0.0) {
      throw ConfigError("delta_u > 0 needs a noise mode other than zero");
    }
    SolverConfig cfg = config.solver;
    cfg.p = cell.p;
    cfg.delta_pu = cell.delta_pu;
    const PowerPolicy policy;
    const Uigm solver(instance, cfg, policy);
    RunResult run = solver.run();
    out.trace = std::move(run.trace);

    const GapSeries series = gap_series(out.trace, problem.F_star);
    if (!series.empty()) out.final_gap = series.back().second;
    const double k_max = out.trace.empty() ? 0.0 : static_cast<double>(out.trace.back().k);
    out.fit = fit_rate(series, config.fit_window ? *config.fit_window : default_fit_window(k_max));
    if (cell.delta_u > 0.0) out.floor = error_floor(series);
    if (!out.trace.empty()) out.oracle_calls = out.trace.back().oracle_calls_cum;
  } catch (const std::exception& e) {
    out.status = csv_safe(e.what());
  }
  if (config.timing)
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                      .count();
  return out;
}

std::vector<CellResult> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const RegisteredProblem problem = make_problem(config.problem_id, config.params);
  const std::vector<Cell> cells = expand_cells(config);
  const std::filesystem::path dir = resolve_output_dir(config);
  std::filesystem::create_directories(dir);

  std::vector<CellResult> results(cells.size());
  const long count = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    results[i] = run_cell(config, problem, cells[i]);
    char name[32];
    std::snprintf(name, sizeof name, "trace_%03zu.csv", cells[i].index);
    try {
      write_trace_csv((dir / name).string(), results[i].trace);
    } catch (const std::exception& e) {
      results[i].status = csv_safe(e.what());
    }
  }
  write_summary_csv((dir / "summary.csv").string(), results);
  emit_plotdata(dir.string(), results);
  return results;
}

void write_summary_csv(const std::string& path, std::span<const CellResult> results) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << kSummaryHeader << '\n';
  for (const CellResult& r : results) {
    out << r.problem_id << ',' << format_real(r.cell.p) << ',' << optional_field(r.nu) << ','
        << format_real(r.cell.delta_u) << ',' << format_real(r.cell.delta_pu) << ','
        << optional_field(r.final_gap) << ',';
    if (r.fit.available) out << format_real(r.fit.slope) << ',' << format_real(r.fit.r_squared);
    else out << ',';
    out << ',' << r.oracle_calls << ',' << optional_field(r.wall_ms) << ',';
    if (r.floor) out << format_real(r.floor->floor) << ',' << (r.floor->reliable ? 1 : 0);
    else out << ',';
    out << ',' << r.status << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty summary file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSummaryHeader) throw ConfigError("unexpected summary header");
  auto opt = [](const std::string& f, const char* key) -> std::optional<double> {
    if (f.empty()) return std::nullopt;
    return to_real(f, key);
  };
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) throw ConfigError("summary row with " + std::to_string(f.size()) + " fields");
    SummaryRow r;
    r.problem_id = f[0];
    r.p = to_real(f[1], "p");
    r.nu = opt(f[2], "nu");
    r.delta_u = to_real(f[3], "delta_u");
    r.delta_pu = to_real(f[4], "delta_pu");
    r.final_gap = opt(f[5], "final_gap");
    r.slope = opt(f[6], "slope");
    r.r_squared = opt(f[7], "r_squared");
    r.oracle_calls = to_integer(f[8], "oracle_calls");
    r.wall_ms = opt(f[9], "wall_ms");
    r.floor = opt(f[10], "floor");
    r.floor_reliable = f[11] == "1";
    r.status = f[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_plotdata(const std::string& dir, std::span<const CellResult> results) {
  const std::filesystem::path base = dir;
  std::filesystem::create_directories(base);
  std::ofstream gaps(base / "gap_vs_k.csv", std::ios::binary);
  std::ofstream floors(base / "floor_vs_p.csv", std::ios::binary);
  std::ofstream calls(base / "calls_per_iteration.csv", std::ios::binary);
  if (!gaps || !floors || !calls) throw ConfigError("cannot write plot data into '" + dir + "'");
  gaps << "cell,p,delta_u,delta_pu,noise,k,gap\n";
  floors << "problem_id,delta_u,delta_pu,noise,p,floor,floor_reliable\n";
  calls << "cell,k,calls_per_iteration\n";

  for (const CellResult& r : results) {
    const std::string head = std::to_string(r.cell.index) + ',' + format_real(r.cell.p) + ',' +
                             format_real(r.cell.delta_u) + ',' + format_real(r.cell.delta_pu) +
                             ',' + to_string(r.cell.noise) + ',';
    for (const TraceRecord& t : r.trace) {
      if (t.F_y) gaps << head << t.k << ',' << format_real(*t.F_y - r.F_star) << '\n';
      if (t.k > 0)
        calls << r.cell.index << ',' << t.k << ','
              << format_real(static_cast<double>(t.oracle_calls_cum) / static_cast<double>(t.k))
              << '\n';
    }
    if (r.floor)
      floors << r.problem_id << ',' << format_real(r.cell.delta_u) << ','
             << format_real(r.cell.delta_pu) << ',' << to_string(r.cell.noise) << ','
             << format_real(r.cell.p) << ',' << format_real(r.floor->floor) << ','
             << (r.floor->reliable ? 1 : 0) << '\n';
  }
}

int run_experiment(const std::string& config_path) {
  const ExperimentConfig config = load_config(config_path);
  const std::vector<CellResult> results = run_sweep(config);
  const bool any_ok = std::any_of(results.begin(), results.end(),
                                  [](const CellResult& r) { return r.status == "ok"; });
  return results.empty() || any_ok ? 0 : 1;
}

}  // namespace uigm::bench
