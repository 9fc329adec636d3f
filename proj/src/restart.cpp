#include "uigm/restart.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "uigm/trace_io.hpp"

namespace uigm {

void RestartConfig::validate() const {
  if (!(mu > 0)) throw ConfigError("mu must be positive");
  if (!(Omega > 0)) throw ConfigError("Omega must be positive");
  if (!(R0_sq > 0)) throw ConfigError("R0_sq must be positive");
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
}

std::size_t restart_count(const RestartConfig& rc) {
  rc.validate();
  const double l = std::ceil(std::log2(rc.mu * rc.R0_sq / (2.0 * rc.epsilon)));
  return l < 1.0 ? 1 : static_cast<std::size_t>(l);
}

double inner_iteration_bound(const RestartConfig& rc, double p, double nu, double M) {
  rc.validate();
  const double q = 2.0 * p * nu - nu + 1.0;
  const double base = std::pow(rc.Omega, 1.0 + nu) * std::exp2(4.0 * p * nu - nu + 3.0) * M * M /
                      (std::pow(rc.mu, 1.0 + nu) * std::pow(rc.epsilon, 1.0 - nu));
  return std::pow(base, 1.0 / q) + 1.0;
}

double inner_iteration_bound(const RestartConfig& rc, double p,
                             std::span<const HoelderInfo> candidates) {
  double best = std::numeric_limits<double>::infinity();
  for (const HoelderInfo& h : candidates)
    if (std::isfinite(h.M)) best = std::min(best, inner_iteration_bound(rc, p, h.nu, h.M));
  return best;
}

double restart_floor_term(const RestartConfig& rc, double p, const HoelderInfo& info,
                          double delta_u, double delta_pu) {
  rc.validate();
  const double nu = info.nu;
  const double M = info.M;
  const double q = 2.0 * p * nu - nu + 1.0;
  const double growth = std::exp2(nu + 1.0) * std::pow(rc.Omega, nu + 1.0) * M * M /
                        (std::pow(rc.mu, nu + 1.0) * std::pow(rc.epsilon, 1.0 - nu));
  const double u_term = 2.0 * std::pow(std::ceil(growth), (p - 1.0) / q) * delta_u;
  double pu_term = 0.0;
  if (delta_pu > 0.0) {
    const double ratio = std::pow(rc.Omega, 1.0 + nu) * M * M /
                         (std::pow(rc.mu, 1.0 + nu) * std::pow(rc.epsilon, 1.0 - nu));
    pu_term = p * std::exp2((4.0 * p * nu - nu + 3.0) / q) * std::pow(ratio, 1.0 / q) * delta_pu;
  }
  return rc.epsilon / 2.0 + u_term + pu_term;
}

double restart_gap_bound(const RestartConfig& rc, std::size_t m, double floor_term) {
  return rc.mu * rc.R0_sq * std::exp2(-static_cast<double>(m) - 1.0) + 2.0 * floor_term;
}

double restart_distance_bound(const RestartConfig& rc, std::size_t m, double floor_term) {
  return rc.R0_sq * std::exp2(-static_cast<double>(m)) + 4.0 / rc.mu * floor_term;
}

bool check_quadratic_growth(const ProxSetup& setup, double Omega, int samples,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Eigen::Index n = setup.dim();
  for (int s = 0; s < samples; ++s) {
    Point u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = normal(rng);
    const double scale = std::ldexp(1.0, s % 12 - 6);
    const Point x = setup.center() + scale * u;
    const double r = setup.norms().primal(x - setup.center());
    if (setup.d(x) > Omega / 2.0 * r * r * (1.0 + 1e-12) + 1e-15) return false;
  }
  return true;
}

RestartResult restart_run(const Problem& problem, const RestartConfig& rc,
                          const CoefficientPolicy& policy, const RestartOptions& options) {
  rc.validate();
  if (problem.prox.kind() != ProxSetup::Kind::euclidean)
    throw UnsupportedSetup("restarts need a recenterable Euclidean prox setup");
  if (rc.x0.size() != problem.prox.dim()) throw ContractError("x0 has the wrong dimension");

  SolverConfig cfg = options.solver;
  cfg.epsilon = rc.epsilon;
  cfg.D.reset();
  cfg.d_bound.reset();
  cfg.keep_trace = false;
  const double A_target = 2.0 * rc.Omega / rc.mu;
  const std::size_t restarts = options.restarts ? *options.restarts : restart_count(rc);
  const double floor_term =
      options.smoothness
          ? restart_floor_term(rc, cfg.p, *options.smoothness, problem.delta_u(), cfg.delta_pu)
          : std::numeric_limits<double>::quiet_NaN();

  RestartResult out;
  Point center = rc.x0;
  for (std::size_t m = 1; m <= restarts; ++m) {
    const Problem pass{problem.oracle, problem.composite, problem.prox.recentered(center)};
    double A_prev = 0.0;
    double A_last = 0.0;
    RunOptions run_options;
    run_options.A_target = A_target;
    run_options.observer = [&](const SolverState& s) {
      A_prev = A_last;
      A_last = s.model.A;
      if (options.pass_observer) options.pass_observer(m, s);
    };
    RunResult run;
    try {
      const Uigm solver(pass, cfg, policy);
      run = solver.run(run_options);
    } catch (const Error& e) {
      std::throw_with_nested(
          RestartError("restart " + std::to_string(m) + ": " + e.what(), m));
    }
    if (run.reason != StopReason::A_target)
      throw RestartError("restart " + std::to_string(m) + " stopped by " +
                             to_string(run.reason) + " before reaching the A target",
                         m);

    RestartRecord rec;
    rec.m = m;
    rec.k_inner = run.final_state.it.k;
    rec.A_exit = run.final_state.model.A;
    rec.A_before_exit = rec.k_inner == 0 ? 0.0 : A_prev;
    if (options.F_star) rec.F_gap = problem.F(run.solution) - *options.F_star;
    if (options.smoothness) rec.R_sq_bound = restart_distance_bound(rc, m, floor_term);
    rec.x_m = run.solution;
    out.total_iterations += rec.k_inner;
    center = run.solution;
    if (options.observer) options.observer(rec);
    out.trace.push_back(std::move(rec));
  }
  out.solution = std::move(center);
  return out;
}

void write_restart_csv(std::ostream& out, std::span<const RestartRecord> trace) {
  out << "m,k_inner,A_exit,F_gap,R_sq_bound\n";
  for (const RestartRecord& r : trace) {
    out << r.m << ',' << r.k_inner << ',' << format_real(r.A_exit) << ',';
    if (r.F_gap) out << format_real(*r.F_gap);
    out << ',';
    if (r.R_sq_bound) out << format_real(*r.R_sq_bound);
    out << '\n';
  }
}

}  // namespace uigm
