#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "uigm/solver.hpp"

namespace uigm {

struct RestartConfig {
  double mu = 1.0;
  double Omega = 1.0;  ///< quadratic growth: d(x) <= Omega/2 ||x - center||^2
  double R0_sq = 1.0;  ///< ||x0 - x*||^2 <= R0_sq
  double epsilon = 1e-6;
  Point x0;

  void validate() const;
};

/// Raised when a UIGM pass fails; the original error is nested.
class RestartError : public Error {
 public:
  RestartError(const std::string& what, std::size_t restart) : Error(what), restart_(restart) {}
  std::size_t restart() const noexcept { return restart_; }

 private:
  std::size_t restart_;
};

struct RestartRecord {
  std::size_t m = 0;        ///< restart index, from 1
  std::size_t k_inner = 0;  ///< outer UIGM iterations of this pass
  double A_exit = 0.0;
  double A_before_exit = 0.0;  ///< A_{k-1}; 0 when the pass exits at k = 0
  std::optional<double> F_gap;
  std::optional<double> R_sq_bound;
  Point x_m;
};

struct RestartOptions {
  SolverConfig solver;  ///< epsilon is overwritten from RestartConfig
  std::optional<double> F_star;
  /// Hoelder data used for the contraction bound in the trace.
  std::optional<HoelderInfo> smoothness;
  /// Restart count; defaults to restart_count(rc).
  std::optional<std::size_t> restarts;
  std::function<void(const RestartRecord&)> observer;
  /// Forwarded to every UIGM pass together with the restart index.
  std::function<void(std::size_t, const SolverState&)> pass_observer;
};

struct RestartResult {
  Point solution;
  std::vector<RestartRecord> trace;
  std::size_t total_iterations = 0;
};

/// Restarted UIGM. Each pass runs until mu A_k >= 2 Omega with the Euclidean
/// prox recentered at the previous output. Entropy setups throw
/// UnsupportedSetup.
RestartResult restart_run(const Problem& problem, const RestartConfig& rc,
                          const CoefficientPolicy& policy, const RestartOptions& options = {});

/// ceil(log2(mu R0^2 / (2 eps))), at least 1.
std::size_t restart_count(const RestartConfig& rc);

/// (Omega^{1+nu} 2^{4p nu - nu + 3} M^2 / (mu^{1+nu} eps^{1-nu}))^{1/(2p nu - nu + 1)} + 1
double inner_iteration_bound(const RestartConfig& rc, double p, double nu, double M);

/// Minimum of inner_iteration_bound over the supplied (nu, M) pairs.
double inner_iteration_bound(const RestartConfig& rc, double p,
                             std::span<const HoelderInfo> candidates);

/// eps/2 + 2 ceil(2^{nu+1} Omega^{nu+1} M^2 / (mu^{nu+1} eps^{1-nu}))^{(p-1)/q} delta_u
///       + p 2^{(4p nu - nu + 3)/q} (Omega^{1+nu} M^2 / (mu^{1+nu} eps^{1-nu}))^{1/q} delta_pu,
/// q = 2p nu - nu + 1.
double restart_floor_term(const RestartConfig& rc, double p, const HoelderInfo& info,
                          double delta_u, double delta_pu);

/// mu R0^2 2^{-m-1} + 2 * floor term.
double restart_gap_bound(const RestartConfig& rc, std::size_t m, double floor_term);

/// R0^2 2^{-m} + 4/mu * floor term.
double restart_distance_bound(const RestartConfig& rc, std::size_t m, double floor_term);

/// d(x) <= Omega/2 ||x - center||^2 on `samples` points drawn around the center.
bool check_quadratic_growth(const ProxSetup& setup, double Omega, int samples = 200,
                            std::uint64_t seed = 7);

/// CSV with columns m,k_inner,A_exit,F_gap,R_sq_bound; missing values are empty.
void write_restart_csv(std::ostream& out, std::span<const RestartRecord> trace);

}  // namespace uigm
