#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "uigm/core.hpp"
#include "uigm/oracle.hpp"
#include "uigm/policy.hpp"
#include "uigm/prox.hpp"

namespace uigm {

/// min over Q of F(x) = f(x) + h(x).
struct Problem {
  std::shared_ptr<const InexactOracle> oracle;
  CompositeTerm composite;
  ProxSetup prox;

  /// Noise-free F used for traces, stopping tests and checks.
  double F(const Point& x) const { return oracle->reference_value(x) + composite.evaluate(x); }
  double delta_u() const { return oracle->delta_u(); }
};

/// Accumulated lower model
///   Psi_k(x) = d(x) + <linear_acc, x> + scalar_acc + A * h(x),
/// i.e. d plus the sum of alpha_j-weighted linearizations and alpha_j h.
struct ModelState {
  DualVector linear_acc;
  double scalar_acc = 0.0;
  double A = 0.0;
  std::size_t history_len = 0;

  ProxModel prox_model() const { return {linear_acc, A, scalar_acc}; }
  double evaluate(const Problem& problem, const Point& x) const;
  /// Model with one more term alpha * [f~ + <g~, . - at> + h].
  ModelState extended(double alpha, const OracleReply& reply, const Point& at) const;
};

struct IterateState {
  Point x;
  Point y;
  Point z;
  double L = 1.0;       ///< L_k
  double B_last = 0.0;  ///< B_k
  std::size_t k = 0;
};

/// E_k = 2 (sum_{i<=k} B_i) delta_u + (2k+1) delta_pu + A_k eps / 2.
struct ErrorBudget {
  double sum_B = 0.0;
  double delta_u = 0.0;
  double delta_pu = 0.0;
  double E = 0.0;

  void refresh(std::size_t k, double A, double epsilon);
};

struct TraceRecord {
  std::size_t k = 0;
  int inner_trials = 0;  ///< i_{k-1} + 1 for the step that produced this record; 0 at k = 0
  double L_k = 0.0;
  double A_k = 0.0;
  double B_k = 0.0;
  std::optional<double> F_y;
  std::optional<double> psi_star;  ///< certified lower bound on Psi_k*
  double E_k = 0.0;
  long oracle_calls_cum = 0;
  double delta_c_k = 0.0;

  // Not serialized.
  double alpha_k = 0.0;
  double delta_pc_k = 0.0;
  double scaled_L = 0.0;  ///< accepted 2^{i} L for the step that produced this record
  bool psi_exact = true;  ///< psi_star is the exact Psi_k* rather than a certified bound
};

struct SolverState {
  IterateState it;
  ModelState model;
  ErrorBudget budget;
  /// Prox solution whose objective certifies Psi_k* (y_0 at k = 0, z_k after).
  ProxResult psi_prox;
  double L_start = 1.0;  ///< L_0 of the outer loop, 2^{i_0} L
  int init_index = 0;    ///< i_0
  long oracle_calls = 0;
  long init_oracle_calls = 0;
  std::vector<TraceRecord> trace;
};

/// Everything computed by one inner trial (steps 6-7 of the outer loop).
struct Candidate {
  int i = 0;
  TrialCoefficients coeffs;
  double L_k = 0.0;
  double delta_c = 0.0;
  double delta_pc = 0.0;
  double delta_u = 0.0;
  Point x_trial;
  OracleReply at_x;
  ModelState model;
  ProxResult z;
  Point w;
  OracleReply at_w;
  double dist_sq = 0.0;  ///< ||w - x_trial||^2
};

/// scale_exhausted: L_k / 2 is no longer a normal double, so the next inner
/// line search could not be represented.
enum class StopReason { max_outer, dual_stop, bound_certificate, A_target, scale_exhausted };
const char* to_string(StopReason reason);

struct RunOptions {
  /// Stop once A_k reaches this value (used by the restart scheme).
  std::optional<double> A_target;
  /// Called after initialization and after every outer iteration.
  std::function<void(const SolverState&)> observer;
};

struct RunResult {
  Point solution;
  std::vector<TraceRecord> trace;
  /// Right side of d/A_k + 2 delta_u sum B / A_k + (2k+1) delta_pu / A_k + eps/2
  /// with d replaced by the configured d_bound or D; NaN when neither is set.
  double bound = 0.0;
  StopReason reason = StopReason::max_outer;
  SolverState final_state;
};

class Uigm {
 public:
  Uigm(const Problem& problem, SolverConfig config, const CoefficientPolicy& policy);

  const Problem& problem() const noexcept { return problem_; }
  const SolverConfig& config() const noexcept { return config_; }

  SolverState initialize() const;
  Candidate inner_trial(const SolverState& state, int i) const;
  bool accept_test(const Candidate& candidate) const;
  /// One outer iteration: inner line search plus commit.
  void step(SolverState& state) const;
  bool dual_stop(const SolverState& state) const;
  RunResult run(const RunOptions& options = {}) const;

 private:
  TraceRecord record(const SolverState& state, int inner_trials, double delta_c,
                     double delta_pc, double alpha, double scaled_L) const;

  const Problem& problem_;
  SolverConfig config_;
  const CoefficientPolicy& policy_;
};

/// d_star / A_k + 2 delta_u sum B / A_k + (2k+1) delta_pu / A_k + eps / 2 at the state's iteration.
double accuracy_bound(const SolverState& state, double d_star, double epsilon);

struct Theorem1Check {
  double lhs = 0.0;  ///< A_k F(y_k) - E_k
  double rhs = 0.0;  ///< Psi_k* from the exact prox solver
  bool ok = false;
};

/// A_k F(y_k) - E_k <= Psi_k* + 1e-8 (1 + |Psi_k*|).
Theorem1Check theorem1_check(const Problem& problem, const SolverState& state,
                             double rel_tol = 1e-8);

/// oracle_calls_cum(k) == 4k + 2 log2(L_k / L_0) at every record. Records
/// are indexed so that record k carries the calls of outer iterations 0..k-1.
bool oracle_call_identity(std::span<const TraceRecord> trace);

}  // namespace uigm
