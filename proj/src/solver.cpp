#include "uigm/solver.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace uigm {

double ModelState::evaluate(const Problem& problem, const Point& x) const {
  return problem.prox.d(x) + dual_pairing(linear_acc, x) + scalar_acc +
         A * problem.composite.evaluate(x);
}

ModelState ModelState::extended(double alpha, const OracleReply& reply, const Point& at) const {
  ModelState out;
  out.linear_acc = linear_acc + alpha * reply.subgrad;
  out.scalar_acc = scalar_acc + alpha * (reply.value - dual_pairing(reply.subgrad, at));
  out.A = A + alpha;
  out.history_len = history_len + 1;
  return out;
}

void ErrorBudget::refresh(std::size_t k, double A, double epsilon) {
  E = 2.0 * sum_B * delta_u + (2.0 * static_cast<double>(k) + 1.0) * delta_pu + A * epsilon / 2.0;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::max_outer:
      return "max_outer";
    case StopReason::dual_stop:
      return "dual_stop";
    case StopReason::bound_certificate:
      return "bound_certificate";
    case StopReason::A_target:
      return "A_target";
    case StopReason::scale_exhausted:
      return "scale_exhausted";
  }
  return "max_outer";
}

Uigm::Uigm(const Problem& problem, SolverConfig config, const CoefficientPolicy& policy)
    : problem_(problem), config_(std::move(config)), policy_(policy) {
  config_.validate();
  if (!problem_.oracle) throw ContractError("problem has no oracle");
  if (problem_.oracle->dim() != problem_.prox.dim())
    throw ContractError("oracle and prox setup disagree in dimension");
}

TraceRecord Uigm::record(const SolverState& s, int inner_trials, double delta_c,
                         double delta_pc, double alpha, double scaled_L) const {
  TraceRecord r;
  r.k = s.it.k;
  r.inner_trials = inner_trials;
  r.L_k = s.it.L;
  r.A_k = s.model.A;
  r.B_k = s.it.B_last;
  r.F_y = problem_.F(s.it.y);
  r.psi_exact = s.psi_prox.exact;
  r.psi_star = s.psi_prox.objective_value -
               (s.psi_prox.exact ? 0.0 : s.psi_prox.delta_pc + s.psi_prox.delta_pu);
  r.E_k = s.budget.E;
  r.oracle_calls_cum = s.oracle_calls;
  r.delta_c_k = delta_c;
  r.alpha_k = alpha;
  r.delta_pc_k = delta_pc;
  r.scaled_L = scaled_L;
  return r;
}

SolverState Uigm::initialize() const {
  const double eps = config_.epsilon;
  const double L = config_.L0;
  const double delta_u = problem_.delta_u();
  const double delta_c0 = eps / 4.0;
  const auto n = problem_.prox.dim();
  const NormPair& norms = problem_.prox.norms();

  SolverState s;
  const ProxModel empty{DualVector::Zero(n), 0.0, 0.0};
  const ProxResult x0 =
      solve_prox(problem_.prox, problem_.composite, empty, eps / (4.0 * L), config_.delta_pu);
  const OracleReply at_x0 = problem_.oracle->query(x0.point, delta_c0);
  s.init_oracle_calls = 1;

  for (int i = 0;; ++i) {
    if (i > config_.max_inner || i > kMaxInnerIndex)
      throw InitializationDivergence("initial line search exceeded max_inner");
    const double scaled = std::ldexp(L, i);  // 2^i L
    const double a = 1.0 / scaled;
    ModelState model = ModelState{DualVector::Zero(n), 0.0, 0.0, 0}.extended(a, at_x0, x0.point);
    const ProxResult y0 = solve_prox(problem_.prox, problem_.composite, model.prox_model(),
                                     eps / (4.0 * scaled), config_.delta_pu);
    const OracleReply at_y0 = problem_.oracle->query(y0.point, delta_c0);
    ++s.init_oracle_calls;

    const Point diff = y0.point - x0.point;
    const double r = norms.primal(diff);
    const double rhs = at_x0.value + dual_pairing(at_x0.subgrad, diff) +
                       std::ldexp(L, i - 1) * r * r + eps / 8.0 + delta_u;
    if (at_y0.value <= rhs) {
      s.init_index = i;
      s.L_start = scaled;
      s.it.x = x0.point;
      s.it.z = y0.point;
      s.it.y = y0.point;
      s.it.L = scaled;
      s.it.B_last = a;
      s.it.k = 0;
      s.model = std::move(model);
      s.psi_prox = y0;
      s.budget.sum_B = a;
      s.budget.delta_u = delta_u;
      s.budget.delta_pu = config_.delta_pu;
      s.budget.refresh(0, a, eps);
      s.trace.push_back(record(s, 0, delta_c0, a * eps / 4.0, a, scaled));
      return s;
    }
  }
}

Candidate Uigm::inner_trial(const SolverState& s, int i) const {
  const double eps = config_.epsilon;
  Candidate c;
  c.i = i;
  c.L_k = s.it.L;
  c.coeffs = policy_.trial(PolicyState{config_.p, s.it.k, s.it.L, s.model.A}, i);
  const double alpha = c.coeffs.alpha;
  const double tau = c.coeffs.tau;
  c.delta_c = alpha / c.coeffs.B * eps / 8.0;
  c.delta_pc = eps * alpha / 8.0;
  c.delta_u = problem_.delta_u();

  c.x_trial = tau * s.it.z + (1.0 - tau) * s.it.y;
  c.at_x = problem_.oracle->query(c.x_trial, c.delta_c);
  c.model = s.model.extended(alpha, c.at_x, c.x_trial);
  c.z = solve_prox(problem_.prox, problem_.composite, c.model.prox_model(), c.delta_pc,
                   config_.delta_pu);
  c.w = tau * c.z.point + (1.0 - tau) * s.it.y;
  c.at_w = problem_.oracle->query(c.w, c.delta_c);
  const double r = problem_.prox.norms().primal(c.w - c.x_trial);
  c.dist_sq = r * r;
  return c;
}

bool Uigm::accept_test(const Candidate& c) const {
  const double rhs = c.at_x.value + dual_pairing(c.at_x.subgrad, c.w - c.x_trial) +
                     std::ldexp(c.L_k, c.i - 1) * c.dist_sq + 2.0 * c.delta_c + 2.0 * c.delta_u;
  return c.at_w.value <= rhs;
}

void Uigm::step(SolverState& s) const {
  for (int i = 0;; ++i) {
    if (i > config_.max_inner)
      throw LineSearchDivergence("inner line search exceeded max_inner at k = " +
                                 std::to_string(s.it.k));
    Candidate c = inner_trial(s, i);
    s.oracle_calls += 2;
    if (!accept_test(c)) continue;

    const double A = c.model.A;
    const double B = c.coeffs.B;
    s.it.y = ((A - B) / A) * s.it.y + (B / A) * c.w;
    s.it.x = std::move(c.x_trial);
    s.it.z = c.z.point;
    const double scaled_L = std::ldexp(c.L_k, i);
    s.it.L = std::ldexp(c.L_k, i - 1);
    s.it.B_last = B;
    s.it.k += 1;
    s.model = std::move(c.model);
    s.psi_prox = std::move(c.z);
    s.budget.sum_B += B;
    s.budget.refresh(s.it.k, A, config_.epsilon);
    if (!config_.keep_trace) s.trace.clear();
    s.trace.push_back(record(s, i + 1, c.delta_c, c.delta_pc, c.coeffs.alpha, scaled_L));
    return;
  }
}

bool Uigm::dual_stop(const SolverState& s) const {
  if (!config_.D) throw ContractError("dual_stop needs D >= d(x*)");
  const double A = s.model.A;
  const double psi_lower =
      s.psi_prox.objective_value - (s.psi_prox.exact ? 0.0 : s.psi_prox.delta_pc + s.psi_prox.delta_pu);
  const double F_lower = (psi_lower - *config_.D) / A;
  const double lhs = problem_.F(s.it.y) - F_lower;
  return lhs <= config_.epsilon + 2.0 * s.budget.delta_u * s.budget.sum_B / A;
}

double accuracy_bound(const SolverState& s, double d_star, double epsilon) {
  const double A = s.model.A;
  return d_star / A + 2.0 * s.budget.delta_u * s.budget.sum_B / A +
         (2.0 * static_cast<double>(s.it.k) + 1.0) * s.budget.delta_pu / A + epsilon / 2.0;
}

RunResult Uigm::run(const RunOptions& options) const {
  SolverState s = initialize();
  RunResult out;
  const auto d_ref = config_.d_bound ? config_.d_bound : config_.D;

  for (;;) {
    if (options.observer) options.observer(s);
    if (options.A_target && s.model.A >= *options.A_target) {
      out.reason = StopReason::A_target;
      break;
    }
    if (config_.D && dual_stop(s)) {
      out.reason = StopReason::dual_stop;
      break;
    }
    if (config_.d_bound && *config_.d_bound / s.model.A <= config_.epsilon / 2.0) {
      out.reason = StopReason::bound_certificate;
      break;
    }
    if (s.it.k >= config_.max_outer) {
      out.reason = StopReason::max_outer;
      break;
    }
    if (!std::isnormal(std::ldexp(s.it.L, -1))) {
      out.reason = StopReason::scale_exhausted;
      break;
    }
    step(s);
  }

  out.solution = s.it.y;
  out.trace = s.trace;
  out.bound = d_ref ? accuracy_bound(s, *d_ref, config_.epsilon)
                    : std::numeric_limits<double>::quiet_NaN();
  out.final_state = std::move(s);
  return out;
}

Theorem1Check theorem1_check(const Problem& problem, const SolverState& s, double rel_tol) {
  Theorem1Check out;
  out.rhs = prox_min_value(problem.prox, problem.composite, s.model.prox_model());
  out.lhs = s.model.A * problem.F(s.it.y) - s.budget.E;
  out.ok = out.lhs <= out.rhs + rel_tol * (1.0 + std::abs(out.rhs));
  return out;
}

bool oracle_call_identity(std::span<const TraceRecord> trace) {
  if (trace.empty()) return true;
  const double L0 = trace.front().L_k;
  for (const TraceRecord& r : trace) {
    int e = 0;
    const double mant = std::frexp(r.L_k / L0, &e);
    if (mant != 0.5) return false;  // ratio must be an exact power of two
    const long log2_ratio = e - 1;
    if (r.oracle_calls_cum != 4L * static_cast<long>(r.k) + 2L * log2_ratio) return false;
  }
  return true;
}

}  // namespace uigm
