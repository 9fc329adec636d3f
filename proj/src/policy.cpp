#include "uigm/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uigm/core.hpp"

namespace uigm {

TrialCoefficients power_trial(const PolicyState& state, int i) {
  if (i < 0) throw ContractError("power_trial: negative inner index");
  if (i > kMaxInnerIndex)
    throw LineSearchDivergence("line search exceeded 2^" + std::to_string(kMaxInnerIndex) +
                               " scaling");
  if (!(state.p >= 1.0 && state.p <= 2.0)) throw ContractError("power_trial: p outside [1,2]");
  if (!(state.L > 0.0)) throw ContractError("power_trial: L must be positive");

  const double c = (static_cast<double>(state.m) + 1.0 + 2.0 * state.p) / (2.0 * state.p);
  const double scaled_L = std::ldexp(state.L, i);  // 2^i L
  if (!std::isfinite(scaled_L) || scaled_L <= 0.0)
    throw LineSearchDivergence("line search scaling 2^i L is not representable");

  TrialCoefficients tc;
  tc.alpha = std::pow(c, state.p - 1.0) / scaled_L;
  tc.B = std::pow(c, 2.0 * state.p - 2.0) / scaled_L;
  tc.A_next = state.A + tc.alpha;
  tc.tau = tc.alpha / tc.B;

  const double identity = tc.alpha * tc.alpha * scaled_L;
  if (std::abs(identity - tc.B) > 1e-12 * std::max(tc.B, identity))
    throw ContractError("power_trial: B != alpha^2 2^i L");
  return tc;
}

TrialCoefficients clamp_to_feasible(const TrialCoefficients& tc, double scaled_L, double A) {
  // positive root of scaled_L a^2 - a - A = 0
  const double root = (1.0 + std::sqrt(1.0 + 4.0 * scaled_L * A)) / (2.0 * scaled_L);
  if (tc.alpha <= root) return tc;
  TrialCoefficients out;
  out.alpha = root;
  out.B = A + root;
  out.A_next = A + root;
  out.tau = out.alpha / out.B;
  out.clamped = true;
  const double identity = out.alpha * out.alpha * scaled_L;
  if (std::abs(identity - out.B) > 1e-12 * std::max(out.B, identity))
    throw ContractError("clamp_to_feasible: B != alpha^2 2^i L");
  return out;
}

TrialCoefficients PowerPolicy::trial(const PolicyState& state, int i) const {
  return clamp_to_feasible(power_trial(state, i), std::ldexp(state.L, i), state.A);
}

bool check_feasible(const TrialCoefficients& tc, double A_k) {
  constexpr double tol = 1e-12;
  const double scale = std::max({1.0, std::abs(tc.B), std::abs(A_k + tc.alpha)});
  return tc.alpha > 0.0 && tc.alpha <= tc.B + tol * scale &&
         tc.B <= A_k + tc.alpha + tol * scale;
}

bool check_AB_dominance(std::span<const AcceptedWeights> trace) {
  return std::all_of(trace.begin(), trace.end(), [](const AcceptedWeights& w) {
    return w.A >= w.B - 1e-12 * std::max(1.0, std::abs(w.A));
  });
}

}  // namespace uigm
