#pragma once

#include <cstddef>
#include <span>

namespace uigm {

/// One trial of the coefficient sequences at outer iteration m, inner index i.
struct TrialCoefficients {
  double alpha = 0.0;   ///< weight of the new linearization
  double B = 0.0;       ///< weight of the new point in the y-update
  double A_next = 0.0;  ///< A_m + alpha
  double tau = 0.0;     ///< alpha / B
  bool clamped = false; ///< alpha was reduced to keep B <= A + alpha
};

struct PolicyState {
  double p = 2.0;
  std::size_t m = 0;  ///< outer iteration index
  double L = 1.0;     ///< current smoothness estimate L_m
  double A = 0.0;     ///< A_m
};

/// Source of trial coefficients for the inner line search. Any policy whose
/// trials satisfy 0 < alpha <= B <= A + alpha and B = alpha^2 2^i L drives
/// the solver.
class CoefficientPolicy {
 public:
  virtual ~CoefficientPolicy() = default;
  virtual TrialCoefficients trial(const PolicyState& state, int i) const = 0;
};

/// Largest inner index before 2^i scaling is treated as divergence.
inline constexpr int kMaxInnerIndex = 60;

/// alpha = c^(p-1) / (2^i L), B = c^(2p-2) / (2^i L), c = (m+1+2p)/(2p).
/// Throws LineSearchDivergence when i exceeds kMaxInnerIndex, and
/// ContractError if B drifts from alpha^2 2^i L.
TrialCoefficients power_trial(const PolicyState& state, int i);

/// Largest alpha with alpha^2 2^i L <= A + alpha. If `tc` asks for more,
/// returns alpha at that root with B = A + alpha; otherwise returns `tc`.
TrialCoefficients clamp_to_feasible(const TrialCoefficients& tc, double scaled_L, double A);

/// Power coefficients, clamped so that B <= A_m + alpha also holds after L_m
/// has dropped below the scale at which A_m was accumulated.
class PowerPolicy final : public CoefficientPolicy {
 public:
  TrialCoefficients trial(const PolicyState& state, int i) const override;
};

/// 0 < alpha <= B <= A_k + alpha, each with tolerance 1e-12.
bool check_feasible(const TrialCoefficients& tc, double A_k);

struct AcceptedWeights {
  double A = 0.0;
  double B = 0.0;
};

/// A_k >= B_k - 1e-12 * max(1, A_k) for every record.
bool check_AB_dominance(std::span<const AcceptedWeights> trace);

}  // namespace uigm
