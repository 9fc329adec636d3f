#pragma once

#include <optional>

#include "uigm/core.hpp"

namespace uigm {

/// Hoelder data of a subgradient: ||g(x) - g(y)||_* <= M ||x - y||^nu.
struct HoelderInfo {
  double nu = 1.0;
  double M = 1.0;
};

/// Value/subgradient pair returned by an inexact first-order oracle.
struct OracleReply {
  double value = 0.0;
  DualVector subgrad;
};

/// Inexact first-order oracle for a convex function f on the feasible set.
///
/// `query(x, delta_c)` returns (f~, g~) such that for every feasible x'
///   0 <= f(x') - f~ - <g~, x' - x> <= L(delta_c)/2 ||x' - x||^2 + delta_c + delta_u.
/// `delta_c` is the accuracy the caller asks for; `delta_u()` is the error the
/// oracle cannot remove. `reference_value` is the noise-free f used by tests
/// and by the trace (it is never used to drive iterations).
class InexactOracle {
 public:
  virtual ~InexactOracle() = default;

  virtual Eigen::Index dim() const = 0;
  virtual OracleReply query(const Point& x, double delta_c) const = 0;
  virtual double delta_u() const { return 0.0; }
  virtual std::optional<HoelderInfo> smoothness() const { return std::nullopt; }
  virtual double reference_value(const Point& x) const = 0;
};

struct OracleCheck {
  bool lower_ok = false;
  bool upper_ok = false;
  /// Upper envelope minus the measured gap; negative when upper_ok fails.
  double slack = 0.0;
};

/// Evaluates both sides of the inexact-oracle inequality at the pair (x, y)
/// with the oracle queried at y and the true f(x) from `reference_value`.
OracleCheck check_oracle_inequality(const InexactOracle& oracle, const Point& x,
                                    const Point& y, double delta_c, double L,
                                    const NormPair& norms = NormPair{},
                                    const Tolerance& tol = kDefaultTolerance);

}  // namespace uigm
